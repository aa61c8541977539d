#include "resbench/error.hpp"
#include "resbench/experiments.hpp"
#include "resbench/parallel.hpp"
#include "resbench/rng.hpp"

#include <cmath>
#include <string>

namespace resbench {

Protocol Protocol::paper(ModelFamily family)
{
    Protocol p;
    p.n_series = family == ModelFamily::Esn ? 20 : 10;
    p.instances = family == ModelFamily::Esn ? 5 : 1;
    return p;
}

Protocol Protocol::desk(ModelFamily family)
{
    Protocol p;
    p.n_series = family == ModelFamily::Esn ? 5 : 3;
    p.instances = family == ModelFamily::Esn ? 2 : 1;
    return p;
}

Protocol Protocol::paper_sweep()
{
    Protocol p;
    p.n_series = 10;
    p.instances = 1;
    return p;
}

Protocol Protocol::desk_sweep()
{
    Protocol p;
    p.n_series = 3;
    p.instances = 1;
    return p;
}

void Protocol::validate() const
{
    if (n_series == 0) {
        throw ContractError("protocol: n_series must be at least 1");
    }
    if (instances == 0) {
        throw ContractError("protocol: instances must be at least 1");
    }
    if (train_len == 0 || train_len >= series_len) {
        throw ContractError("protocol: train_len must satisfy 0 < train_len < series_len");
    }
    if (washout >= train_len) {
        throw ContractError("protocol: washout must be shorter than train_len");
    }
}

std::uint64_t series_seed(std::uint64_t base_seed, TaskId task, std::size_t series_index)
{
    return derive_seed({base_seed, 0x5e51e5, static_cast<std::uint64_t>(task), series_index});
}

std::uint64_t model_seed(std::uint64_t base_seed, TaskId task, ModelFamily family,
                         std::size_t series_index, std::size_t instance_index)
{
    return derive_seed({base_seed, 0x30de1, static_cast<std::uint64_t>(task),
                        static_cast<std::uint64_t>(family), series_index, instance_index});
}

namespace {

void check_hyper(ModelFamily family, const Hyperparams& h)
{
    if (h.size == 0) {
        throw ContractError("model size must be at least 1");
    }
    if (family == ModelFamily::Esn && !(h.sigma_w > 0.0 && std::isfinite(h.sigma_w))) {
        throw ContractError("ESN sigma_w must be positive");
    }
    if (family == ModelFamily::DelayLine && h.size > kMaxDelayLineTaps) {
        throw ContractError("delay line is capped at " + std::to_string(kMaxDelayLineTaps)
                            + " taps");
    }
}

TrainedModel train_one(ModelFamily family, const Hyperparams& h, const Dataset& data,
                       std::uint64_t seed, const ExecOptions& exec)
{
    switch (family) {
    case ModelFamily::DelayLine:
        return dl_train(h.size, data);
    case ModelFamily::Narx:
        return narx_train(h.size, data, seed, exec.lm);
    case ModelFamily::Esn:
        return esn_train(esn_init(h.size, h.sigma_w, seed), data);
    }
    throw ContractError("unknown model family");
}

RunRecord execute_run(ModelFamily family, const Hyperparams& h, TaskId task,
                      const Protocol& protocol, const ExecOptions& exec, std::size_t series_index,
                      std::size_t instance_index)
{
    RunRecord rec;
    rec.series_index = series_index;
    rec.instance_index = instance_index;
    rec.series_seed = series_seed(protocol.base_seed, task, series_index);
    rec.model_seed = model_seed(protocol.base_seed, task, family, series_index, instance_index);
    rec.errors.label
        = "series=" + std::to_string(series_index) + " instance=" + std::to_string(instance_index);
    try {
        const Dataset data = make_dataset(generate(task, protocol.series_len, rec.series_seed),
                                          protocol.train_len, protocol.washout);
        const TrainedModel model = train_one(family, h, data, rec.model_seed, exec);
        rec.meta = model.meta;
        const std::span<const double> u(data.series.u);
        const std::vector<double> y = predict(model, exec.train_only ? u.first(data.train_len) : u);
        const std::span<const double> target(data.series.y_hat);
        for (Split s : kSplits) {
            if (s == Split::Test && exec.train_only) {
                for (Metric m : kMetrics) {
                    rec.errors.at(m, s).diagnostic = "test segment skipped";
                }
                continue;
            }
            const StepRange rows = s == Split::Train ? data.train_rows() : data.test_rows();
            const auto yy = std::span<const double>(y).subspan(rows.begin, rows.size());
            const auto tt = target.subspan(rows.begin, rows.size());
            for (Metric m : kMetrics) {
                rec.errors.at(m, s) = evaluate(m, yy, tt);
            }
        }
    } catch (const ContractError&) {
        throw;
    } catch (const std::exception& e) {
        rec.failure = e.what();
        for (Metric m : kMetrics) {
            for (Split s : kSplits) {
                rec.errors.at(m, s).diagnostic = std::string("run failed: ") + e.what();
            }
        }
    }
    return rec;
}

} // namespace

std::vector<ProtocolResult> run_protocols(ModelFamily family, std::span<const Hyperparams> configs,
                                          TaskId task, const Protocol& protocol,
                                          const ExecOptions& exec)
{
    protocol.validate();
    for (const Hyperparams& h : configs) {
        check_hyper(family, h);
    }
    const std::size_t instances = protocol.instances_for(family);
    const std::size_t per_config = protocol.n_series * instances;
    std::vector<RunRecord> records(configs.size() * per_config);

    parallel_for(records.size(), exec.workers, [&](std::size_t job) {
        const std::size_t config = job / per_config;
        const std::size_t run = job % per_config;
        records[job] = execute_run(family, configs[config], task, protocol, exec,
                                   run / instances, run % instances);
    });

    std::vector<ProtocolResult> out(configs.size());
    for (std::size_t c = 0; c < configs.size(); ++c) {
        ProtocolResult& r = out[c];
        r.family = family;
        r.hyper = configs[c];
        r.runs.assign(records.begin() + static_cast<std::ptrdiff_t>(c * per_config),
                      records.begin() + static_cast<std::ptrdiff_t>((c + 1) * per_config));
        std::vector<RunErrors> errors;
        errors.reserve(r.runs.size());
        for (const RunRecord& rec : r.runs) {
            errors.push_back(rec.errors);
        }
        ModelSpec spec{family, configs[c].size, configs[c].sigma_w, 0};
        r.report = aggregate(errors, task, spec.describe());
        if (exec.train_only) {
            // Skipped test cells are not failures.
            std::erase_if(r.report.diagnostics, [](const std::string& d) {
                return d.find("test segment skipped") != std::string::npos;
            });
        }
    }
    return out;
}

ProtocolResult run_protocol(ModelFamily family, Hyperparams hyper, TaskId task,
                            const Protocol& protocol, const ExecOptions& exec)
{
    return std::move(run_protocols(family, std::span(&hyper, 1), task, protocol, exec).front());
}

} // namespace resbench
