#include "resbench/error.hpp"
#include "resbench/metrics.hpp"
#include "resbench/models.hpp"
#include "model_internal.hpp"

#include <cstdio>
#include <string>

namespace resbench {

std::string_view to_string(ModelFamily family) noexcept
{
    switch (family) {
    case ModelFamily::DelayLine:
        return "dl";
    case ModelFamily::Narx:
        return "narx";
    case ModelFamily::Esn:
        return "esn";
    }
    return "unknown";
}

ModelFamily parse_model(std::string_view name)
{
    if (name == "dl") {
        return ModelFamily::DelayLine;
    }
    if (name == "narx") {
        return ModelFamily::Narx;
    }
    if (name == "esn") {
        return ModelFamily::Esn;
    }
    throw ContractError("unknown model '" + std::string(name) + "' (expected dl, narx, esn)");
}

std::string ModelSpec::describe() const
{
    std::string out(to_string(family));
    out += " N=" + std::to_string(size);
    if (family == ModelFamily::Esn) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", sigma_w);
        out += " sigma_w=";
        out += buf;
    }
    return out;
}

void detail::record_training_error(TrainedModel& model, const Dataset& data,
                                   std::span<const double> prediction)
{
    const StepRange rows = data.train_rows();
    if (prediction.size() < rows.end) {
        throw ContractError("record_training_error: prediction shorter than the training segment");
    }
    const auto y = prediction.subspan(rows.begin, rows.size());
    const auto t = std::span<const double>(data.series.y_hat).subspan(rows.begin, rows.size());
    double sse = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        sse += (y[i] - t[i]) * (y[i] - t[i]);
    }
    model.meta.sse = sse;
    const MetricValue v = evaluate(Metric::Rnmse, y, t);
    model.meta.train_rnmse = v.value;
}

std::vector<double> predict(const TrainedModel& model, std::span<const double> u)
{
    struct Visitor {
        std::span<const double> u;
        std::vector<double> operator()(const DelayLineWeights& w) const
        {
            return detail::predict_delay_line(w, u);
        }
        std::vector<double> operator()(const EsnWeights& w) const
        {
            return detail::esn_readout(esn_states(w.params, u), w.w_out);
        }
        std::vector<double> operator()(const NarxWeights& w) const
        {
            return detail::predict_narx(w.params, u);
        }
    };
    return std::visit(Visitor{u}, model.weights);
}

} // namespace resbench
