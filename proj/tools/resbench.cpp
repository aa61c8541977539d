// resbench command-line front end.

#include "resbench/config.hpp"
#include "resbench/error.hpp"
#include "resbench/experiments.hpp"
#include "resbench/io.hpp"
#include "resbench/report.hpp"
#include "resbench/rng.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>

using namespace resbench;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNumerical = 2;

/// Flag storage for every configuration key; only flags that were actually
/// given end up in the command-line layer.
struct Flags {
    std::string config_file;
    std::size_t workers = 0;

    std::string task, model, preset;
    std::uint64_t base_seed = 0, seed = 0;
    std::size_t n = 0, steps = 0, n_series = 0, series_len = 0, train_len = 0, instances = 0,
                washout = 0;
    double sigma = 0.0;
    std::vector<std::size_t> n_grid;
    std::vector<double> sigma_grid;
    int lm_max_iterations = 0;

    std::vector<std::pair<std::string, CLI::Option*>> options;

    template <class T>
    void add(CLI::App* app, const std::string& key, const std::string& flag, T& store,
             const std::string& help)
    {
        CLI::Option* o = app->add_option(flag, store, help);
        if constexpr (std::is_same_v<T, std::vector<std::size_t>>
                      || std::is_same_v<T, std::vector<double>>) {
            o->delimiter(',');
        }
        options.emplace_back(key, o);
    }

    Json layer() const
    {
        Json j = Json::object();
        for (const auto& [key, o] : options) {
            if (o->count() == 0) {
                continue;
            }
            if (key == "task") j[key] = task;
            else if (key == "model") j[key] = model;
            else if (key == "preset") j[key] = preset;
            else if (key == "base_seed") j[key] = base_seed;
            else if (key == "seed") j[key] = seed;
            else if (key == "n") j[key] = n;
            else if (key == "sigma") j[key] = sigma;
            else if (key == "steps") j[key] = steps;
            else if (key == "n_series") j[key] = n_series;
            else if (key == "series_len") j[key] = series_len;
            else if (key == "train_len") j[key] = train_len;
            else if (key == "instances") j[key] = instances;
            else if (key == "washout") j[key] = washout;
            else if (key == "n_grid") j[key] = n_grid;
            else if (key == "sigma_grid") j[key] = sigma_grid;
            else if (key == "lm_max_iterations") j[key] = lm_max_iterations;
        }
        return j;
    }

    RunConfig resolve() const
    {
        const Json file = config_file.empty() ? Json(nullptr) : load_config_file(config_file);
        std::optional<std::string> env;
        if (const char* s = std::getenv("RESBENCH_SEED")) {
            env = s;
        }
        return resolve_config(file, layer(), env);
    }
};

void add_common(CLI::App* app, Flags& f)
{
    app->add_option("--config", f.config_file, "JSON configuration file")->check(CLI::ExistingFile);
    f.add(app, "base_seed", "--base-seed", f.base_seed, "Base seed (RESBENCH_SEED overrides)");
    f.add(app, "preset", "--preset", f.preset, "paper or desk");
}

void add_protocol(CLI::App* app, Flags& f)
{
    f.add(app, "n_series", "--n-series", f.n_series, "Series per configuration");
    f.add(app, "series_len", "--series-len", f.series_len, "Steps per series");
    f.add(app, "train_len", "--train-len", f.train_len, "Training prefix length");
    f.add(app, "instances", "--instances", f.instances, "ESN reservoirs per series");
    f.add(app, "washout", "--washout", f.washout, "Leading training steps excluded from fit and errors");
    f.add(app, "lm_max_iterations", "--lm-max-iterations", f.lm_max_iterations,
          "Levenberg-Marquardt iteration cap (NARX)");
    app->add_option("--workers", f.workers, "Worker threads, 0 = all cores");
}

void write_json(const std::string& path, const Json& j)
{
    std::ofstream out(path);
    if (!out) {
        throw ContractError("cannot write " + path);
    }
    out << j.dump(2) << '\n';
}

CsvTable annotate(CsvTable t, const Provenance& p)
{
    auto lines = provenance_lines(p);
    lines.insert(lines.end(), t.comments.begin(), t.comments.end());
    t.comments = std::move(lines);
    return t;
}

std::string comment(const CsvTable& t, const std::string& key)
{
    for (const std::string& c : t.comments) {
        if (c.starts_with(key + "=")) {
            return c.substr(key.size() + 1);
        }
    }
    return {};
}

int cmd_gen(const Flags& f, const std::string& out)
{
    const RunConfig c = f.resolve();
    const std::uint64_t seed = c.seed.value_or(series_seed(c.base_seed, c.task, 0));
    const SeriesPair pair = generate(c.task, c.steps, seed);
    write_csv(out, annotate(series_table(pair), make_provenance("gen", c)));
    return kOk;
}

int cmd_train(const Flags& f, const std::string& series_file, const std::string& out)
{
    const RunConfig c = f.resolve();
    const Protocol p = c.protocol();
    SeriesPair pair;
    if (!series_file.empty()) {
        CsvTable t = read_csv(series_file);
        const std::string task = comment(t, "task");
        pair = series_from_table(t, task.empty() ? c.task : parse_task(task));
    } else {
        pair = generate(c.task, p.series_len, c.seed.value_or(series_seed(c.base_seed, c.task, 0)));
    }
    const Dataset data = make_dataset(pair, p.train_len, p.washout);
    const std::uint64_t mseed = c.seed ? derive_seed({*c.seed, static_cast<std::uint64_t>(c.model)})
                                       : model_seed(c.base_seed, c.task, c.model, 0, 0);
    TrainedModel model;
    switch (c.model) {
    case ModelFamily::DelayLine:
        model = dl_train(c.n, data);
        break;
    case ModelFamily::Esn:
        model = esn_train(esn_init(c.n, c.sigma, mseed), data);
        break;
    case ModelFamily::Narx:
        model = narx_train(c.n, data, mseed, c.lm_options());
        break;
    }
    const RunErrors errors = evaluate_run(predict(model, data.series.u), data);
    Json j = model_to_json(model);
    j["task"] = std::string(to_string(pair.task));
    j["series_seed"] = pair.seed;
    Json e = Json::object();
    for (Metric m : kMetrics) {
        for (Split s : kSplits) {
            const MetricValue& v = errors.at(m, s);
            e[to_string(m)][to_string(s)] = v.value ? Json(*v.value) : Json(nullptr);
        }
    }
    j["errors"] = std::move(e);
    j["provenance"] = provenance_json(make_provenance("train", c));
    write_json(out, j);
    if (!model.meta.train_rnmse) {
        std::cerr << "resbench: training error is undefined\n";
        return kNumerical;
    }
    return kOk;
}

int cmd_sweep(const Flags& f, const std::string& out)
{
    const RunConfig c = f.resolve();
    ExecOptions exec;
    exec.workers = f.workers;
    exec.lm = c.lm_options();
    const auto ns = c.resolved_n_grid();
    const auto sigmas = c.resolved_sigma_grid();
    const ErrorSurface s = sweep_surface(c.task, c.model, ns, sigmas, c.sweep_protocol(), exec);
    write_csv(out, annotate(surface_table(s), make_provenance("sweep", c)));
    std::size_t failed = 0;
    for (const SurfaceCell& cell : s.cells) {
        failed += cell.failed ? 1 : 0;
    }
    if (failed > 0) {
        std::cerr << "resbench: " << failed << " surface cell(s) had no successful run\n";
        return kNumerical;
    }
    return kOk;
}

int cmd_fit_sigma(const Flags& f, const std::string& surface_file, const std::string& out)
{
    const RunConfig c = f.resolve();
    const CsvTable t = read_csv(surface_file);
    const ErrorSurface s = surface_from_table(t);
    const auto points = optimal_sigma(s);
    Json pts = Json::array();
    Json diags = Json::array();
    for (const OptimalSigma& p : points) {
        pts.push_back(Json{{"n", p.n},
                           {"sigma_w", p.ok ? Json(p.sigma) : Json(nullptr)},
                           {"train_rnmse", p.ok ? Json(p.error) : Json(nullptr)}});
        if (!p.ok) {
            diags.push_back(p.diagnostic);
        }
    }
    Json j;
    j["task"] = std::string(to_string(s.task));
    j["model"] = "a*N^b+c";
    j["points"] = std::move(pts);
    j["diagnostics"] = std::move(diags);
    j["surface"] = Json{{"path", surface_file}, {"config_hash", comment(t, "config_hash")}};
    j["provenance"] = provenance_json(make_provenance("fit-sigma", c));
    int rc = kOk;
    const auto usable = std::count_if(points.begin(), points.end(), [](const OptimalSigma& p) { return p.ok; });
    if (usable < 4) {
        j["fit"] = nullptr;
        j["diagnostics"].push_back("only " + std::to_string(usable) + " usable optimal-sigma points, need 4");
        write_json(out, j);
        std::cerr << "resbench: numerical failure: too few usable optimal-sigma points\n";
        return kNumerical;
    }
    try {
        j["fit"] = fit_to_json(fit_optimal_sigma_curve(points));
    } catch (const NumericalError& e) {
        j["fit"] = nullptr;
        j["diagnostics"].push_back(e.what());
        std::cerr << "resbench: " << e.what() << '\n';
        rc = kNumerical;
    }
    write_json(out, j);
    return rc;
}

int cmd_compare(const Flags& f, const std::string& ref, const std::string& cand,
                const std::string& out)
{
    const RunConfig c = f.resolve();
    const CsvTable rt = read_csv(ref);
    const CsvTable ct = read_csv(cand);
    const std::string task = comment(rt, "task");
    const EquivalenceCurve curve = functional_compare(curve_from_table(rt), curve_from_table(ct),
                                                      task.empty() ? c.task : parse_task(task));
    CsvTable t = annotate(equivalence_table(curve), make_provenance("compare", c));
    t.comments.push_back("reference=" + ref + " config_hash=" + comment(rt, "config_hash"));
    t.comments.push_back("candidate=" + cand + " config_hash=" + comment(ct, "config_hash"));
    write_csv(out, t);
    return kOk;
}

EquivalenceCurve equivalence_from_table(const CsvTable& t)
{
    EquivalenceCurve curve;
    if (const std::string task = comment(t, "task"); !task.empty()) {
        curve.task = parse_task(task);
    }
    const std::size_t cn = t.column("reference_n");
    const std::size_t ce = t.column("reference_train_rnmse");
    const std::size_t cm = t.column("matched_size");
    const std::size_t cme = t.column("matched_train_rnmse");
    const std::size_t cs = t.column("status");
    for (const auto& row : t.rows) {
        EquivalencePoint p;
        p.reference_size = parse_double(row[cn]);
        p.reference_error = parse_double(row[ce]);
        if (const double m = parse_double(row[cm]); std::isfinite(m)) {
            p.matched_size = m;
        }
        if (const double m = parse_double(row[cme]); std::isfinite(m)) {
            p.matched_error = m;
        }
        p.status = row[cs] == "matched" ? MatchStatus::Matched
            : row[cs] == "below_range"  ? MatchStatus::BelowRange
                                        : MatchStatus::Unreachable;
        curve.points.push_back(p);
    }
    return curve;
}

int cmd_report(const Flags& f, bool run_sizes, const std::string& powerlaw,
               const std::string& surface, const std::string& equivalence, const std::string& dir)
{
    const RunConfig c = f.resolve();
    ReportInputs in;
    if (run_sizes) {
        std::optional<Json> fit;
        if (!powerlaw.empty()) {
            std::ifstream pin(powerlaw);
            if (!pin) {
                throw ContractError("cannot open " + powerlaw);
            }
            fit = Json::parse(pin).at("fit");
            if (fit->is_null()) {
                throw NumericalError(powerlaw + " holds no fitted power law");
            }
        }
        std::vector<Hyperparams> configs;
        for (std::size_t n : c.resolved_n_grid()) {
            double sigma = c.sigma;
            if (fit) {
                sigma = fit->at("a").get<double>() * std::pow(static_cast<double>(n), fit->at("b").get<double>())
                    + fit->at("c").get<double>();
            }
            configs.push_back({n, sigma});
        }
        ExecOptions exec;
        exec.workers = f.workers;
        exec.lm = c.lm_options();
        in.results = run_protocols(c.model, configs, c.task, c.protocol(), exec);
    }
    if (!surface.empty()) {
        in.surface = surface_from_table(read_csv(surface));
    }
    if (!equivalence.empty()) {
        in.equivalence = equivalence_from_table(read_csv(equivalence));
    }
    const ReportOutput o = write_report(dir, in, make_provenance("report", c));
    for (const std::string& w : o.warnings) {
        std::cerr << "resbench: warning: " << w << '\n';
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Benchmark harness for delay lines, NARX networks and echo state networks"};
    app.require_subcommand(1);
    Flags f;

    CLI::App* gen = app.add_subcommand("gen", "Generate one input/target series");
    std::string out;
    add_common(gen, f);
    f.add(gen, "task", "--task", f.task, "henon, narma10 or narma20");
    f.add(gen, "steps", "--steps", f.steps, "Series length");
    f.add(gen, "seed", "--seed", f.seed, "Series seed");
    gen->add_option("--out", out, "Output CSV")->required();

    CLI::App* train = app.add_subcommand("train", "Train one model on one series");
    std::string series_file;
    add_common(train, f);
    add_protocol(train, f);
    f.add(train, "task", "--task", f.task, "henon, narma10 or narma20");
    f.add(train, "model", "--model", f.model, "dl, narx or esn");
    f.add(train, "n", "--n", f.n, "Taps, hidden units or reservoir nodes");
    f.add(train, "sigma", "--sigma", f.sigma, "ESN weight standard deviation");
    f.add(train, "seed", "--seed", f.seed, "Run seed");
    train->add_option("--series", series_file, "Train on this series CSV instead of generating one")
        ->check(CLI::ExistingFile);
    train->add_option("--out", out, "Output model JSON")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "Sweep the training-error surface");
    add_common(sweep, f);
    add_protocol(sweep, f);
    f.add(sweep, "task", "--task", f.task, "henon, narma10 or narma20");
    f.add(sweep, "model", "--model", f.model, "dl, narx or esn");
    f.add(sweep, "n_grid", "--n-grid", f.n_grid, "Comma-separated sizes");
    f.add(sweep, "sigma_grid", "--sigma-grid", f.sigma_grid, "Comma-separated sigma_w values (ESN)");
    sweep->add_option("--out", out, "Output surface CSV")->required();

    CLI::App* fit = app.add_subcommand("fit-sigma", "Fit a*N^b+c to the optimal sigma_w of a surface");
    std::string surface_file;
    add_common(fit, f);
    fit->add_option("--surface", surface_file, "Surface CSV")->required()->check(CLI::ExistingFile);
    fit->add_option("--out", out, "Output JSON")->required();

    CLI::App* compare = app.add_subcommand("compare", "Match candidate sizes to reference sizes at equal training RNMSE");
    std::string ref, cand;
    add_common(compare, f);
    f.add(compare, "task", "--task", f.task, "Task label when the files carry none");
    compare->add_option("--ref", ref, "Reference surface or curve CSV")->required()->check(CLI::ExistingFile);
    compare->add_option("--cand", cand, "Candidate surface or curve CSV")->required()->check(CLI::ExistingFile);
    compare->add_option("--out", out, "Output equivalence CSV")->required();

    CLI::App* report = app.add_subcommand("report", "Write result tables and plot data");
    std::string powerlaw, rep_surface, rep_equiv;
    add_common(report, f);
    add_protocol(report, f);
    f.add(report, "task", "--task", f.task, "henon, narma10 or narma20");
    f.add(report, "model", "--model", f.model, "dl, narx or esn");
    f.add(report, "sigma", "--sigma", f.sigma, "ESN sigma_w for every size");
    f.add(report, "n_grid", "--n-grid", f.n_grid, "Sizes to run; without it no protocol runs happen");
    report->add_option("--powerlaw", powerlaw, "Take sigma_w per size from a fit-sigma JSON")
        ->check(CLI::ExistingFile);
    report->add_option("--surface", rep_surface, "Surface CSV to include")->check(CLI::ExistingFile);
    report->add_option("--equivalence", rep_equiv, "Equivalence CSV to include")->check(CLI::ExistingFile);
    report->add_option("--out-dir", out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (gen->parsed()) {
            return cmd_gen(f, out);
        }
        if (train->parsed()) {
            return cmd_train(f, series_file, out);
        }
        if (sweep->parsed()) {
            return cmd_sweep(f, out);
        }
        if (fit->parsed()) {
            return cmd_fit_sigma(f, surface_file, out);
        }
        if (compare->parsed()) {
            return cmd_compare(f, ref, cand, out);
        }
        if (report->parsed()) {
            bool sizes = false;
            for (const auto& [key, o] : f.options) {
                sizes = sizes || (key == "n_grid" && o->count() > 0);
            }
            if (!f.config_file.empty() && load_config_file(f.config_file).contains("n_grid")) {
                sizes = true;
            }
            return cmd_report(f, sizes, powerlaw, rep_surface, rep_equiv, out);
        }
    } catch (const ConfigError& e) {
        std::cerr << "resbench: configuration error: " << e.what() << '\n';
        return kUsage;
    } catch (const ContractError& e) {
        std::cerr << "resbench: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "resbench: numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}
