#include "resbench/io.hpp"

#include "resbench/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace resbench {

std::string hash_config(const Json& config)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : config.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double x)
{
    if (!std::isfinite(x)) {
        return "NA";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(std::string_view text)
{
    if (text == "NA") {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ContractError("not a number: '" + std::string(text) + "'");
    }
    return v;
}

std::size_t CsvTable::column(std::string_view name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw ContractError("missing CSV column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

std::string comment_value(const CsvTable& t, std::string_view key)
{
    const std::string prefix = std::string(key) + "=";
    for (const std::string& c : t.comments) {
        if (c.starts_with(prefix)) {
            return c.substr(prefix.size());
        }
    }
    return {};
}

std::size_t parse_count(const std::string& text)
{
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ContractError("not a count: '" + text + "'");
    }
    return v;
}

} // namespace

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ContractError("cannot open " + path.string());
    }
    CsvTable t;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            t.comments.push_back(line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1));
        } else if (t.header.empty()) {
            t.header = split(line);
        } else {
            auto row = split(line);
            if (row.size() != t.header.size()) {
                throw ContractError(path.string() + ": row has " + std::to_string(row.size())
                                    + " fields, header has " + std::to_string(t.header.size()));
            }
            t.rows.push_back(std::move(row));
        }
    }
    if (t.header.empty()) {
        throw ContractError(path.string() + ": no header line");
    }
    return t;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw ContractError("cannot write " + path.string());
    }
    for (const std::string& c : table.comments) {
        out << "# " << c << '\n';
    }
    auto emit = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            out << (i ? "," : "") << fields[i];
        }
        out << '\n';
    };
    emit(table.header);
    for (const auto& row : table.rows) {
        emit(row);
    }
}

std::vector<std::string> provenance_lines(const Provenance& p)
{
    return {"resbench " + p.command, "config_hash=" + p.config_hash,
            "base_seed=" + std::to_string(p.base_seed), "config=" + p.config.dump()};
}

Json provenance_json(const Provenance& p)
{
    return Json{{"command", p.command},
                {"config_hash", p.config_hash},
                {"base_seed", p.base_seed},
                {"config", p.config}};
}

CsvTable series_table(const SeriesPair& pair)
{
    CsvTable t;
    t.comments = {"task=" + std::string(to_string(pair.task)), "seed=" + std::to_string(pair.seed)};
    t.header = {"t", "u", "y_hat"};
    for (std::size_t i = 0; i < pair.size(); ++i) {
        t.rows.push_back({std::to_string(i), format_double(pair.u[i]), format_double(pair.y_hat[i])});
    }
    return t;
}

SeriesPair series_from_table(const CsvTable& table, TaskId task)
{
    const std::size_t cu = table.column("u");
    const std::size_t cy = table.column("y_hat");
    SeriesPair p;
    p.task = task;
    if (const std::string s = comment_value(table, "seed"); !s.empty()) {
        p.seed = std::stoull(s);
    }
    for (const auto& row : table.rows) {
        p.u.push_back(parse_double(row[cu]));
        p.y_hat.push_back(parse_double(row[cy]));
    }
    return p;
}

CsvTable surface_table(const ErrorSurface& s)
{
    CsvTable t;
    t.comments = {"task=" + std::string(to_string(s.task)),
                  "model=" + std::string(to_string(s.family))};
    t.header = {"sigma_w", "n", "mean_train_rnmse", "std", "runs", "failed"};
    for (std::size_t i = 0; i < s.sigma_grid.size(); ++i) {
        for (std::size_t j = 0; j < s.n_grid.size(); ++j) {
            const SurfaceCell& c = s.at(i, j);
            t.rows.push_back({format_double(s.sigma_grid[i]), format_double(s.n_grid[j]),
                              format_double(c.mean), format_double(c.std), std::to_string(c.runs),
                              c.failed ? "1" : "0"});
        }
    }
    return t;
}

ErrorSurface surface_from_table(const CsvTable& t)
{
    const std::size_t cs = t.column("sigma_w");
    const std::size_t cn = t.column("n");
    const std::size_t cm = t.column("mean_train_rnmse");
    const std::size_t cd = t.column("std");
    const std::size_t cr = t.column("runs");
    const std::size_t cf = t.column("failed");
    ErrorSurface s;
    if (const std::string v = comment_value(t, "task"); !v.empty()) {
        s.task = parse_task(v);
    }
    if (const std::string v = comment_value(t, "model"); !v.empty()) {
        s.family = parse_model(v);
    }
    // NaN sigma (no sigma axis) sorts as a single key.
    auto key = [](double x) { return std::isnan(x) ? -std::numeric_limits<double>::infinity() : x; };
    std::map<double, std::map<double, SurfaceCell>> grid;
    std::vector<double> ns;
    bool nan_sigma = false;
    for (const auto& row : t.rows) {
        const double sigma = parse_double(row[cs]);
        const double n = parse_double(row[cn]);
        nan_sigma = nan_sigma || std::isnan(sigma);
        SurfaceCell c;
        c.mean = parse_double(row[cm]);
        c.std = parse_double(row[cd]);
        c.runs = parse_count(row[cr]);
        c.failed = row[cf] == "1";
        if (!grid[key(sigma)].emplace(n, c).second) {
            throw ContractError("surface file: duplicate cell sigma_w=" + row[cs] + " n=" + row[cn]);
        }
        ns.push_back(n);
    }
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    s.n_grid = ns;
    for (const auto& [sigma, row] : grid) {
        s.sigma_grid.push_back(std::isinf(sigma) && nan_sigma ? std::numeric_limits<double>::quiet_NaN()
                                                              : sigma);
        for (double n : ns) {
            const auto it = row.find(n);
            if (it == row.end()) {
                throw ContractError("surface file: missing cell at n=" + format_double(n));
            }
            s.cells.push_back(it->second);
        }
    }
    s.validate();
    return s;
}

std::vector<CurvePoint> curve_from_table(const CsvTable& table)
{
    if (std::find(table.header.begin(), table.header.end(), "failed") != table.header.end()) {
        return curve_from_surface(surface_from_table(table));
    }
    const std::size_t cn = table.column("n");
    const std::size_t cm = table.column("mean_train_rnmse");
    std::vector<CurvePoint> out;
    for (const auto& row : table.rows) {
        const double e = parse_double(row[cm]);
        if (std::isfinite(e)) {
            out.push_back({parse_double(row[cn]), e});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const CurvePoint& a, const CurvePoint& b) { return a.size < b.size; });
    return out;
}

CsvTable curve_table(const ErrorSurface& surface)
{
    CsvTable t;
    t.comments = {"task=" + std::string(to_string(surface.task)),
                  "model=" + std::string(to_string(surface.family))};
    t.header = {"n", "mean_train_rnmse", "sigma_w"};
    for (std::size_t j = 0; j < surface.n_grid.size(); ++j) {
        double best = std::numeric_limits<double>::quiet_NaN();
        double sigma = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = 0; i < surface.sigma_grid.size(); ++i) {
            const SurfaceCell& c = surface.at(i, j);
            if (!c.failed && std::isfinite(c.mean) && !(c.mean >= best)) {
                best = c.mean;
                sigma = surface.sigma_grid[i];
            }
        }
        t.rows.push_back({format_double(surface.n_grid[j]), format_double(best), format_double(sigma)});
    }
    return t;
}

CsvTable equivalence_table(const EquivalenceCurve& curve)
{
    CsvTable t;
    t.comments = {"task=" + std::string(to_string(curve.task)), "metric=" + curve.metric};
    t.header = {"reference_n", "reference_train_rnmse", "matched_size", "matched_train_rnmse",
                "status"};
    const double na = std::numeric_limits<double>::quiet_NaN();
    for (const EquivalencePoint& p : curve.points) {
        t.rows.push_back({format_double(p.reference_size), format_double(p.reference_error),
                          format_double(p.matched_size.value_or(na)),
                          format_double(p.matched_error.value_or(na)), to_string(p.status)});
    }
    return t;
}

namespace {

Json vec(const Vector& v)
{
    return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

/// Row-major flattening.
Json mat(const Matrix& m)
{
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            flat.push_back(m(i, k));
        }
    }
    return flat;
}

Vector to_vec(const Json& j, std::size_t expected, const char* name)
{
    const auto v = j.at(name).get<std::vector<double>>();
    if (v.size() != expected) {
        throw ContractError(std::string("model file: '") + name + "' has " + std::to_string(v.size())
                            + " entries, expected " + std::to_string(expected));
    }
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Matrix to_mat(const Json& j, std::size_t rows, std::size_t cols, const char* name)
{
    const Vector flat = to_vec(j, rows * cols, name);
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < cols; ++k) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k))
                = flat(static_cast<Eigen::Index>(i * cols + k));
        }
    }
    return m;
}

Json number_or_null(double x)
{
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

} // namespace

Json model_to_json(const TrainedModel& model)
{
    Json j;
    j["architecture"] = std::string(to_string(model.spec.family));
    j["size"] = model.spec.size;
    j["seed"] = model.spec.seed;
    if (model.spec.family == ModelFamily::Esn) {
        j["sigma_w"] = model.spec.sigma_w;
    }
    Json w;
    std::visit(
        [&](const auto& weights) {
            using T = std::decay_t<decltype(weights)>;
            if constexpr (std::is_same_v<T, DelayLineWeights>) {
                w["taps"] = weights.taps;
                w["readout"] = vec(weights.readout);
            } else if constexpr (std::is_same_v<T, EsnWeights>) {
                w["n"] = weights.params.n;
                w["w_in"] = vec(weights.params.w_in);
                w["w_res"] = mat(weights.params.w_res);
                w["w_out"] = vec(weights.w_out.col(0));
            } else {
                w["hidden"] = weights.params.hidden;
                w["taps"] = weights.params.taps;
                w["w_hidden"] = mat(weights.params.w_hidden);
                w["w_out"] = vec(weights.params.w_out);
            }
        },
        model.weights);
    j["weights"] = std::move(w);
    const TrainingMeta& m = model.meta;
    j["training"] = Json{{"washout", m.washout},
                         {"train_len", m.train_len},
                         {"iterations", m.iterations},
                         {"converged", m.converged},
                         {"sse", m.sse},
                         {"train_rnmse", m.train_rnmse ? Json(*m.train_rnmse) : Json(nullptr)}};
    return j;
}

TrainedModel model_from_json(const Json& j)
{
    try {
        TrainedModel model;
        model.spec.family = parse_model(j.at("architecture").get<std::string>());
        model.spec.size = j.at("size").get<std::size_t>();
        model.spec.seed = j.at("seed").get<std::uint64_t>();
        const Json& w = j.at("weights");
        switch (model.spec.family) {
        case ModelFamily::DelayLine: {
            DelayLineWeights d;
            d.taps = w.at("taps").get<std::size_t>();
            d.readout = to_vec(w, d.taps + 1, "readout");
            model.weights = std::move(d);
            break;
        }
        case ModelFamily::Esn: {
            model.spec.sigma_w = j.at("sigma_w").get<double>();
            EsnWeights e;
            const std::size_t n = w.at("n").get<std::size_t>();
            e.params.n = n;
            e.params.sigma_w = model.spec.sigma_w;
            e.params.seed = model.spec.seed;
            e.params.w_in = to_vec(w, n, "w_in");
            e.params.w_res = to_mat(w, n, n, "w_res");
            e.w_out = to_vec(w, n + 1, "w_out");
            model.weights = std::move(e);
            break;
        }
        case ModelFamily::Narx: {
            NarxWeights nw;
            nw.params.hidden = w.at("hidden").get<std::size_t>();
            nw.params.taps = w.at("taps").get<std::size_t>();
            nw.params.seed = model.spec.seed;
            nw.params.w_hidden = to_mat(w, nw.params.hidden, nw.params.taps + 1, "w_hidden");
            nw.params.w_out = to_vec(w, nw.params.hidden + 1, "w_out");
            model.weights = std::move(nw);
            break;
        }
        }
        const Json& t = j.at("training");
        model.meta.washout = t.at("washout").get<std::size_t>();
        model.meta.train_len = t.at("train_len").get<std::size_t>();
        model.meta.iterations = t.at("iterations").get<int>();
        model.meta.converged = t.at("converged").get<bool>();
        model.meta.sse = t.at("sse").get<double>();
        if (!t.at("train_rnmse").is_null()) {
            model.meta.train_rnmse = t.at("train_rnmse").get<double>();
        }
        return model;
    } catch (const Json::exception& e) {
        throw ContractError(std::string("model file: ") + e.what());
    }
}

Json fit_to_json(const FitResult& fit)
{
    Json j;
    if (fit.params.size() == 3) {
        j["a"] = fit.params(0);
        j["b"] = fit.params(1);
        j["c"] = fit.params(2);
    }
    j["params"] = vec(fit.params);
    j["sse"] = fit.sse;
    j["r_squared"] = fit.r_squared ? Json(*fit.r_squared) : Json(nullptr);
    j["iterations"] = fit.iterations;
    j["converged"] = fit.converged;
    return j;
}

Json report_to_json(const ErrorReport& report)
{
    Json j;
    j["task"] = std::string(to_string(report.task));
    j["model"] = report.model;
    j["runs"] = report.runs;
    j["variance_normalization"] = report.variance_normalization;
    Json metrics = Json::object();
    for (Metric m : kMetrics) {
        Json splits = Json::object();
        for (Split s : kSplits) {
            const MeanStd& c = report.at(m, s);
            splits[to_string(s)] = Json{{"mean", number_or_null(c.mean)},
                                        {"std", number_or_null(c.std)},
                                        {"runs", c.runs},
                                        {"excluded", c.excluded}};
        }
        metrics[to_string(m)] = std::move(splits);
    }
    j["metrics"] = std::move(metrics);
    j["diagnostics"] = report.diagnostics;
    return j;
}

} // namespace resbench
