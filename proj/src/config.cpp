#include "resbench/config.hpp"

#include "resbench/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace resbench {

std::string to_string(Preset p)
{
    return p == Preset::Paper ? "paper" : "desk";
}

Preset parse_preset(std::string_view name)
{
    if (name == "paper") {
        return Preset::Paper;
    }
    if (name == "desk") {
        return Preset::Desk;
    }
    throw ConfigError("preset", "expected 'paper' or 'desk', got '" + std::string(name) + "'");
}

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = {
        "task",       "model",     "preset",   "base_seed", "seed",        "n",
        "sigma",      "steps",     "n_series", "series_len", "train_len",  "instances",
        "washout",    "n_grid",    "sigma_grid", "lm_max_iterations"};
    return keys;
}

namespace {

std::string type_name(const Json& v)
{
    return v.type_name();
}

std::string get_string(const Json& v, const std::string& key)
{
    if (!v.is_string()) {
        throw ConfigError(key, "expected a string, got " + type_name(v));
    }
    return v.get<std::string>();
}

std::uint64_t get_u64(const Json& v, const std::string& key)
{
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ConfigError(key, "expected a nonnegative integer, got " + v.dump());
    }
    return v.get<std::uint64_t>();
}

std::size_t get_count(const Json& v, const std::string& key, std::size_t min = 1)
{
    const std::uint64_t x = get_u64(v, key);
    if (x < min) {
        throw ConfigError(key, "must be at least " + std::to_string(min) + ", got " + v.dump());
    }
    return static_cast<std::size_t>(x);
}

double get_positive(const Json& v, const std::string& key)
{
    if (!v.is_number()) {
        throw ConfigError(key, "expected a number, got " + type_name(v));
    }
    const double x = v.get<double>();
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw ConfigError(key, "must be positive and finite, got " + v.dump());
    }
    return x;
}

void apply(RunConfig& c, const Json& layer, const char* source)
{
    if (layer.is_null()) {
        return;
    }
    if (!layer.is_object()) {
        throw ConfigError("", std::string(source) + ": expected a JSON object");
    }
    const auto& keys = config_keys();
    for (const auto& [key, v] : layer.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError(key, std::string("unknown configuration key (") + source + ")");
        }
        try {
            if (key == "task") {
                c.task = parse_task(get_string(v, key));
            } else if (key == "model") {
                c.model = parse_model(get_string(v, key));
            } else if (key == "preset") {
                c.preset = parse_preset(get_string(v, key));
            } else if (key == "base_seed") {
                c.base_seed = get_u64(v, key);
            } else if (key == "seed") {
                c.seed = v.is_null() ? std::nullopt : std::optional(get_u64(v, key));
            } else if (key == "n") {
                c.n = get_count(v, key);
            } else if (key == "sigma") {
                c.sigma = get_positive(v, key);
            } else if (key == "steps") {
                c.steps = get_count(v, key);
            } else if (key == "n_series") {
                c.n_series = v.is_null() ? std::nullopt : std::optional(get_count(v, key));
            } else if (key == "series_len") {
                c.series_len = v.is_null() ? std::nullopt : std::optional(get_count(v, key, 2));
            } else if (key == "train_len") {
                c.train_len = v.is_null() ? std::nullopt : std::optional(get_count(v, key));
            } else if (key == "instances") {
                c.instances = v.is_null() ? std::nullopt : std::optional(get_count(v, key));
            } else if (key == "washout") {
                c.washout = v.is_null() ? std::nullopt : std::optional(get_count(v, key, 0));
            } else if (key == "n_grid") {
                if (v.is_null()) {
                    c.n_grid.reset();
                    continue;
                }
                if (!v.is_array() || v.empty()) {
                    throw ConfigError(key, "expected a nonempty array of counts");
                }
                std::vector<std::size_t> g;
                for (const Json& e : v) {
                    g.push_back(get_count(e, key));
                }
                for (std::size_t i = 1; i < g.size(); ++i) {
                    if (g[i] <= g[i - 1]) {
                        throw ConfigError(key, "must be strictly ascending");
                    }
                }
                c.n_grid = std::move(g);
            } else if (key == "sigma_grid") {
                if (v.is_null()) {
                    c.sigma_grid.reset();
                    continue;
                }
                if (!v.is_array() || v.empty()) {
                    throw ConfigError(key, "expected a nonempty array of numbers");
                }
                std::vector<double> g;
                for (const Json& e : v) {
                    g.push_back(get_positive(e, key));
                }
                for (std::size_t i = 1; i < g.size(); ++i) {
                    if (g[i] <= g[i - 1]) {
                        throw ConfigError(key, "must be strictly ascending");
                    }
                }
                c.sigma_grid = std::move(g);
            } else if (key == "lm_max_iterations") {
                c.lm_max_iterations = static_cast<int>(get_count(v, key));
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(key, e.what());
        }
    }
}

void check(const RunConfig& c)
{
    if (c.model == ModelFamily::DelayLine && c.n > kMaxDelayLineTaps) {
        throw ConfigError("n", "delay line is capped at " + std::to_string(kMaxDelayLineTaps) + " taps");
    }
    const Protocol p = c.protocol();
    if (p.train_len >= p.series_len) {
        throw ConfigError("train_len", "must be shorter than series_len ("
                                           + std::to_string(p.series_len) + ")");
    }
    if (p.washout >= p.train_len) {
        throw ConfigError("washout", "must be shorter than train_len ("
                                         + std::to_string(p.train_len) + ")");
    }
}

} // namespace

Protocol RunConfig::protocol() const
{
    Protocol p = preset == Preset::Paper ? Protocol::paper(model) : Protocol::desk(model);
    p.n_series = n_series.value_or(p.n_series);
    p.series_len = series_len.value_or(p.series_len);
    p.train_len = train_len.value_or(p.train_len);
    p.instances = instances.value_or(p.instances);
    p.washout = washout.value_or(p.washout);
    p.base_seed = base_seed;
    return p;
}

Protocol RunConfig::sweep_protocol() const
{
    Protocol p = preset == Preset::Paper ? Protocol::paper_sweep() : Protocol::desk_sweep();
    p.n_series = n_series.value_or(p.n_series);
    p.series_len = series_len.value_or(p.series_len);
    p.train_len = train_len.value_or(p.train_len);
    p.instances = instances.value_or(p.instances);
    p.washout = washout.value_or(p.washout);
    p.base_seed = base_seed;
    return p;
}

std::vector<std::size_t> RunConfig::resolved_n_grid() const
{
    if (n_grid) {
        return *n_grid;
    }
    return preset == Preset::Paper ? default_n_grid() : desk_n_grid();
}

std::vector<double> RunConfig::resolved_sigma_grid() const
{
    if (sigma_grid) {
        return *sigma_grid;
    }
    return preset == Preset::Paper ? default_sigma_grid() : desk_sigma_grid();
}

LmOptions RunConfig::lm_options() const
{
    LmOptions o;
    o.max_iterations = lm_max_iterations;
    return o;
}

Json RunConfig::to_json() const
{
    auto opt = [](const auto& o) { return o ? Json(*o) : Json(nullptr); };
    return Json{{"task", std::string(resbench::to_string(task))},
                {"model", std::string(resbench::to_string(model))},
                {"preset", resbench::to_string(preset)},
                {"base_seed", base_seed},
                {"seed", opt(seed)},
                {"n", n},
                {"sigma", sigma},
                {"steps", steps},
                {"n_series", opt(n_series)},
                {"series_len", opt(series_len)},
                {"train_len", opt(train_len)},
                {"instances", opt(instances)},
                {"washout", opt(washout)},
                {"n_grid", opt(n_grid)},
                {"sigma_grid", opt(sigma_grid)},
                {"lm_max_iterations", lm_max_iterations}};
}

RunConfig resolve_config(const Json& file, const Json& flags, const std::optional<std::string>& env_seed)
{
    RunConfig c;
    apply(c, file, "config file");
    apply(c, flags, "command line");
    if (env_seed) {
        std::uint64_t v = 0;
        const std::string& s = *env_seed;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
            throw ConfigError("RESBENCH_SEED", "expected a nonnegative integer, got '" + s + "'");
        }
        c.base_seed = v;
    }
    check(c);
    return c;
}

Json load_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config", "cannot open " + path);
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("config", path + ": " + e.what());
    }
}

Provenance make_provenance(const std::string& command, const RunConfig& config)
{
    Provenance p;
    p.command = command;
    p.config = config.to_json();
    p.config_hash = hash_config(p.config);
    p.base_seed = config.base_seed;
    return p;
}

} // namespace resbench
