#pragma once

// Run configuration: defaults, then a JSON config file, then command-line
// flags, then RESBENCH_SEED for base_seed.

#include "resbench/experiments.hpp"
#include "resbench/io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace resbench {

enum class Preset { Paper, Desk };

std::string to_string(Preset p);
Preset parse_preset(std::string_view name);

struct RunConfig {
    TaskId task = TaskId::Narma10;
    ModelFamily model = ModelFamily::Esn;
    Preset preset = Preset::Desk;
    std::uint64_t base_seed = 42;
    /// Single-run seed for gen and train; derived from base_seed when absent.
    std::optional<std::uint64_t> seed;
    std::size_t n = 100;
    double sigma = 0.07;
    std::size_t steps = 4000;

    // Protocol overrides; the preset decides when absent.
    std::optional<std::size_t> n_series;
    std::optional<std::size_t> series_len;
    std::optional<std::size_t> train_len;
    std::optional<std::size_t> instances;
    std::optional<std::size_t> washout;

    // Grid overrides for sweep and report.
    std::optional<std::vector<std::size_t>> n_grid;
    std::optional<std::vector<double>> sigma_grid;

    int lm_max_iterations = 200;

    /// Protocol for single-configuration runs (report).
    Protocol protocol() const;
    /// Protocol for surface sweeps (fewer runs per cell).
    Protocol sweep_protocol() const;
    std::vector<std::size_t> resolved_n_grid() const;
    std::vector<double> resolved_sigma_grid() const;
    LmOptions lm_options() const;

    /// Every key with its resolved value; absent optionals are null.
    Json to_json() const;
};

/// Keys accepted in config files and as flags.
const std::vector<std::string>& config_keys();

/// Applies `file` then `flags` over the defaults, then `env_seed` (the value
/// of RESBENCH_SEED) over base_seed. Throws ConfigError naming the offending
/// key for unknown keys, wrong types and out-of-range values.
RunConfig resolve_config(const Json& file, const Json& flags,
                         const std::optional<std::string>& env_seed = std::nullopt);

/// Reads a JSON config file. Throws ConfigError on syntax errors.
Json load_config_file(const std::string& path);

Provenance make_provenance(const std::string& command, const RunConfig& config);

} // namespace resbench
