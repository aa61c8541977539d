#pragma once

// File formats: CSV tables with '#' provenance lines, JSON documents for
// models and fits. Column dictionaries live in docs/formats.md.

#include "resbench/experiments.hpp"
#include "resbench/models.hpp"
#include "resbench/numerics.hpp"
#include "resbench/tasks.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace resbench {

using Json = nlohmann::ordered_json;

/// What every output file carries so it can be traced back and regenerated.
struct Provenance {
    std::string command;  ///< subcommand name
    Json config;          ///< fully resolved configuration
    std::string config_hash;
    std::uint64_t base_seed = 0;
};

/// 64-bit FNV-1a of the compact JSON dump, as 16 hex digits.
std::string hash_config(const Json& config);

/// %.17g; NaN and infinities become "NA".
std::string format_double(double x);
/// Inverse of format_double; "NA" reads as NaN. Throws ContractError.
double parse_double(std::string_view text);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> comments; ///< '#' lines without the marker

    /// Column index by name; throws ContractError if absent.
    std::size_t column(std::string_view name) const;
};

/// Plain comma-separated values; fields never contain commas or quotes.
CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// '#' comment lines for a provenance block.
std::vector<std::string> provenance_lines(const Provenance& p);
Json provenance_json(const Provenance& p);

// Series: t,u,y_hat
CsvTable series_table(const SeriesPair& pair);
SeriesPair series_from_table(const CsvTable& table, TaskId task);

// Surface: sigma_w,n,mean_train_rnmse,std,runs,failed
CsvTable surface_table(const ErrorSurface& surface);
ErrorSurface surface_from_table(const CsvTable& table);

/// A training-error curve from either a surface file (reduced with
/// curve_from_surface) or a curve file with columns n,mean_train_rnmse.
std::vector<CurvePoint> curve_from_table(const CsvTable& table);

// Curve: n,mean_train_rnmse,sigma_w
CsvTable curve_table(const ErrorSurface& surface);

// Equivalence: reference_n,reference_train_rnmse,matched_size,matched_train_rnmse,status
CsvTable equivalence_table(const EquivalenceCurve& curve);

Json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const Json& j);

Json fit_to_json(const FitResult& fit);
Json report_to_json(const ErrorReport& report);

} // namespace resbench
