#pragma once

// Report files: result tables, full JSON metadata and plot-ready CSVs.

#include "resbench/experiments.hpp"
#include "resbench/io.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace resbench {

struct ReportInputs {
    std::vector<ProtocolResult> results; ///< one per (model, N, sigma_w)
    std::optional<ErrorSurface> surface;
    std::optional<EquivalenceCurve> equivalence;
};

struct ReportOutput {
    std::vector<std::filesystem::path> written;
    std::vector<std::string> warnings;
};

/// Writes into `dir`:
///   tables.csv       long format, one row per result x metric x split
///   table_wide.csv   metric x split rows, one mean/std column pair per result
///   report.json      everything above plus diagnostics and provenance
///   curve.csv        train/test RNMSE against N from the results
///   surface.csv, surface_curve.csv   when a surface is given
///   fig4.csv         reference_n,matched_size when an equivalence curve is given
/// Missing values are written as NA. An empty result set yields header-only
/// tables and a warning.
ReportOutput write_report(const std::filesystem::path& dir, const ReportInputs& inputs,
                          const Provenance& provenance);

} // namespace resbench
