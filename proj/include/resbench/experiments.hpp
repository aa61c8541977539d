#pragma once

// Experimental pipeline: the train/test protocol, sigma_w x N error surfaces,
// optimal sigma_w extraction with a power-law fit, and functional comparison
// of architectures at equal training error.

#include "resbench/metrics.hpp"
#include "resbench/models.hpp"
#include "resbench/numerics.hpp"
#include "resbench/tasks.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace resbench {

struct Protocol {
    std::size_t n_series = 10;
    std::size_t series_len = 4000;
    std::size_t train_len = 2000;
    /// Independently drawn ESN reservoirs per series. DL and NARX always run
    /// one model per series.
    std::size_t instances = 1;
    std::size_t washout = 0;
    std::uint64_t base_seed = 42;

    /// 10 series for DL/NARX, 20 series x 5 reservoirs for ESN, 4000 steps
    /// split 2000/2000.
    static Protocol paper(ModelFamily family);
    /// 3 series for DL/NARX, 5 series x 2 reservoirs for ESN.
    static Protocol desk(ModelFamily family);
    /// Surface sweeps: 10 runs per cell (paper), 3 runs per cell (desk).
    static Protocol paper_sweep();
    static Protocol desk_sweep();

    /// Throws ContractError on inconsistent counts.
    void validate() const;
    std::size_t instances_for(ModelFamily family) const noexcept
    {
        return family == ModelFamily::Esn ? instances : 1;
    }
};

struct Hyperparams {
    std::size_t size = 0; ///< taps, hidden units or reservoir nodes
    double sigma_w = 0.0; ///< ESN only
};

struct ExecOptions {
    std::size_t workers = 0; ///< 0 = one per hardware thread
    /// Skip the test segment; test metrics are reported as undefined.
    bool train_only = false;
    LmOptions lm;
};

std::uint64_t series_seed(std::uint64_t base_seed, TaskId task, std::size_t series_index);
std::uint64_t model_seed(std::uint64_t base_seed, TaskId task, ModelFamily family,
                         std::size_t series_index, std::size_t instance_index);

struct RunRecord {
    std::size_t series_index = 0;
    std::size_t instance_index = 0;
    std::uint64_t series_seed = 0;
    std::uint64_t model_seed = 0;
    RunErrors errors;
    TrainingMeta meta;
    std::optional<std::string> failure; ///< training threw; errors are empty
};

struct ProtocolResult {
    ModelFamily family = ModelFamily::Esn;
    Hyperparams hyper;
    ErrorReport report;
    std::vector<RunRecord> runs; ///< ordered by (series, instance)
};

/// Trains and evaluates one model configuration over every series (and, for
/// ESN, every reservoir instance) of the protocol.
ProtocolResult run_protocol(ModelFamily family, Hyperparams hyper, TaskId task,
                            const Protocol& protocol, const ExecOptions& exec = {});

/// run_protocol for several configurations, with all runs scheduled in one
/// parallel pool. Results are in input order.
std::vector<ProtocolResult> run_protocols(ModelFamily family, std::span<const Hyperparams> configs,
                                          TaskId task, const Protocol& protocol,
                                          const ExecOptions& exec = {});

struct SurfaceCell {
    double mean = 0.0; ///< mean training RNMSE
    double std = 0.0;
    std::size_t runs = 0;
    bool failed = false; ///< no run produced a defined training RNMSE
};

/// Mean training RNMSE over (sigma_w, N). For DL and NARX the sigma axis has a
/// single NaN entry.
struct ErrorSurface {
    TaskId task = TaskId::Henon;
    ModelFamily family = ModelFamily::Esn;
    std::vector<double> n_grid;     ///< ascending
    std::vector<double> sigma_grid; ///< ascending
    std::vector<SurfaceCell> cells; ///< row-major [sigma][n]

    SurfaceCell& at(std::size_t sigma_index, std::size_t n_index)
    {
        return cells[sigma_index * n_grid.size() + n_index];
    }
    const SurfaceCell& at(std::size_t sigma_index, std::size_t n_index) const
    {
        return cells[sigma_index * n_grid.size() + n_index];
    }
    /// Throws ContractError unless grids are ascending and cells are complete.
    void validate() const;
};

ErrorSurface sweep_surface(TaskId task, ModelFamily family, std::span<const std::size_t> n_grid,
                           std::span<const double> sigma_grid, const Protocol& protocol,
                           const ExecOptions& exec = {});

/// Piecewise-bilinear interpolant of the surface; exact at grid points.
/// Returns nullopt if any of the surrounding cells failed or the point lies
/// outside the grid.
std::optional<double> interpolate(const ErrorSurface& surface, double sigma, double n);

struct OptimalSigma {
    double n = 0.0;
    double sigma = 0.0;
    double error = 0.0;
    bool ok = false;
    std::string diagnostic;
};

/// Per-N argmin over sigma of the interpolated surface, evaluated on a grid
/// `refine` times finer than sigma_grid. Ties go to the smaller sigma. By
/// default queries every N of the grid.
std::vector<OptimalSigma> optimal_sigma(const ErrorSurface& surface,
                                        std::span<const double> query_n = {}, int refine = 10);

/// Power-law fit a N^b + c over the usable optimal-sigma points.
FitResult fit_optimal_sigma_curve(std::span<const OptimalSigma> points);

struct CurvePoint {
    double size = 0.0;
    double error = 0.0; ///< mean training RNMSE
};

/// Error-vs-size curve of a surface: the single row for DL/NARX, the optimum
/// over sigma for ESN. Failed columns are skipped.
std::vector<CurvePoint> curve_from_surface(const ErrorSurface& surface);

enum class MatchStatus {
    Matched,
    BelowRange,  ///< the smallest candidate already beats the reference
    Unreachable, ///< no candidate size reaches the reference error
};

std::string to_string(MatchStatus s);

struct EquivalencePoint {
    double reference_size = 0.0;
    double reference_error = 0.0;
    std::optional<double> matched_size;
    std::optional<double> matched_error; ///< interpolated candidate error at matched_size
    MatchStatus status = MatchStatus::Unreachable;
};

struct EquivalenceCurve {
    TaskId task = TaskId::Henon;
    std::string metric = "train_rnmse";
    std::vector<EquivalencePoint> points;
};

/// For each reference point, the smallest candidate size whose interpolated
/// error (made non-increasing in size by a running minimum) reaches the
/// reference error. Both curves must be sorted by size.
EquivalenceCurve functional_compare(std::span<const CurvePoint> reference,
                                    std::span<const CurvePoint> candidate,
                                    TaskId task = TaskId::Henon);

/// DL size cap.
inline constexpr std::size_t kMaxDelayLineTaps = 2000;

/// Grids for the paper preset.
std::vector<std::size_t> default_n_grid();
std::vector<double> default_sigma_grid();
/// Desk-scale grids: N <= 200.
std::vector<std::size_t> desk_n_grid();
std::vector<double> desk_sigma_grid();

} // namespace resbench
