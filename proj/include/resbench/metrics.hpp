#pragma once

// Error measures. `y` is the model output, `y_hat` the target.

#include "resbench/tasks.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace resbench {

/// sqrt(mean((y - y_hat)^2) / var(y_hat)), population variance.
/// Throws UndefinedMetric for a constant target, ContractError on length
/// mismatch or fewer than two samples.
double rnmse(std::span<const double> y, std::span<const double> y_hat);

/// sqrt(mean((y - y_hat)^2)) / (max(y_hat) - min(y_hat)).
/// Throws UndefinedMetric for a zero-range target.
double nrmse(std::span<const double> y, std::span<const double> y_hat);

/// 100 * mean(|y - y_hat| / (y + y_hat)), with the signed denominator exactly
/// as written. Values outside [0, 100] are possible when signals go negative.
/// Throws UndefinedMetric if any y_t + y_hat_t == 0.
double samp(std::span<const double> y, std::span<const double> y_hat);

double mean_squared_error(std::span<const double> y, std::span<const double> y_hat);
double population_std(std::span<const double> x);

enum class Metric { Rnmse, Nrmse, Samp };
enum class Split { Train, Test };

inline constexpr Metric kMetrics[] = {Metric::Rnmse, Metric::Nrmse, Metric::Samp};
inline constexpr Split kSplits[] = {Split::Train, Split::Test};

std::string to_string(Metric m);
std::string to_string(Split s);

/// One metric on one split of one run; empty when the metric was undefined.
struct MetricValue {
    std::optional<double> value;
    std::string diagnostic;
};

/// Evaluates a metric, converting UndefinedMetric into a diagnostic.
MetricValue evaluate(Metric m, std::span<const double> y, std::span<const double> y_hat);

struct RunErrors {
    MetricValue values[3][2]; ///< [metric][split]
    std::string label;        ///< run identity, e.g. "series=3 instance=1"

    MetricValue& at(Metric m, Split s) { return values[static_cast<int>(m)][static_cast<int>(s)]; }
    const MetricValue& at(Metric m, Split s) const
    {
        return values[static_cast<int>(m)][static_cast<int>(s)];
    }
};

/// All three metrics on the train and test rows of a prediction.
RunErrors evaluate_run(std::span<const double> prediction, const Dataset& data);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
    std::size_t runs = 0;     ///< runs that contributed
    std::size_t excluded = 0; ///< runs where the metric was undefined
};

struct ErrorReport {
    MeanStd cells[3][2]; ///< [metric][split]
    std::size_t runs = 0;
    TaskId task = TaskId::Henon;
    std::string model;              ///< e.g. "esn N=100 sigma_w=0.07"
    std::vector<std::string> diagnostics;
    std::string variance_normalization = "population";

    const MeanStd& at(Metric m, Split s) const
    {
        return cells[static_cast<int>(m)][static_cast<int>(s)];
    }
    MeanStd& at(Metric m, Split s) { return cells[static_cast<int>(m)][static_cast<int>(s)]; }
};

/// Mean and population std across runs per metric and split. Undefined values
/// are excluded and counted; a cell with no defined values has runs == 0 and
/// NaN mean/std.
ErrorReport aggregate(std::span<const RunErrors> per_run, TaskId task = TaskId::Henon,
                      std::string model = {});

} // namespace resbench
