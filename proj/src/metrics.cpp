#include "resbench/metrics.hpp"

#include "resbench/error.hpp"
#include "resbench/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace resbench {

namespace {

void check_pair(std::span<const double> y, std::span<const double> y_hat, const char* who)
{
    if (y.size() != y_hat.size()) {
        throw ContractError(std::string(who) + ": output and target lengths differ");
    }
    if (y.size() < 2) {
        throw ContractError(std::string(who) + ": need at least two samples");
    }
}

} // namespace

double mean_squared_error(std::span<const double> y, std::span<const double> y_hat)
{
    if (y.size() != y_hat.size() || y.empty()) {
        throw ContractError("mean_squared_error: lengths differ or empty");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - y_hat[i];
        acc += d * d;
    }
    return acc / static_cast<double>(y.size());
}

double population_std(std::span<const double> x)
{
    return describe(x).std;
}

double rnmse(std::span<const double> y, std::span<const double> y_hat)
{
    check_pair(y, y_hat, "rnmse");
    const double sd = population_std(y_hat);
    if (sd == 0.0) {
        throw UndefinedMetric("rnmse: target has zero variance");
    }
    return std::sqrt(mean_squared_error(y, y_hat) / (sd * sd));
}

double nrmse(std::span<const double> y, std::span<const double> y_hat)
{
    check_pair(y, y_hat, "nrmse");
    const auto [lo, hi] = std::minmax_element(y_hat.begin(), y_hat.end());
    const double range = *hi - *lo;
    if (range == 0.0) {
        throw UndefinedMetric("nrmse: target has zero range");
    }
    return std::sqrt(mean_squared_error(y, y_hat)) / range;
}

double samp(std::span<const double> y, std::span<const double> y_hat)
{
    if (y.size() != y_hat.size() || y.empty()) {
        throw ContractError("samp: lengths differ or empty");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double denom = y[i] + y_hat[i];
        if (denom == 0.0) {
            throw UndefinedMetric("samp: y + y_hat is zero at step " + std::to_string(i));
        }
        acc += std::abs(y[i] - y_hat[i]) / denom;
    }
    return 100.0 * acc / static_cast<double>(y.size());
}

std::string to_string(Metric m)
{
    switch (m) {
    case Metric::Rnmse:
        return "rnmse";
    case Metric::Nrmse:
        return "nrmse";
    case Metric::Samp:
        return "samp";
    }
    return "unknown";
}

std::string to_string(Split s)
{
    return s == Split::Train ? "train" : "test";
}

MetricValue evaluate(Metric m, std::span<const double> y, std::span<const double> y_hat)
{
    MetricValue out;
    try {
        switch (m) {
        case Metric::Rnmse:
            out.value = rnmse(y, y_hat);
            break;
        case Metric::Nrmse:
            out.value = nrmse(y, y_hat);
            break;
        case Metric::Samp:
            out.value = samp(y, y_hat);
            break;
        }
        if (!std::isfinite(*out.value)) {
            out.diagnostic = to_string(m) + ": non-finite value";
            out.value.reset();
        } else if (m == Metric::Samp && (*out.value < 0.0 || *out.value > 100.0)) {
            // Kept, not clamped: negative signals make the printed formula leave [0, 100].
            out.diagnostic = "samp outside [0, 100] because y + y_hat changes sign";
        }
    } catch (const UndefinedMetric& e) {
        out.diagnostic = e.what();
    }
    return out;
}

RunErrors evaluate_run(std::span<const double> prediction, const Dataset& data)
{
    if (prediction.size() != data.series.size()) {
        throw ContractError("evaluate_run: prediction length does not match the series");
    }
    const std::span<const double> target(data.series.y_hat);
    RunErrors out;
    for (Split s : kSplits) {
        const StepRange rows = s == Split::Train ? data.train_rows() : data.test_rows();
        const auto y = prediction.subspan(rows.begin, rows.size());
        const auto t = target.subspan(rows.begin, rows.size());
        for (Metric m : kMetrics) {
            out.at(m, s) = evaluate(m, y, t);
        }
    }
    return out;
}

ErrorReport aggregate(std::span<const RunErrors> per_run, TaskId task, std::string model)
{
    ErrorReport report;
    report.task = task;
    report.model = std::move(model);
    report.runs = per_run.size();
    for (Metric m : kMetrics) {
        for (Split s : kSplits) {
            std::vector<double> values;
            MeanStd& cell = report.at(m, s);
            for (const RunErrors& run : per_run) {
                const MetricValue& v = run.at(m, s);
                if (v.value) {
                    values.push_back(*v.value);
                } else {
                    ++cell.excluded;
                    report.diagnostics.push_back(
                        (run.label.empty() ? std::string() : run.label + ": ") + to_string(s) + " "
                        + v.diagnostic);
                }
            }
            if (values.empty()) {
                cell.mean = std::numeric_limits<double>::quiet_NaN();
                cell.std = std::numeric_limits<double>::quiet_NaN();
            } else {
                const Summary st = describe(values);
                cell.mean = st.mean;
                cell.std = st.std;
                cell.runs = values.size();
            }
        }
    }
    return report;
}

} // namespace resbench
