#include "resbench/error.hpp"
#include "resbench/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace resbench {

LmOptions power_law_options()
{
    LmOptions opts;
    opts.relative_tolerance = 1e-15;
    opts.max_iterations = 1000;
    return opts;
}

namespace {

// Log-log regression of |sigma - c| on n for a starting (a, b).
Vector initial_guess(std::span<const double> n, std::span<const double> sigma, double c)
{
    double scale = 0.0;
    for (double s : sigma) {
        scale = std::max(scale, std::abs(s));
    }
    const double floor = 1e-12 * std::max(scale, 1e-300);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, sign_sum = 0.0;
    int used = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double d = sigma[i] - c;
        if (std::abs(d) <= floor) {
            continue;
        }
        const double x = std::log(n[i]);
        const double y = std::log(std::abs(d));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        sign_sum += d;
        ++used;
    }
    Vector p(3);
    if (used < 2) {
        p << 0.0, -0.5, c;
        return p;
    }
    const double m = used;
    const double denom = m * sxx - sx * sx;
    const double b = denom > 0.0 ? (m * sxy - sx * sy) / denom : -0.5;
    const double log_a = (sy - b * sx) / m;
    p << std::copysign(std::exp(log_a), sign_sum), b, c;
    return p;
}

} // namespace

FitResult fit_power_law(std::span<const double> n_values, std::span<const double> sigma_values,
                        const LmOptions& opts)
{
    if (n_values.size() != sigma_values.size()) {
        throw ContractError("fit_power_law: n and sigma lengths differ");
    }
    if (n_values.size() < 4) {
        throw ContractError("fit_power_law: need at least 4 points, got "
                            + std::to_string(n_values.size()));
    }
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (!std::isfinite(n_values[i]) || !std::isfinite(sigma_values[i])) {
            throw ContractError("fit_power_law: non-finite sample at index " + std::to_string(i));
        }
        if (n_values[i] <= 0.0) {
            throw ContractError("fit_power_law: n must be strictly positive");
        }
        if (i > 0 && n_values[i] <= n_values[i - 1]) {
            throw ContractError("fit_power_law: n must be strictly increasing");
        }
    }

    const Eigen::Index m = static_cast<Eigen::Index>(n_values.size());
    const ResidualFn residual = [&](const Vector& p) {
        Vector r(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            r[i] = p[0] * std::pow(n_values[i], p[1]) + p[2] - sigma_values[i];
        }
        return r;
    };
    const JacobianFn jacobian = [&](const Vector& p) {
        Matrix J(m, 3);
        for (Eigen::Index i = 0; i < m; ++i) {
            const double nb = std::pow(n_values[i], p[1]);
            J(i, 0) = nb;
            J(i, 1) = p[0] * nb * std::log(n_values[i]);
            J(i, 2) = 1.0;
        }
        return J;
    };

    const auto [lo, hi] = std::minmax_element(sigma_values.begin(), sigma_values.end());
    const double spread = *hi - *lo;
    const double c_last = sigma_values.back();
    // The last sample approximates the asymptote; jitter it in both directions.
    constexpr std::array<double, 5> jitter = {0.0, -0.5, 0.5, -1.0, 1.0};

    FitResult best;
    best.sse = std::numeric_limits<double>::infinity();
    bool have_best = false;
    for (double j : jitter) {
        if (j != 0.0 && spread == 0.0) {
            break;
        }
        const Vector init = initial_guess(n_values, sigma_values, c_last + j * spread);
        FitResult fit;
        try {
            fit = levenberg_marquardt(residual, jacobian, init, opts);
        } catch (const NumericalError&) {
            continue;
        }
        if (!have_best || fit.sse < best.sse) {
            best = std::move(fit);
            have_best = true;
        }
    }
    if (!have_best) {
        throw NumericalError("fit_power_law: every start produced non-finite residuals");
    }

    double mean = 0.0;
    for (double s : sigma_values) {
        mean += s;
    }
    mean /= static_cast<double>(m);
    double sst = 0.0;
    for (double s : sigma_values) {
        sst += (s - mean) * (s - mean);
    }
    if (sst > 0.0) {
        best.r_squared = 1.0 - best.sse / sst;
    } else {
        best.r_squared = best.sse == 0.0 ? 1.0 : 0.0;
    }
    return best;
}

} // namespace resbench
