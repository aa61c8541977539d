#pragma once

// Shared numerical kernels: linear least squares, Levenberg-Marquardt,
// power-law curve fitting and descriptive statistics.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <optional>
#include <span>

namespace resbench {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Minimizer of ||X W - Y||^2 (Frobenius). Rank-deficient designs get the
/// minimum-norm minimizer via a complete orthogonal decomposition.
///
/// Throws ContractError on row-count mismatch or empty input and
/// NumericalError if X or Y holds a non-finite entry.
Matrix solve_least_squares(const Matrix& X, const Matrix& Y);

struct FitResult {
    Vector params;
    double sse = 0.0;
    /// 1 - sse / sum((y - mean(y))^2); absent when the fit has no data vector
    /// (a bare Levenberg-Marquardt solve).
    std::optional<double> r_squared;
    int iterations = 0;
    bool converged = false;
};

struct LmOptions {
    double initial_damping = 1e-3;
    double damping_increase = 10.0;
    double damping_decrease = 10.0;
    double max_damping = 1e10;
    /// Stop once an accepted step lowers the SSE by less than this fraction.
    double relative_tolerance = 1e-9;
    /// Also stop once ||J^T r||_inf falls to this value.
    double gradient_tolerance = 0.0;
    int max_iterations = 200;
};

using ResidualFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;

/// Damped Gauss-Newton on sum(residual^2), solving (J^T J + mu I) step = -J^T r.
/// mu starts at `initial_damping` and is divided on accepted steps, multiplied
/// on rejected ones. Returns the best parameters seen; `converged` is false if
/// the iteration cap was hit first. Throws NumericalError on a non-finite
/// Jacobian or a non-finite residual at `init`.
FitResult levenberg_marquardt(const ResidualFn& residual, const JacobianFn& jacobian,
                              const Vector& init, const LmOptions& opts = {});

/// Tighter stopping rule than the generic default; the 3-parameter problem is
/// cheap and callers rely on parameter-level reproducibility.
LmOptions power_law_options();

/// Fits sigma ~ a * n^b + c. Requires at least 4 points with n strictly
/// positive and strictly increasing. params = [a, b, c].
FitResult fit_power_law(std::span<const double> n_values, std::span<const double> sigma_values,
                        const LmOptions& opts = power_law_options());

/// a * n^b + c
inline double power_law(const Vector& params, double n)
{
    return params[0] * std::pow(n, params[1]) + params[2];
}

struct Summary {
    double mean = 0.0;
    double std = 0.0; ///< population standard deviation (divides by count)
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

/// Population statistics. Throws ContractError on empty input.
Summary describe(std::span<const double> samples);

} // namespace resbench
