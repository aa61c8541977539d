#include "resbench/error.hpp"
#include "resbench/numerics.hpp"

namespace resbench {

FitResult levenberg_marquardt(const ResidualFn& residual, const JacobianFn& jacobian,
                              const Vector& init, const LmOptions& opts)
{
    Vector params = init;
    Vector r = residual(params);
    if (!r.allFinite()) {
        throw NumericalError("levenberg_marquardt: residual is non-finite at the initial point");
    }
    double sse = r.squaredNorm();
    double mu = opts.initial_damping;

    FitResult out;
    const Eigen::Index p = params.size();
    Matrix normal(p, p);
    while (out.iterations < opts.max_iterations) {
        if (sse == 0.0) {
            out.converged = true;
            break;
        }
        const Matrix J = jacobian(params);
        if (J.rows() != r.size() || J.cols() != p) {
            throw ContractError("levenberg_marquardt: Jacobian shape does not match residual/params");
        }
        if (!J.allFinite()) {
            throw NumericalError("levenberg_marquardt: Jacobian is non-finite at iteration "
                                 + std::to_string(out.iterations));
        }
        const Vector gradient = J.transpose() * r;
        if (opts.gradient_tolerance > 0.0
            && gradient.lpNorm<Eigen::Infinity>() <= opts.gradient_tolerance) {
            out.converged = true;
            break;
        }
        normal.setZero();
        normal.selfadjointView<Eigen::Lower>().rankUpdate(J.transpose());

        bool accepted = false;
        Vector trial;
        Vector trial_r;
        double trial_sse = 0.0;
        while (mu <= opts.max_damping) {
            Matrix damped = normal;
            damped.diagonal().array() += mu;
            Eigen::LLT<Matrix, Eigen::Lower> llt(damped);
            if (llt.info() == Eigen::Success) {
                trial = params - llt.solve(gradient);
                trial_r = residual(trial);
                trial_sse = trial_r.squaredNorm();
                if (trial_r.allFinite() && trial_sse < sse) {
                    accepted = true;
                    break;
                }
            }
            mu *= opts.damping_increase;
        }
        ++out.iterations;
        if (!accepted) {
            // No damping level yields a decrease: the SSE is stationary.
            out.converged = true;
            break;
        }
        const double decrease = (sse - trial_sse) / sse;
        params = std::move(trial);
        r = std::move(trial_r);
        sse = trial_sse;
        mu = std::max(mu / opts.damping_decrease, 1e-20);
        if (decrease < opts.relative_tolerance) {
            out.converged = true;
            break;
        }
    }
    out.params = std::move(params);
    out.sse = sse;
    return out;
}

} // namespace resbench
