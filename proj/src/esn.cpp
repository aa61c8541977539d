#include "resbench/error.hpp"
#include "resbench/models.hpp"
#include "model_internal.hpp"
#include "resbench/rng.hpp"

#include <cmath>

namespace resbench {

namespace {
constexpr std::uint64_t kEsnStream = 0xe5e5;
}

EsnParams esn_init(std::size_t n, double sigma_w, std::uint64_t seed)
{
    if (n == 0) {
        throw ContractError("esn_init: reservoir needs at least one node");
    }
    if (!(sigma_w > 0.0) || !std::isfinite(sigma_w)) {
        throw ContractError("esn_init: sigma_w must be positive and finite");
    }
    EsnParams p;
    p.n = n;
    p.sigma_w = sigma_w;
    p.seed = seed;
    const auto size = static_cast<Eigen::Index>(n);
    p.w_in.resize(size);
    p.w_res.resize(size, size);
    RngStream rng(seed, kEsnStream);
    for (Eigen::Index j = 0; j < size; ++j) {
        p.w_in[j] = sigma_w * rng.normal();
    }
    // Row-major draw order keeps the stream layout independent of storage order.
    for (Eigen::Index j = 0; j < size; ++j) {
        for (Eigen::Index k = 0; k < size; ++k) {
            p.w_res(j, k) = sigma_w * rng.normal();
        }
    }
    return p;
}

Vector esn_step(const EsnParams& params, const Vector& state, double u)
{
    if (state.size() != static_cast<Eigen::Index>(params.n)) {
        throw ContractError("esn_step: state size does not match the reservoir");
    }
    Vector pre = params.w_in * u;
    pre.noalias() += params.w_res * state;
    return pre.array().tanh().matrix();
}

Matrix esn_states(const EsnParams& params, std::span<const double> u)
{
    const auto n = static_cast<Eigen::Index>(params.n);
    Matrix states(n, static_cast<Eigen::Index>(u.size()));
    Vector x = Vector::Zero(n);
    Vector pre(n);
    for (std::size_t t = 0; t < u.size(); ++t) {
        pre = params.w_in * u[t];
        pre.noalias() += params.w_res * x;
        x = pre.array().tanh().matrix();
        states.col(static_cast<Eigen::Index>(t)) = x;
    }
    return states;
}

std::vector<double> detail::esn_readout(const Matrix& states, const Matrix& w_out)
{
    const Eigen::Index n = states.rows();
    const double bias = w_out(n, 0);
    const auto weights = w_out.col(0).head(n);
    std::vector<double> y(static_cast<std::size_t>(states.cols()));
    for (Eigen::Index t = 0; t < states.cols(); ++t) {
        y[static_cast<std::size_t>(t)] = weights.dot(states.col(t)) + bias;
    }
    return y;
}

TrainedModel esn_train(const EsnParams& params, const Dataset& data)
{
    const StepRange rows = data.train_rows();
    const std::span<const double> u(data.series.u);
    const Matrix states = esn_states(params, u.first(rows.end));
    const auto n = static_cast<Eigen::Index>(params.n);
    const auto m = static_cast<Eigen::Index>(rows.size());
    Matrix X(m, n + 1);
    X.leftCols(n) = states.middleCols(static_cast<Eigen::Index>(rows.begin), m).transpose();
    X.col(n).setOnes();
    const Matrix Y = Eigen::Map<const Vector>(data.series.y_hat.data() + rows.begin, m);

    EsnWeights w;
    w.params = params;
    w.w_out = solve_least_squares(X, Y);

    TrainedModel model;
    model.spec = {ModelFamily::Esn, params.n, params.sigma_w, params.seed};
    model.meta.washout = data.washout;
    model.meta.train_len = data.train_len;
    const std::vector<double> fitted = detail::esn_readout(states, w.w_out);
    model.weights = std::move(w);
    detail::record_training_error(model, data, fitted);
    return model;
}

} // namespace resbench
