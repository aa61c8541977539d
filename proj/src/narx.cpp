#include "resbench/error.hpp"
#include "resbench/models.hpp"
#include "resbench/rng.hpp"
#include "model_internal.hpp"

#include <cmath>

namespace resbench {

namespace {

constexpr std::uint64_t kNarxStream = 0x4a4a;

double hidden_activation(const NarxParams& p, const Matrix& inputs, Eigen::Index row,
                         Eigen::Index j)
{
    double a = 0.0;
    for (Eigen::Index k = 0; k < inputs.cols(); ++k) {
        a += p.w_hidden(j, k) * inputs(row, k);
    }
    return std::tanh(a);
}

void check_rows(const Matrix& inputs, StepRange rows)
{
    if (rows.end > static_cast<std::size_t>(inputs.rows()) || rows.begin > rows.end) {
        throw ContractError("narx: row range outside the input matrix");
    }
}

} // namespace

NarxParams narx_init(std::size_t hidden, std::uint64_t seed, std::size_t taps)
{
    if (hidden == 0) {
        throw ContractError("narx_init: need at least one hidden unit");
    }
    if (taps == 0) {
        throw ContractError("narx_init: need at least one input tap");
    }
    NarxParams p;
    p.hidden = hidden;
    p.taps = taps;
    p.seed = seed;
    const auto h = static_cast<Eigen::Index>(hidden);
    const auto fan_in = static_cast<Eigen::Index>(taps + 1);
    p.w_hidden.resize(h, fan_in);
    p.w_out.resize(h + 1);
    RngStream rng(seed, kNarxStream);
    const double hidden_std = 0.5 / std::sqrt(static_cast<double>(fan_in));
    for (Eigen::Index j = 0; j < h; ++j) {
        for (Eigen::Index k = 0; k < fan_in; ++k) {
            p.w_hidden(j, k) = hidden_std * rng.normal();
        }
    }
    const double out_std = 0.5 / std::sqrt(static_cast<double>(h + 1));
    for (Eigen::Index j = 0; j <= h; ++j) {
        p.w_out[j] = out_std * rng.normal();
    }
    return p;
}

Matrix narx_inputs(std::span<const double> u, std::size_t taps)
{
    const auto rows = static_cast<Eigen::Index>(u.size());
    const auto cols = static_cast<Eigen::Index>(taps + 1);
    Matrix Z = Matrix::Zero(rows, cols);
    Z.col(cols - 1).setOnes();
    for (std::size_t t = 0; t < u.size(); ++t) {
        for (std::size_t k = 0; k < taps && k <= t; ++k) {
            Z(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = u[t - k];
        }
    }
    return Z;
}

Vector narx_pack(const NarxParams& p)
{
    const Eigen::Index h = p.w_hidden.rows();
    const Eigen::Index fan_in = p.w_hidden.cols();
    Vector flat(h * fan_in + h + 1);
    Eigen::Index i = 0;
    for (Eigen::Index j = 0; j < h; ++j) {
        for (Eigen::Index k = 0; k < fan_in; ++k) {
            flat[i++] = p.w_hidden(j, k);
        }
    }
    flat.tail(h + 1) = p.w_out;
    return flat;
}

void narx_unpack(const Vector& flat, NarxParams& p)
{
    const Eigen::Index h = p.w_hidden.rows();
    const Eigen::Index fan_in = p.w_hidden.cols();
    if (flat.size() != h * fan_in + h + 1) {
        throw ContractError("narx_unpack: parameter vector has the wrong length");
    }
    Eigen::Index i = 0;
    for (Eigen::Index j = 0; j < h; ++j) {
        for (Eigen::Index k = 0; k < fan_in; ++k) {
            p.w_hidden(j, k) = flat[i++];
        }
    }
    p.w_out = flat.tail(h + 1);
}

Vector narx_forward(const NarxParams& p, const Matrix& inputs, StepRange rows)
{
    check_rows(inputs, rows);
    const Eigen::Index h = p.w_hidden.rows();
    Vector y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t t = rows.begin; t < rows.end; ++t) {
        const auto row = static_cast<Eigen::Index>(t);
        double acc = 0.0;
        for (Eigen::Index j = 0; j < h; ++j) {
            acc += p.w_out[j] * hidden_activation(p, inputs, row, j);
        }
        y[static_cast<Eigen::Index>(t - rows.begin)] = acc + p.w_out[h];
    }
    return y;
}

Matrix narx_jacobian(const NarxParams& p, const Matrix& inputs, StepRange rows)
{
    check_rows(inputs, rows);
    const Eigen::Index h = p.w_hidden.rows();
    const Eigen::Index fan_in = p.w_hidden.cols();
    Matrix J(static_cast<Eigen::Index>(rows.size()), h * fan_in + h + 1);
    for (std::size_t t = rows.begin; t < rows.end; ++t) {
        const auto row = static_cast<Eigen::Index>(t);
        const auto i = static_cast<Eigen::Index>(t - rows.begin);
        for (Eigen::Index j = 0; j < h; ++j) {
            const double a = hidden_activation(p, inputs, row, j);
            const double scale = p.w_out[j] * (1.0 - a * a);
            for (Eigen::Index k = 0; k < fan_in; ++k) {
                J(i, j * fan_in + k) = scale * inputs(row, k);
            }
            J(i, h * fan_in + j) = a;
        }
        J(i, h * fan_in + h) = 1.0;
    }
    return J;
}

std::vector<double> detail::predict_narx(const NarxParams& params, std::span<const double> u)
{
    const Matrix Z = narx_inputs(u, params.taps);
    const Vector y = narx_forward(params, Z, {0, u.size()});
    return {y.data(), y.data() + y.size()};
}

TrainedModel narx_train(std::size_t hidden, const Dataset& data, std::uint64_t seed,
                        const LmOptions& opts)
{
    NarxParams params = narx_init(hidden, seed);
    const StepRange rows = data.train_rows();
    const std::span<const double> u(data.series.u);
    const Matrix Z = narx_inputs(u.first(rows.end), params.taps);
    const Eigen::Map<const Vector> target(data.series.y_hat.data() + rows.begin,
                                          static_cast<Eigen::Index>(rows.size()));

    NarxParams work = params;
    const ResidualFn residual = [&](const Vector& flat) {
        narx_unpack(flat, work);
        return Vector(narx_forward(work, Z, rows) - target);
    };
    const JacobianFn jacobian = [&](const Vector& flat) {
        narx_unpack(flat, work);
        return narx_jacobian(work, Z, rows);
    };
    const FitResult fit = levenberg_marquardt(residual, jacobian, narx_pack(params), opts);
    narx_unpack(fit.params, params);

    TrainedModel model;
    model.spec = {ModelFamily::Narx, hidden, 0.0, seed};
    model.meta.washout = data.washout;
    model.meta.train_len = data.train_len;
    model.meta.iterations = fit.iterations;
    model.meta.converged = fit.converged;
    const Vector fitted = narx_forward(params, Z, {0, rows.end});
    model.weights = NarxWeights{std::move(params)};
    detail::record_training_error(model, data,
                                  std::span<const double>(fitted.data(), rows.end));
    return model;
}

} // namespace resbench
