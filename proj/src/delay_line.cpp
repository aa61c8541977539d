#include "resbench/error.hpp"
#include "resbench/metrics.hpp"
#include "resbench/models.hpp"
#include "model_internal.hpp"

#include <algorithm>

namespace resbench {

DelayLine::DelayLine(std::size_t taps) : taps_(taps), buffer_(taps, 0.0)
{
    if (taps == 0) {
        throw ContractError("DelayLine: need at least one tap");
    }
}

void DelayLine::push(double u)
{
    head_ = (head_ + taps_ - 1) % taps_;
    buffer_[head_] = u;
}

void DelayLine::reset()
{
    std::fill(buffer_.begin(), buffer_.end(), 0.0);
    head_ = 0;
}

Matrix dl_run(std::size_t taps, std::span<const double> u, std::size_t washout)
{
    if (taps == 0) {
        throw ContractError("dl_run: need at least one tap");
    }
    if (washout > u.size()) {
        throw ContractError("dl_run: washout longer than the series");
    }
    const auto rows = static_cast<Eigen::Index>(u.size() - washout);
    const auto cols = static_cast<Eigen::Index>(taps + 1);
    Matrix X = Matrix::Zero(rows, cols);
    X.col(cols - 1).setOnes();
    // Column k is the input sequence delayed by k steps.
    for (std::size_t k = 0; k < taps; ++k) {
        for (std::size_t t = std::max(washout, k); t < u.size(); ++t) {
            X(static_cast<Eigen::Index>(t - washout), static_cast<Eigen::Index>(k)) = u[t - k];
        }
    }
    return X;
}

namespace detail {

std::vector<double> predict_delay_line(const DelayLineWeights& w, std::span<const double> u)
{
    const std::size_t taps = w.taps;
    std::vector<double> y(u.size());
    for (std::size_t t = 0; t < u.size(); ++t) {
        double acc = 0.0;
        const std::size_t reach = std::min(taps, t + 1);
        for (std::size_t k = 0; k < reach; ++k) {
            acc += w.readout[static_cast<Eigen::Index>(k)] * u[t - k];
        }
        y[t] = acc + w.readout[static_cast<Eigen::Index>(taps)];
    }
    return y;
}

} // namespace detail

TrainedModel dl_train(std::size_t taps, const Dataset& data)
{
    const StepRange rows = data.train_rows();
    const std::span<const double> u(data.series.u);
    const Matrix X = dl_run(taps, u.first(rows.end), rows.begin);
    const Matrix Y = Eigen::Map<const Vector>(data.series.y_hat.data() + rows.begin,
                                              static_cast<Eigen::Index>(rows.size()));
    DelayLineWeights w;
    w.taps = taps;
    w.readout = solve_least_squares(X, Y).col(0);

    TrainedModel model;
    model.spec = {ModelFamily::DelayLine, taps, 0.0, 0};
    model.meta.washout = data.washout;
    model.meta.train_len = data.train_len;
    model.weights = w;
    detail::record_training_error(model, data, detail::predict_delay_line(w, u.first(rows.end)));
    return model;
}

} // namespace resbench
