#pragma once

// Delay line with linear readout, NARX feed-forward network and echo state
// network. Every model maps an input sequence u_0..u_{T-1} to an output
// sequence of the same length; output t may depend on u_0..u_t.

#include "resbench/numerics.hpp"
#include "resbench/tasks.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace resbench {

enum class ModelFamily { DelayLine, Narx, Esn };

std::string_view to_string(ModelFamily family) noexcept;
/// Accepts "dl", "narx", "esn".
ModelFamily parse_model(std::string_view name);

// ---------------------------------------------------------------------------
// Delay line

/// Shift register over the last `taps` inputs; tap 0 is the most recent input.
/// Starts zeroed.
class DelayLine {
public:
    explicit DelayLine(std::size_t taps);

    void push(double u);
    void reset();

    std::size_t taps() const noexcept { return taps_; }
    /// Tap k holds u_{t-k}.
    double tap(std::size_t k) const noexcept { return buffer_[(head_ + k) % taps_]; }

private:
    std::size_t taps_;
    std::vector<double> buffer_;
    std::size_t head_ = 0;
};

/// Design matrix with row t = [u_t, u_{t-1}, ..., u_{t-N+1}, 1]; missing
/// history reads as zero. The first `washout` rows are dropped.
Matrix dl_run(std::size_t taps, std::span<const double> u, std::size_t washout = 0);

// ---------------------------------------------------------------------------
// Echo state network

struct EsnParams {
    std::size_t n = 0;
    double sigma_w = 0.0;
    Vector w_in;  ///< n input weights (single input)
    Matrix w_res; ///< n x n, w_res(j, k) is the weight from node k to node j
    std::uint64_t seed = 0;
};

/// All input and reservoir weights drawn i.i.d. Normal(0, sigma_w^2), no
/// rescaling. Throws ContractError unless n >= 1 and sigma_w > 0.
EsnParams esn_init(std::size_t n, double sigma_w, std::uint64_t seed);

/// x'_j = tanh(w_res_j . x + w_in_j u)
Vector esn_step(const EsnParams& params, const Vector& state, double u);

/// Drives the reservoir from the zero state; column t is the state after
/// consuming u_t. Size n x T.
Matrix esn_states(const EsnParams& params, std::span<const double> u);

// ---------------------------------------------------------------------------
// NARX network

inline constexpr std::size_t kNarxTaps = 10;

/// One hidden tanh layer over the 10 most recent inputs plus bias; linear
/// output with bias.
struct NarxParams {
    std::size_t hidden = 0;
    std::size_t taps = kNarxTaps;
    Matrix w_hidden; ///< hidden x (taps + 1), last column multiplies the bias input
    Vector w_out;    ///< hidden + 1, last entry multiplies the bias input
    std::uint64_t seed = 0;

    std::size_t parameter_count() const noexcept { return hidden * (taps + 1) + hidden + 1; }
};

/// Weights ~ Normal(0, (0.5 / sqrt(fan_in))^2).
NarxParams narx_init(std::size_t hidden, std::uint64_t seed, std::size_t taps = kNarxTaps);

/// Row t = [u_t, ..., u_{t-taps+1}, 1], zero-padded. Size T x (taps + 1).
Matrix narx_inputs(std::span<const double> u, std::size_t taps = kNarxTaps);

Vector narx_pack(const NarxParams& params);
void narx_unpack(const Vector& flat, NarxParams& params);

/// Network output for rows [begin, end) of `inputs`.
Vector narx_forward(const NarxParams& params, const Matrix& inputs, StepRange rows);

/// d(output_i)/d(flat parameters) for rows [begin, end), in narx_pack order.
Matrix narx_jacobian(const NarxParams& params, const Matrix& inputs, StepRange rows);

// ---------------------------------------------------------------------------
// Trained models

struct DelayLineWeights {
    std::size_t taps = 0;
    Vector readout; ///< taps + 1, last entry is the bias weight
};

struct EsnWeights {
    EsnParams params;
    Matrix w_out; ///< (n + 1) x 1, last row is the bias weight
};

struct NarxWeights {
    NarxParams params;
};

struct ModelSpec {
    ModelFamily family = ModelFamily::DelayLine;
    std::size_t size = 0;  ///< taps, hidden units or reservoir nodes
    double sigma_w = 0.0;  ///< ESN only
    std::uint64_t seed = 0;

    std::string describe() const;
};

struct TrainingMeta {
    std::size_t washout = 0;
    std::size_t train_len = 0;
    int iterations = 0;    ///< Levenberg-Marquardt iterations (NARX)
    bool converged = true; ///< false when LM hit its iteration cap
    double sse = 0.0;      ///< sum of squared training errors on the regression rows
    std::optional<double> train_rnmse;
};

struct TrainedModel {
    ModelSpec spec;
    std::variant<DelayLineWeights, EsnWeights, NarxWeights> weights;
    TrainingMeta meta;
};

/// Least-squares readout on the delay-line states of the training rows.
TrainedModel dl_train(std::size_t taps, const Dataset& data);

/// Readout W_out of shape (n + 1) x 1 on harvested states plus a bias column.
TrainedModel esn_train(const EsnParams& params, const Dataset& data);

/// Fresh random initialization from `seed`, then batch Levenberg-Marquardt on
/// all training-row residuals.
TrainedModel narx_train(std::size_t hidden, const Dataset& data, std::uint64_t seed,
                        const LmOptions& opts = {});

/// Runs the model from its zero state over the whole input sequence.
std::vector<double> predict(const TrainedModel& model, std::span<const double> u);

} // namespace resbench
