#include "resbench/tasks.hpp"

#include "resbench/error.hpp"
#include "resbench/rng.hpp"

#include <cmath>
#include <string>

namespace resbench {

namespace {

constexpr int kMaxAttempts = 100;
constexpr double kHenonEscape = 10.0;
constexpr double kNarmaEscape = 1e3;

bool bounded(const std::vector<double>& y, double limit)
{
    for (double v : y) {
        if (!std::isfinite(v) || std::abs(v) > limit) {
            return false;
        }
    }
    return true;
}

std::uint64_t attempt_seed(std::uint64_t seed, int attempt)
{
    return attempt == 0 ? seed : derive_seed({seed, 0x5eed, static_cast<std::uint64_t>(attempt)});
}

} // namespace

std::string_view to_string(TaskId task) noexcept
{
    switch (task) {
    case TaskId::Henon:
        return "henon";
    case TaskId::Narma10:
        return "narma10";
    case TaskId::Narma20:
        return "narma20";
    }
    return "unknown";
}

TaskId parse_task(std::string_view name)
{
    if (name == "henon") {
        return TaskId::Henon;
    }
    if (name == "narma10") {
        return TaskId::Narma10;
    }
    if (name == "narma20") {
        return TaskId::Narma20;
    }
    throw ContractError("unknown task '" + std::string(name) + "' (expected henon, narma10, narma20)");
}

std::vector<double> henon_trajectory(std::size_t steps, std::span<const double> noise)
{
    if (noise.size() < steps) {
        throw ContractError("henon_trajectory: need one noise sample per step");
    }
    std::vector<double> y(steps);
    double prev = 0.0;  // y_{t-1}
    double prev2 = 0.0; // y_{t-2}
    for (std::size_t t = 0; t < steps; ++t) {
        const double next = 1.0 - 1.4 * prev * prev + 0.3 * prev2 + noise[t];
        y[t] = next;
        prev2 = prev;
        prev = next;
    }
    return y;
}

std::vector<double> narma_outputs(int order, std::span<const double> u, const NarmaCoefficients& k)
{
    if (order < 1) {
        throw ContractError("narma_outputs: order must be positive");
    }
    const std::size_t n = static_cast<std::size_t>(order);
    const std::size_t steps = u.size() + 1;
    // y[i] holds y_{i+1}; inputs u[i] hold u_{i+1}.
    std::vector<double> y(steps, 0.0);
    double window = 0.0; // sum of y_{t-1} .. y_{t-n}
    for (std::size_t i = 0; i < steps; ++i) {
        const double y1 = i >= 1 ? y[i - 1] : 0.0;
        const double u1 = i >= 1 ? u[i - 1] : 0.0;
        const double un = i >= n ? u[i - n] : 0.0;
        double v = k.alpha * y1 + k.beta * y1 * window + k.gamma * un * u1 + k.delta;
        if (order == 20) {
            v = std::tanh(v);
        }
        y[i] = v;
        window += v;
        if (i >= n) {
            window -= y[i - n];
        }
    }
    return y;
}

SeriesPair gen_henon(std::size_t steps, std::uint64_t seed, double noise_std)
{
    if (steps < 3) {
        throw ContractError("gen_henon: need at least 3 steps");
    }
    if (!(noise_std >= 0.0)) {
        throw ContractError("gen_henon: noise_std must be non-negative");
    }
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        RngStream rng(attempt_seed(seed, attempt), 0x4e0);
        std::vector<double> noise(steps + 1);
        for (double& z : noise) {
            z = noise_std * rng.normal();
        }
        std::vector<double> y = henon_trajectory(steps + 1, noise);
        if (!bounded(y, kHenonEscape)) {
            continue;
        }
        SeriesPair pair;
        pair.task = TaskId::Henon;
        pair.seed = seed;
        pair.u.assign(y.begin(), y.end() - 1);
        pair.y_hat.assign(y.begin() + 1, y.end());
        return pair;
    }
    throw NumericalError("gen_henon: trajectory escaped in every one of "
                         + std::to_string(kMaxAttempts) + " attempts");
}

SeriesPair gen_narma(int order, std::size_t steps, std::uint64_t seed)
{
    if (order != 10 && order != 20) {
        throw ContractError("gen_narma: order must be 10 or 20");
    }
    if (steps < static_cast<std::size_t>(order) + 1) {
        throw ContractError("gen_narma: need at least order + 1 steps");
    }
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        RngStream rng(attempt_seed(seed, attempt), 0x4a0 + static_cast<std::uint64_t>(order));
        std::vector<double> u(steps);
        for (double& v : u) {
            v = rng.uniform(0.0, 0.5);
        }
        std::vector<double> y = narma_outputs(order, u);
        if (!bounded(y, kNarmaEscape)) {
            continue;
        }
        SeriesPair pair;
        pair.task = order == 10 ? TaskId::Narma10 : TaskId::Narma20;
        pair.seed = seed;
        pair.u = std::move(u);
        pair.y_hat.assign(y.begin() + 1, y.end());
        return pair;
    }
    throw NumericalError("gen_narma: series diverged in every one of "
                         + std::to_string(kMaxAttempts) + " attempts");
}

SeriesPair generate(TaskId task, std::size_t steps, std::uint64_t seed)
{
    switch (task) {
    case TaskId::Henon:
        return gen_henon(steps, seed);
    case TaskId::Narma10:
        return gen_narma(10, steps, seed);
    case TaskId::Narma20:
        return gen_narma(20, steps, seed);
    }
    throw ContractError("generate: unknown task");
}

Dataset make_dataset(SeriesPair pair, std::size_t train_len, std::size_t washout)
{
    if (pair.u.size() != pair.y_hat.size()) {
        throw ContractError("make_dataset: input and target lengths differ");
    }
    if (train_len == 0 || train_len >= pair.size()) {
        throw ContractError("make_dataset: train_len must satisfy 0 < train_len < T (T = "
                            + std::to_string(pair.size()) + ")");
    }
    if (washout >= train_len) {
        throw ContractError("make_dataset: washout must be shorter than the training segment");
    }
    Dataset d;
    d.series = std::move(pair);
    d.train_len = train_len;
    d.washout = washout;
    return d;
}

} // namespace resbench
