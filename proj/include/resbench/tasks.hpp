#pragma once

// Benchmark series generators and train/test splitting.
//
// Every pair is aligned so that the target at step t is the first output of
// the underlying system that depends on input u_t:
//   Henon:   u_t = y_t,  y_hat_t = y_{t+1}
//   NARMA-n: u_t ~ U[0, 0.5],  y_hat_t = y_{t+1}

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace resbench {

enum class TaskId { Henon, Narma10, Narma20 };

std::string_view to_string(TaskId task) noexcept;
/// Accepts "henon", "narma10", "narma20". Throws ContractError otherwise.
TaskId parse_task(std::string_view name);

struct SeriesPair {
    std::vector<double> u;
    std::vector<double> y_hat;
    TaskId task = TaskId::Henon;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return u.size(); }
};

struct NarmaCoefficients {
    double alpha = 0.3;
    double beta = 0.05;
    double gamma = 1.5;
    double delta = 0.1;
};

/// Henon recurrence y_t = 1 - 1.4 y_{t-1}^2 + 0.3 y_{t-2} + z_t from
/// y_0 = y_{-1} = 0, with `noise` supplying z_1, z_2, ... Returns y_1..y_T.
std::vector<double> henon_trajectory(std::size_t steps, std::span<const double> noise);

/// NARMA recurrence driven by u_1..u_T with zero history (y_t = u_t = 0 for
/// t <= 0). Returns y_1..y_{T+1}: the extra final value is the response to the
/// last input. Order 20 wraps the update in tanh.
std::vector<double> narma_outputs(int order, std::span<const double> u,
                                  const NarmaCoefficients& k = {});

/// Throws ContractError if steps < 3; NumericalError if 100 attempts all
/// escape |y| > 10.
SeriesPair gen_henon(std::size_t steps, std::uint64_t seed, double noise_std = 0.001);

/// order must be 10 or 20; steps >= order + 1. NumericalError if 100
/// attempts all diverge past |y| > 1e3.
SeriesPair gen_narma(int order, std::size_t steps, std::uint64_t seed);

SeriesPair generate(TaskId task, std::size_t steps, std::uint64_t seed);

/// Rows [begin, end) of a series.
struct StepRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const noexcept { return end - begin; }
};

/// Contiguous split: steps [0, train_len) train, [train_len, T) test. The first
/// `washout` training steps are excluded from regression and error.
struct Dataset {
    SeriesPair series;
    std::size_t train_len = 0;
    std::size_t washout = 0;

    StepRange train_rows() const noexcept { return {washout, train_len}; }
    StepRange test_rows() const noexcept { return {train_len, series.size()}; }
};

/// Throws ContractError unless washout < train_len < T.
Dataset make_dataset(SeriesPair pair, std::size_t train_len, std::size_t washout);

} // namespace resbench
