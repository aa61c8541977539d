#include "doctest.h"

#include "resbench/error.hpp"
#include "resbench/tasks.hpp"

#include <cmath>
#include <vector>

using namespace resbench;

namespace {

// Direct transcription of the NARMA recurrence with explicit history sums,
// 1-based: y[t] for t = 1..T+1 driven by u[1..T].
std::vector<double> narma_oracle(int n, const std::vector<double>& u)
{
    const int steps = static_cast<int>(u.size()) + 1;
    std::vector<double> y(static_cast<std::size_t>(steps) + 1, 0.0);
    auto uu = [&](int t) { return t >= 1 && t <= static_cast<int>(u.size()) ? u[t - 1] : 0.0; };
    auto yy = [&](int t) { return t >= 1 ? y[static_cast<std::size_t>(t)] : 0.0; };
    for (int t = 1; t <= steps; ++t) {
        double hist = 0.0;
        for (int i = 1; i <= n; ++i) {
            hist += yy(t - i);
        }
        double v = 0.3 * yy(t - 1) + 0.05 * yy(t - 1) * hist + 1.5 * uu(t - n) * uu(t - 1) + 0.1;
        if (n == 20) {
            v = std::tanh(v);
        }
        y[static_cast<std::size_t>(t)] = v;
    }
    return y;
}

} // namespace

TEST_SUITE("tasks")
{
    TEST_CASE("henon hand iterations without noise")
    {
        const std::vector<double> zero(5, 0.0);
        const auto y = henon_trajectory(5, zero);
        CHECK(y[0] == 1.0);
        CHECK(y[1] == doctest::Approx(-0.4).epsilon(1e-15));
        CHECK(y[2] == doctest::Approx(1.076).epsilon(1e-15));
        CHECK(y[3] == doctest::Approx(1.0 - 1.4 * 1.076 * 1.076 + 0.3 * -0.4).epsilon(1e-15));
    }

    TEST_CASE("henon pair is one step ahead and matches an independent simulation")
    {
        const SeriesPair p = gen_henon(500, 3, 0.0);
        REQUIRE(p.size() == 500);
        double a = 0.0, b = 0.0; // y_{t-1}, y_{t-2}
        std::vector<double> ref;
        for (int t = 0; t < 501; ++t) {
            const double y = 1.0 - 1.4 * a * a + 0.3 * b;
            ref.push_back(y);
            b = a;
            a = y;
        }
        for (std::size_t t = 0; t < p.size(); ++t) {
            CHECK(p.u[t] == ref[t]);
            CHECK(p.y_hat[t] == ref[t + 1]);
        }
    }

    TEST_CASE("henon noise enters the state")
    {
        const SeriesPair p = gen_henon(4000, 11);
        for (std::size_t t = 1; t < p.size(); ++t) {
            CHECK(p.u[t] == p.y_hat[t - 1]);
        }
        // Noise is small: the recurrence residual stays within a few noise stds.
        double max_res = 0.0, ss = 0.0;
        for (std::size_t t = 2; t < p.size(); ++t) {
            const double z = p.y_hat[t] - (1.0 - 1.4 * p.u[t] * p.u[t] + 0.3 * p.u[t - 1]);
            max_res = std::max(max_res, std::abs(z));
            ss += z * z;
        }
        CHECK(max_res < 0.006);
        CHECK(std::sqrt(ss / 3998.0) == doctest::Approx(0.001).epsilon(0.05));
    }

    TEST_CASE("narma hand iterations with zero input")
    {
        const std::vector<double> u(30, 0.0);
        const auto y10 = narma_outputs(10, u);
        CHECK(y10[0] == doctest::Approx(0.1).epsilon(1e-15));
        CHECK(y10[1] == doctest::Approx(0.1305).epsilon(1e-15));
        const auto y20 = narma_outputs(20, u);
        const double y1 = std::tanh(0.1);
        CHECK(y20[0] == doctest::Approx(y1).epsilon(1e-15));
        CHECK(y20[1] == doctest::Approx(std::tanh(0.3 * y1 + 0.05 * y1 * y1 + 0.1)).epsilon(1e-15));
        CHECK(y20[1] == doctest::Approx(0.12966301156186805).epsilon(1e-14));
    }

    TEST_CASE("narma generator matches the explicit-sum recurrence")
    {
        for (int order : {10, 20}) {
            const SeriesPair p = gen_narma(order, 800, 21);
            const auto ref = narma_oracle(order, p.u);
            for (std::size_t t = 0; t < p.size(); ++t) {
                // Target at index t is y_{t+2}: the output one step after input u_{t+1}.
                CHECK(p.y_hat[t] == doctest::Approx(ref[t + 2]).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("narma bounds")
    {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            for (int order : {10, 20}) {
                const SeriesPair p = gen_narma(order, 4000, seed);
                for (std::size_t t = 0; t < p.size(); ++t) {
                    CHECK(p.u[t] >= 0.0);
                    CHECK(p.u[t] <= 0.5);
                    if (order == 20) {
                        CHECK(std::abs(p.y_hat[t]) < 1.0);
                    }
                    CHECK(std::isfinite(p.y_hat[t]));
                }
            }
        }
    }

    TEST_CASE("generators are deterministic per seed")
    {
        for (TaskId task : {TaskId::Henon, TaskId::Narma10, TaskId::Narma20}) {
            const SeriesPair a = generate(task, 1000, 5);
            const SeriesPair b = generate(task, 1000, 5);
            const SeriesPair c = generate(task, 1000, 6);
            CHECK(a.u == b.u);
            CHECK(a.y_hat == b.y_hat);
            CHECK(a.y_hat != c.y_hat);
            CHECK(a.task == task);
            CHECK(a.seed == 5);
        }
    }

    TEST_CASE("generator preconditions")
    {
        CHECK_THROWS_AS(gen_henon(2, 1), ContractError);
        CHECK_THROWS_AS(gen_narma(10, 10, 1), ContractError);
        CHECK_THROWS_AS(gen_narma(15, 100, 1), ContractError);
        CHECK_THROWS_AS(parse_task("mackey"), ContractError);
        CHECK(parse_task("narma20") == TaskId::Narma20);
    }

    TEST_CASE("make_dataset splits")
    {
        const Dataset d = make_dataset(generate(TaskId::Narma10, 4000, 1), 2000, 0);
        CHECK(d.train_rows().begin == 0);
        CHECK(d.train_rows().end == 2000);
        CHECK(d.test_rows().begin == 2000);
        CHECK(d.test_rows().end == 4000);

        SeriesPair small;
        small.u.assign(10, 0.0);
        small.y_hat.assign(10, 0.0);
        const Dataset e = make_dataset(small, 5, 2);
        // Steps 3-5 in 1-based counting.
        CHECK(e.train_rows().begin == 2);
        CHECK(e.train_rows().end == 5);
        CHECK(e.train_rows().size() == 3);

        CHECK_THROWS_AS(make_dataset(small, 10, 0), ContractError);
        CHECK_THROWS_AS(make_dataset(small, 5, 5), ContractError);
        small.y_hat.pop_back();
        CHECK_THROWS_AS(make_dataset(small, 5, 0), ContractError);
    }
}
