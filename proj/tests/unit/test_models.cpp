#include "doctest.h"

#include "resbench/error.hpp"
#include "resbench/io.hpp"
#include "resbench/metrics.hpp"
#include "resbench/models.hpp"
#include "resbench/rng.hpp"

#include <cmath>
#include <vector>

using namespace resbench;

namespace {

std::span<const double> head(const std::vector<double>& v, std::size_t n)
{
    return std::span<const double>(v).first(n);
}

double train_rnmse_from_prediction(const TrainedModel& m, const Dataset& d)
{
    const auto y = predict(m, d.series.u);
    const StepRange r = d.train_rows();
    return rnmse(std::span<const double>(y).subspan(r.begin, r.size()),
                 std::span<const double>(d.series.y_hat).subspan(r.begin, r.size()));
}

} // namespace

TEST_SUITE("models")
{
    TEST_CASE("delay line shifts one step per push")
    {
        DelayLine dl(3);
        CHECK(dl.tap(0) == 0.0);
        dl.push(1.0);
        dl.push(2.0);
        CHECK(dl.tap(0) == 2.0);
        CHECK(dl.tap(1) == 1.0);
        CHECK(dl.tap(2) == 0.0);
        dl.push(3.0);
        dl.push(4.0);
        CHECK(dl.tap(0) == 4.0);
        CHECK(dl.tap(1) == 3.0);
        CHECK(dl.tap(2) == 2.0);
        dl.reset();
        CHECK(dl.tap(0) == 0.0);
    }

    TEST_CASE("dl_run layout")
    {
        const std::vector<double> u = {1, 2, 3, 4, 5};
        const Matrix x = dl_run(3, u);
        REQUIRE(x.rows() == 5);
        REQUIRE(x.cols() == 4);
        CHECK(x(0, 0) == 1);
        CHECK(x(0, 1) == 0);
        CHECK(x(3, 0) == 4);
        CHECK(x(3, 1) == 3);
        CHECK(x(3, 2) == 2);
        CHECK(x(4, 3) == 1);
        const Matrix xw = dl_run(3, u, 2);
        REQUIRE(xw.rows() == 3);
        CHECK(xw.row(0) == x.row(2));
    }

    TEST_CASE("delay line reproduces delayed inputs exactly")
    {
        SeriesPair p = generate(TaskId::Narma10, 600, 4);
        const std::size_t d = 4;
        for (std::size_t t = 0; t < p.size(); ++t) {
            p.y_hat[t] = t >= d ? p.u[t - d] : 0.0;
        }
        const Dataset data = make_dataset(p, 300, d);
        const TrainedModel m = dl_train(6, data);
        REQUIRE(m.meta.train_rnmse);
        CHECK(*m.meta.train_rnmse <= 1e-8);
    }

    TEST_CASE("delay line training error is non-increasing in taps")
    {
        const Dataset data = make_dataset(generate(TaskId::Narma10, 1200, 8), 600, 0);
        double prev = 1e9;
        for (std::size_t n : {1, 2, 5, 9, 10, 20, 50, 100}) {
            const double e = *dl_train(n, data).meta.train_rnmse;
            CHECK(e <= prev + 1e-12);
            prev = e;
        }
    }

    TEST_CASE("esn initialization")
    {
        CHECK_THROWS_AS(esn_init(0, 0.1, 1), ContractError);
        CHECK_THROWS_AS(esn_init(10, 0.0, 1), ContractError);
        const EsnParams p = esn_init(200, 0.07, 3);
        const EsnParams q = esn_init(200, 0.07, 3);
        CHECK(p.w_res == q.w_res);
        CHECK(p.w_in == q.w_in);
        const double var = p.w_res.squaredNorm() / static_cast<double>(p.w_res.size());
        CHECK(std::sqrt(var) == doctest::Approx(0.07).epsilon(0.02));
        CHECK(std::abs(p.w_res.mean()) < 0.002);
    }

    TEST_CASE("esn step follows the tanh update")
    {
        const EsnParams p = esn_init(5, 0.5, 9);
        Vector x = Vector::Zero(5);
        x = esn_step(p, x, 0.3);
        for (int j = 0; j < 5; ++j) {
            CHECK(x(j) == doctest::Approx(std::tanh(p.w_in(j) * 0.3)).epsilon(1e-15));
        }
        const Vector y = esn_step(p, x, -0.1);
        for (int j = 0; j < 5; ++j) {
            double a = p.w_in(j) * -0.1;
            for (int k = 0; k < 5; ++k) {
                a += p.w_res(j, k) * x(k);
            }
            CHECK(y(j) == doctest::Approx(std::tanh(a)).epsilon(1e-14));
        }
        const std::vector<double> u = {0.3, -0.1};
        const Matrix s = esn_states(p, u);
        CHECK((s.col(1) - y).norm() < 1e-15);
    }

    TEST_CASE("esn states stay in the tanh range over 1000 random steps")
    {
        RngStream rng(3, 3);
        std::vector<double> u(1000);
        for (double& v : u) {
            v = rng.uniform(-2.0, 2.0);
        }
        for (double sigma : {0.02, 0.1, 0.3}) {
            const Matrix s = esn_states(esn_init(100, sigma, 5), u);
            CHECK(s.cwiseAbs().maxCoeff() < 1.0);
        }
        // Saturated reservoirs may round to exactly +-1 but never beyond.
        const Matrix big = esn_states(esn_init(100, 50.0, 5), u);
        CHECK(big.cwiseAbs().maxCoeff() <= 1.0);
    }

    TEST_CASE("esn readout is linear in the target")
    {
        const Dataset data = make_dataset(generate(TaskId::Narma10, 800, 2), 400, 0);
        Dataset scaled = data;
        for (double& v : scaled.series.y_hat) {
            v *= 3.5;
        }
        const EsnParams p = esn_init(40, 0.1, 7);
        const auto a = esn_train(p, data);
        const auto b = esn_train(p, scaled);
        const Matrix& wa = std::get<EsnWeights>(a.weights).w_out;
        const Matrix& wb = std::get<EsnWeights>(b.weights).w_out;
        CHECK((wb - 3.5 * wa).norm() <= 1e-10 * (3.5 * wa).norm());
        const auto ya = predict(a, head(data.series.u, 400));
        const auto yb = predict(b, head(data.series.u, 400));
        for (std::size_t t = 0; t < ya.size(); ++t) {
            CHECK(yb[t] == doctest::Approx(3.5 * ya[t]).epsilon(1e-10));
        }
    }

    TEST_CASE("esn with zero target learns zero weights")
    {
        Dataset data = make_dataset(generate(TaskId::Narma10, 400, 2), 200, 0);
        std::fill(data.series.y_hat.begin(), data.series.y_hat.end(), 0.0);
        const auto m = esn_train(esn_init(20, 0.1, 1), data);
        CHECK(std::get<EsnWeights>(m.weights).w_out.norm() == 0.0);
        CHECK(m.meta.sse == 0.0);
    }

    TEST_CASE("narx parameter packing round trips")
    {
        NarxParams p = narx_init(4, 1);
        CHECK(p.w_hidden.rows() == 4);
        CHECK(p.w_hidden.cols() == 11);
        CHECK(p.parameter_count() == 4 * 11 + 5);
        const Vector flat = narx_pack(p);
        NarxParams q = narx_init(4, 2);
        narx_unpack(flat, q);
        CHECK(q.w_hidden == p.w_hidden);
        CHECK(q.w_out == p.w_out);
    }

    TEST_CASE("narx forward matches a direct evaluation")
    {
        const NarxParams p = narx_init(3, 5);
        const SeriesPair s = generate(TaskId::Narma10, 50, 1);
        const Matrix in = narx_inputs(s.u);
        const Vector out = narx_forward(p, in, {0, 50});
        for (std::size_t t : {0, 3, 9, 10, 49}) {
            double y = p.w_out(3);
            for (int h = 0; h < 3; ++h) {
                double a = p.w_hidden(h, 10);
                for (std::size_t k = 0; k < 10; ++k) {
                    a += p.w_hidden(h, static_cast<Eigen::Index>(k)) * (t >= k ? s.u[t - k] : 0.0);
                }
                y += p.w_out(h) * std::tanh(a);
            }
            CHECK(out(static_cast<Eigen::Index>(t)) == doctest::Approx(y).epsilon(1e-13));
        }
    }

    TEST_CASE("narx jacobian matches central differences at 10 random weight settings")
    {
        const SeriesPair s = generate(TaskId::Narma10, 60, 3);
        const Matrix in = narx_inputs(s.u);
        const StepRange rows{5, 60};
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            NarxParams p = narx_init(4, 100 + seed);
            const Matrix j = narx_jacobian(p, in, rows);
            const Vector flat = narx_pack(p);
            Matrix fd(j.rows(), j.cols());
            const double h = 1e-6;
            for (Eigen::Index k = 0; k < flat.size(); ++k) {
                NarxParams pp = p, pm = p;
                Vector fp = flat, fm = flat;
                fp(k) += h;
                fm(k) -= h;
                narx_unpack(fp, pp);
                narx_unpack(fm, pm);
                fd.col(k) = (narx_forward(pp, in, rows) - narx_forward(pm, in, rows)) / (2 * h);
            }
            CHECK((fd - j).norm() <= 1e-4 * j.norm());
        }
    }

    TEST_CASE("narx learns a constant target through the output bias")
    {
        Dataset data = make_dataset(generate(TaskId::Narma10, 300, 2), 150, 0);
        std::fill(data.series.y_hat.begin(), data.series.y_hat.end(), 0.37);
        const TrainedModel m = narx_train(3, data, 5);
        const auto y = predict(m, data.series.u);
        for (double v : y) {
            CHECK(v == doctest::Approx(0.37).epsilon(1e-6));
        }
    }

    TEST_CASE("narx fits the henon map")
    {
        const Dataset data = make_dataset(generate(TaskId::Henon, 1200, 2), 600, 0);
        const TrainedModel m = narx_train(5, data, 9);
        REQUIRE(m.meta.train_rnmse);
        CHECK(*m.meta.train_rnmse < 0.01);
        CHECK(m.meta.iterations > 0);
    }

    TEST_CASE("stored training error equals the error recomputed from predict")
    {
        const Dataset data = make_dataset(generate(TaskId::Narma10, 1000, 6), 500, 20);
        const TrainedModel models[] = {
            dl_train(15, data),
            esn_train(esn_init(30, 0.1, 3), data),
            narx_train(3, data, 4, [] {
                LmOptions o;
                o.max_iterations = 20;
                return o;
            }()),
        };
        for (const TrainedModel& m : models) {
            REQUIRE(m.meta.train_rnmse);
            CHECK(*m.meta.train_rnmse == train_rnmse_from_prediction(m, data));
            CHECK(m.meta.washout == 20);
        }
    }

    TEST_CASE("predict is deterministic and survives a JSON round trip")
    {
        const Dataset data = make_dataset(generate(TaskId::Henon, 600, 6), 300, 0);
        const TrainedModel models[] = {dl_train(7, data), esn_train(esn_init(25, 0.05, 3), data),
                                       narx_train(2, data, 4)};
        for (const TrainedModel& m : models) {
            const auto y1 = predict(m, data.series.u);
            const auto y2 = predict(m, data.series.u);
            CHECK(y1 == y2);
            const Json j = Json::parse(model_to_json(m).dump());
            const TrainedModel back = model_from_json(j);
            CHECK(predict(back, data.series.u) == y1);
            CHECK(back.meta.train_rnmse == m.meta.train_rnmse);
        }
    }

    TEST_CASE("model names")
    {
        CHECK(parse_model("dl") == ModelFamily::DelayLine);
        CHECK(parse_model("narx") == ModelFamily::Narx);
        CHECK(parse_model("esn") == ModelFamily::Esn);
        CHECK_THROWS_AS(parse_model("lstm"), ContractError);
        CHECK(to_string(ModelFamily::Esn) == "esn");
    }
}
