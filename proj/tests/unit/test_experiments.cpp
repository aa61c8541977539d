#include "doctest.h"

#include "resbench/error.hpp"
#include "resbench/experiments.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <set>
#include <vector>

using namespace resbench;

namespace {

Protocol small_protocol(std::size_t series, std::size_t instances = 1)
{
    Protocol p;
    p.n_series = series;
    p.instances = instances;
    p.series_len = 600;
    p.train_len = 300;
    return p;
}

ErrorSurface synthetic_surface(const std::vector<double>& ns, const std::vector<double>& sigmas,
                               double (*f)(double, double))
{
    ErrorSurface s;
    s.n_grid = ns;
    s.sigma_grid = sigmas;
    for (double sg : sigmas) {
        for (double n : ns) {
            s.cells.push_back({f(sg, n), 0.0, 3, false});
        }
    }
    return s;
}

double bowl(double sigma, double n)
{
    const double opt = 0.3 * std::pow(n, -0.26);
    return (sigma - opt) * (sigma - opt);
}

} // namespace

TEST_SUITE("experiments")
{
    TEST_CASE("protocol presets")
    {
        const Protocol dl = Protocol::paper(ModelFamily::DelayLine);
        CHECK(dl.n_series == 10);
        CHECK(dl.series_len == 4000);
        CHECK(dl.train_len == 2000);
        const Protocol esn = Protocol::paper(ModelFamily::Esn);
        CHECK(esn.n_series == 20);
        CHECK(esn.instances == 5);
        CHECK(esn.base_seed == 42);
        CHECK(Protocol::desk(ModelFamily::Esn).n_series == 5);
        CHECK(Protocol::desk(ModelFamily::Esn).instances == 2);
        CHECK(Protocol::paper_sweep().n_series == 10);
        CHECK(Protocol::desk_sweep().n_series == 3);

        Protocol bad = dl;
        bad.train_len = 4000;
        CHECK_THROWS_AS(bad.validate(), ContractError);
        bad = dl;
        bad.n_series = 0;
        CHECK_THROWS_AS(bad.validate(), ContractError);
    }

    TEST_CASE("derived seeds are unique per series and instance")
    {
        std::set<std::uint64_t> seeds;
        for (std::size_t s = 0; s < 20; ++s) {
            for (std::size_t i = 0; i < 5; ++i) {
                seeds.insert(model_seed(42, TaskId::Narma10, ModelFamily::Esn, s, i));
            }
            seeds.insert(series_seed(42, TaskId::Narma10, s));
        }
        CHECK(seeds.size() == 120);
        CHECK(series_seed(42, TaskId::Henon, 0) != series_seed(42, TaskId::Narma10, 0));
        CHECK(series_seed(42, TaskId::Henon, 0) != series_seed(43, TaskId::Henon, 0));
    }

    TEST_CASE("one series with one model gives zero spread")
    {
        const ProtocolResult r
            = run_protocol(ModelFamily::DelayLine, {10, 0.0}, TaskId::Narma10, small_protocol(1));
        CHECK(r.report.runs == 1);
        for (Metric m : kMetrics) {
            for (Split s : kSplits) {
                CHECK(r.report.at(m, s).std == 0.0);
            }
        }
        const ProtocolResult e
            = run_protocol(ModelFamily::Esn, {20, 0.1}, TaskId::Narma10, small_protocol(2, 3));
        CHECK(e.runs.size() == 6);
        CHECK(e.runs[4].series_index == 1);
        CHECK(e.runs[4].instance_index == 1);
    }

    TEST_CASE("run_protocol is bitwise identical for any worker count")
    {
        const std::vector<Hyperparams> configs = {{10, 0.05}, {25, 0.1}, {40, 0.2}};
        ExecOptions one;
        one.workers = 1;
        const auto ref = run_protocols(ModelFamily::Esn, configs, TaskId::Narma20, small_protocol(2, 2), one);
        for (std::size_t w : {2, 3, 8}) {
            ExecOptions exec;
            exec.workers = w;
            const auto got = run_protocols(ModelFamily::Esn, configs, TaskId::Narma20, small_protocol(2, 2), exec);
            REQUIRE(got.size() == ref.size());
            for (std::size_t c = 0; c < ref.size(); ++c) {
                for (Metric m : kMetrics) {
                    for (Split s : kSplits) {
                        const MeanStd& a = ref[c].report.at(m, s);
                        const MeanStd& b = got[c].report.at(m, s);
                        CHECK(std::memcmp(&a.mean, &b.mean, sizeof(double)) == 0);
                        CHECK(std::memcmp(&a.std, &b.std, sizeof(double)) == 0);
                    }
                }
            }
        }
    }

    TEST_CASE("a single-cell sweep equals the protocol training mean")
    {
        const Protocol p = small_protocol(3);
        const std::vector<std::size_t> ns = {30};
        const std::vector<double> sg = {0.08};
        const ErrorSurface s = sweep_surface(TaskId::Narma10, ModelFamily::Esn, ns, sg, p);
        const ProtocolResult r = run_protocol(ModelFamily::Esn, {30, 0.08}, TaskId::Narma10, p);
        REQUIRE(s.cells.size() == 1);
        CHECK(s.cells[0].mean == r.report.at(Metric::Rnmse, Split::Train).mean);
        CHECK(s.cells[0].runs == 3);
        CHECK_FALSE(s.cells[0].failed);
    }

    TEST_CASE("delay line surface is non-increasing in N")
    {
        const std::vector<std::size_t> ns = {1, 2, 5, 10, 20, 50};
        const ErrorSurface s
            = sweep_surface(TaskId::Narma10, ModelFamily::DelayLine, ns, {}, small_protocol(3));
        REQUIRE(s.sigma_grid.size() == 1);
        CHECK(std::isnan(s.sigma_grid[0]));
        for (std::size_t j = 1; j < ns.size(); ++j) {
            CHECK(s.at(0, j).mean <= s.at(0, j - 1).mean + s.at(0, j - 1).std);
        }
    }

    TEST_CASE("interpolation is exact at nodes and bilinear between them")
    {
        ErrorSurface s;
        s.n_grid = {10, 20};
        s.sigma_grid = {0.1, 0.2};
        s.cells = {{1.0, 0, 1, false}, {2.0, 0, 1, false}, {3.0, 0, 1, false}, {5.0, 0, 1, false}};
        CHECK(*interpolate(s, 0.1, 10) == 1.0);
        CHECK(*interpolate(s, 0.2, 20) == 5.0);
        CHECK(*interpolate(s, 0.15, 15) == doctest::Approx(2.75).epsilon(1e-14));
        CHECK(*interpolate(s, 0.1, 15) == doctest::Approx(1.5).epsilon(1e-14));
        CHECK_FALSE(interpolate(s, 0.25, 15));
        CHECK_FALSE(interpolate(s, 0.15, 5));
        s.cells[3].failed = true;
        CHECK_FALSE(interpolate(s, 0.15, 15));
        CHECK(*interpolate(s, 0.1, 15) == doctest::Approx(1.5).epsilon(1e-14));
    }

    TEST_CASE("optimal sigma recovers the analytic minimum of a synthetic surface")
    {
        const std::vector<double> ns = {10, 20, 50, 100, 150, 200, 300, 400, 500, 700, 1000};
        const ErrorSurface s = synthetic_surface(ns, default_sigma_grid(), bowl);
        const auto opt = optimal_sigma(s);
        REQUIRE(opt.size() == ns.size());
        // Piecewise-linear in sigma, so the minimizer sits on a grid node:
        // within half a coarse step of the truth.
        const double half_step = 0.5 * (0.29 / 29.0) + 1e-12;
        for (const OptimalSigma& o : opt) {
            REQUIRE(o.ok);
            CHECK(std::abs(o.sigma - 0.3 * std::pow(o.n, -0.26)) <= half_step);
        }
        // Off-grid N query.
        const std::vector<double> q = {250};
        const auto mid = optimal_sigma(s, q);
        REQUIRE(mid[0].ok);
        CHECK(std::abs(mid[0].sigma - 0.3 * std::pow(250.0, -0.26)) <= 2 * half_step);
    }

    TEST_CASE("optimal sigma tie-break goes to the smaller sigma")
    {
        const std::vector<double> ns = {10, 20, 30};
        const std::vector<double> sg = {0.05, 0.1, 0.15, 0.2};
        const ErrorSurface flat = synthetic_surface(ns, sg, [](double, double) { return 0.7; });
        for (const OptimalSigma& o : optimal_sigma(flat)) {
            CHECK(o.sigma == 0.05);
        }
        // Two equal minima at 0.1 and 0.2.
        const ErrorSurface twin = synthetic_surface(ns, sg, [](double s, double) {
            return std::abs(s - 0.1) < 1e-9 || std::abs(s - 0.2) < 1e-9 ? 0.1 : 0.5;
        });
        for (int refine : {1, 3, 10}) {
            for (const OptimalSigma& o : optimal_sigma(twin, {}, refine)) {
                CHECK(o.sigma == 0.1);
            }
        }
    }

    TEST_CASE("failed columns are skipped with a diagnostic")
    {
        const std::vector<double> ns = {10, 20, 30, 40, 50};
        ErrorSurface s = synthetic_surface(ns, default_sigma_grid(), bowl);
        s.at(4, 2).failed = true;
        const auto opt = optimal_sigma(s);
        CHECK_FALSE(opt[2].ok);
        CHECK_FALSE(opt[2].diagnostic.empty());
        CHECK(opt[1].ok);
        const FitResult f = fit_optimal_sigma_curve(opt);
        CHECK(f.params.size() == 3);
        std::vector<OptimalSigma> three(opt.begin(), opt.begin() + 3);
        CHECK_THROWS_AS(fit_optimal_sigma_curve(three), ContractError);
    }

    TEST_CASE("curve from surface takes the minimum over sigma")
    {
        const std::vector<double> ns = {10, 100};
        const ErrorSurface s = synthetic_surface(ns, default_sigma_grid(), bowl);
        const auto c = curve_from_surface(s);
        REQUIRE(c.size() == 2);
        CHECK(c[0].size == 10);
        double best = 1e9;
        for (double sg : default_sigma_grid()) {
            best = std::min(best, bowl(sg, 10));
        }
        CHECK(c[0].error == best);
    }

    TEST_CASE("functional comparison")
    {
        const std::vector<CurvePoint> cand = {{1, 0.9}, {10, 0.5}, {20, 0.55}, {100, 0.1}, {200, 0.05}};
        const std::vector<CurvePoint> ref = {{5, 0.95}, {50, 0.3}, {60, 0.52}, {400, 0.01}};
        const EquivalenceCurve eq = functional_compare(ref, cand, TaskId::Narma10);
        REQUIRE(eq.points.size() == 4);
        CHECK(eq.points[0].status == MatchStatus::BelowRange);
        CHECK(*eq.points[0].matched_size == 1);
        // The running minimum holds 0.5 at size 20, so 0.3 lies halfway between sizes 20 and 100.
        CHECK(eq.points[1].status == MatchStatus::Matched);
        CHECK(*eq.points[1].matched_size == doctest::Approx(20 + 0.5 * 80).epsilon(1e-14));
        CHECK(*eq.points[2].matched_size == doctest::Approx(1 + (0.9 - 0.52) / 0.4 * 9).epsilon(1e-14));
        CHECK(eq.points[3].status == MatchStatus::Unreachable);
        CHECK_FALSE(eq.points[3].matched_size);
        for (const EquivalencePoint& p : eq.points) {
            if (p.status == MatchStatus::Matched) {
                CHECK(std::abs(*p.matched_error - p.reference_error) <= 0.02 * p.reference_error);
            }
        }
        const std::vector<CurvePoint> unsorted = {{10, 0.5}, {5, 0.4}};
        CHECK_THROWS_AS(functional_compare(ref, unsorted), ContractError);
    }

    TEST_CASE("equivalence curve is consistent on measured curves")
    {
        const Protocol p = small_protocol(2);
        const std::vector<std::size_t> dl_ns = {1, 2, 5, 10, 20, 40, 80, 150};
        const std::vector<std::size_t> esn_ns = {10, 20, 40};
        const std::vector<double> sg = {0.05, 0.1, 0.2};
        const auto dl = curve_from_surface(sweep_surface(TaskId::Narma10, ModelFamily::DelayLine, dl_ns, {}, p));
        const auto esn = curve_from_surface(sweep_surface(TaskId::Narma10, ModelFamily::Esn, esn_ns, sg, p));
        const EquivalenceCurve eq = functional_compare(esn, dl);
        for (const EquivalencePoint& pt : eq.points) {
            if (pt.status == MatchStatus::Matched) {
                CHECK(std::abs(*pt.matched_error - pt.reference_error) <= 0.02 * pt.reference_error);
            }
        }
    }

    TEST_CASE("default grids")
    {
        const auto sg = default_sigma_grid();
        REQUIRE(sg.size() == 30);
        CHECK(sg.front() == 0.01);
        CHECK(sg.back() == 0.30);
        CHECK(sg[6] == doctest::Approx(0.07).epsilon(1e-14));
        CHECK(default_n_grid().size() == 11);
        CHECK(desk_n_grid().back() == 200);
    }
}
