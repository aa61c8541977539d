#include "resbench/error.hpp"
#include "resbench/experiments.hpp"
#include "resbench/metrics.hpp"
#include "resbench/numerics.hpp"
#include "resbench/tasks.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace resbench;

namespace {

py::dict report_dict(const ErrorReport& r)
{
    py::dict out;
    for (Metric m : kMetrics) {
        for (Split s : kSplits) {
            const MeanStd& c = r.at(m, s);
            out[py::str(to_string(m) + "_" + to_string(s))] = py::make_tuple(c.mean, c.std, c.runs);
        }
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_resbench, m)
{
    m.doc() = "Delay line, NARX and echo state network benchmark kernels.";

    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<UndefinedMetric>(m, "UndefinedMetric", PyExc_ArithmeticError);

    m.def(
        "generate",
        [](const std::string& task, std::size_t steps, std::uint64_t seed) {
            SeriesPair p = generate(parse_task(task), steps, seed);
            return py::make_tuple(p.u, p.y_hat);
        },
        py::arg("task"), py::arg("steps"), py::arg("seed"),
        "Returns (u, y_hat) lists for one generated series.");

    m.def("rnmse", [](const std::vector<double>& y, const std::vector<double>& t) { return rnmse(y, t); },
          py::arg("y"), py::arg("y_hat"));
    m.def("nrmse", [](const std::vector<double>& y, const std::vector<double>& t) { return nrmse(y, t); },
          py::arg("y"), py::arg("y_hat"));
    m.def("samp", [](const std::vector<double>& y, const std::vector<double>& t) { return samp(y, t); },
          py::arg("y"), py::arg("y_hat"));

    m.def("solve_least_squares", &solve_least_squares, py::arg("X"), py::arg("Y"),
          "Minimum-norm least-squares solution of X W = Y.");

    m.def(
        "fit_power_law",
        [](const std::vector<double>& n, const std::vector<double>& s) {
            const FitResult f = fit_power_law(n, s);
            py::dict d;
            d["a"] = f.params(0);
            d["b"] = f.params(1);
            d["c"] = f.params(2);
            d["sse"] = f.sse;
            d["r_squared"] = f.r_squared;
            d["converged"] = f.converged;
            return d;
        },
        py::arg("n"), py::arg("sigma"));

    m.def(
        "run_protocol",
        [](const std::string& model, std::size_t size, double sigma_w, const std::string& task,
           std::size_t n_series, std::size_t instances, std::uint64_t base_seed, std::size_t workers) {
            const ModelFamily fam = parse_model(model);
            Protocol p = Protocol::desk(fam);
            p.n_series = n_series;
            p.instances = instances;
            p.base_seed = base_seed;
            ExecOptions exec;
            exec.workers = workers;
            ProtocolResult r;
            {
                py::gil_scoped_release release;
                r = run_protocol(fam, {size, sigma_w}, parse_task(task), p, exec);
            }
            return report_dict(r.report);
        },
        py::arg("model"), py::arg("size"), py::arg("sigma_w") = 0.0, py::arg("task") = "narma10",
        py::arg("n_series") = 1, py::arg("instances") = 1, py::arg("base_seed") = 42,
        py::arg("workers") = 1,
        "Mean and std of every metric; keys are '<metric>_<split>'.");

    m.def(
        "functional_compare",
        [](const std::vector<std::pair<double, double>>& ref,
           const std::vector<std::pair<double, double>>& cand) {
            std::vector<CurvePoint> r, c;
            for (auto [s, e] : ref) {
                r.push_back({s, e});
            }
            for (auto [s, e] : cand) {
                c.push_back({s, e});
            }
            const EquivalenceCurve curve = functional_compare(r, c);
            py::list out;
            for (const EquivalencePoint& p : curve.points) {
                out.append(py::make_tuple(p.reference_size, p.matched_size, to_string(p.status)));
            }
            return out;
        },
        py::arg("reference"), py::arg("candidate"),
        "(reference_size, matched_size or None, status) per reference point.");
}
