#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "filmspec/bounds.hpp"
#include "filmspec/cli.hpp"
#include "filmspec/eigensolver.hpp"
#include "filmspec/errors.hpp"
#include "filmspec/resolvent.hpp"
#include "filmspec/spectral.hpp"
#include "filmspec/truncation.hpp"
#include "filmspec/version.hpp"

namespace py = pybind11;
using namespace filmspec;

PYBIND11_MODULE(_filmspec, m) {
    m.doc() = "Spectrum, eigenvectors and resolvent of the one-sided thin-film operator";
    m.attr("__version__") = kVersion;

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<BracketError>(m, "BracketError", base.ptr());
    py::register_exception<InsufficientRange>(m, "InsufficientRange", base.ptr());
    py::register_exception<ResidualError>(m, "ResidualError", base.ptr());
    py::register_exception<OverlapError>(m, "OverlapError", base.ptr());
    py::register_exception<OverflowError>(m, "OverflowError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

    py::class_<Bracket>(m, "Bracket")
        .def_readonly("lo", &Bracket::lo)
        .def_readonly("hi", &Bracket::hi)
        .def("__repr__", [](const Bracket& b) {
            std::ostringstream os;
            os.precision(17);
            os << "Bracket(" << b.lo << ", " << b.hi << ")";
            return os.str();
        });

    py::class_<EigenvalueRecord>(m, "EigenvalueRecord")
        .def_readonly("index", &EigenvalueRecord::index)
        .def_readonly("lambda_", &EigenvalueRecord::lambda)
        .def_readonly("bracket", &EigenvalueRecord::bracket)
        .def_readonly("M", &EigenvalueRecord::M)
        .def_readonly("proj_norm", &EigenvalueRecord::proj_norm)
        .def("__repr__", [](const EigenvalueRecord& r) {
            std::ostringstream os;
            os.precision(17);
            os << "EigenvalueRecord(index=" << r.index << ", lambda=" << r.lambda << ")";
            return os.str();
        });

    m.def(
        "evaluate_f",
        [](double eps, double lambda, int M) {
            const auto f = evaluate_f(eps, lambda, M);
            return py::make_tuple(f.sign, f.log_abs);
        },
        py::arg("eps"), py::arg("lambda_"), py::arg("M") = 4000,
        "(sign, log|f|) of the shooting function.");

    m.def(
        "scan",
        [](double eps, double lo, double hi, double step, int M, unsigned threads) {
            const auto r = scan(eps, lo, hi, step, M, threads);
            py::list points;
            for (const auto& p : r.points) {
                points.append(py::make_tuple(p.lambda, p.f.sign, p.f.log_abs));
            }
            return py::make_tuple(points, r.brackets);
        },
        py::arg("eps"), py::arg("lo"), py::arg("hi"), py::arg("step") = 0.01, py::arg("M") = 4000,
        py::arg("threads") = 1, "([(lambda, sign, log|f|)], [Bracket]) on the grid.");

    m.def(
        "compute_spectrum",
        [](double eps, int count, int M, double tol, double step, unsigned threads) {
            SpectrumOptions o;
            o.step = step;
            o.threads = threads;
            py::gil_scoped_release release;
            return compute_spectrum(eps, count, M, tol, o);
        },
        py::arg("eps"), py::arg("count") = 10, py::arg("M") = 4000, py::arg("tol") = 1e-8, py::arg("step") = 0.0,
        py::arg("threads") = 1);

    m.def(
        "eigenvector",
        [](double eps, const EigenvalueRecord& rec, int n_max) {
            const auto v = build_eigenvector(eps, rec, n_max);
            const auto vals = v.entries.values();
            py::array_t<double> arr(static_cast<py::ssize_t>(vals.size()));
            std::copy(vals.begin(), vals.end(), arr.mutable_data());
            return py::make_tuple(arr, v.peak_index, projection_norm(v, rec.index).proj_norm);
        },
        py::arg("eps"), py::arg("record"), py::arg("n_max") = 400,
        "(entries v_1..v_n_max, peak index, projection norm).");

    m.def(
        "resolvent_summary",
        [](double eps, int n_max, int M, int n_cols) {
            const auto pair = build_fundamental_pair(eps, n_max, M);
            const auto k = assemble_kernel(pair);
            const auto h = hs_norm(k);
            py::dict d;
            d["hs_window"] = h.window;
            d["hs_tail"] = h.tail;
            d["hs_corrected"] = h.corrected;
            d["column_constant"] = h.column_constant;
            d["identity_residual"] = verify_inverse_identity(eps, k, n_cols > 0 ? n_cols : n_max / 2);
            d["sigma_spread"] = sigma_spread(pair);
            d["dominant_eigenvalue"] = dominant_eigenvalue(k);
            return d;
        },
        py::arg("eps"), py::arg("n_max") = 400, py::arg("M") = 4000, py::arg("n_cols") = 0);

    m.def(
        "truncated_eigenvalues",
        [](double eps, int N) { return dense_eigenvalues(build_truncated_matrix(eps, N)); },
        py::arg("eps"), py::arg("N"));

    m.def(
        "fit_power_law",
        [](const std::vector<std::pair<int, double>>& rows) {
            std::vector<EigenvalueRecord> recs;
            for (const auto& [n, l] : rows) {
                EigenvalueRecord r;
                r.index = n;
                r.lambda = l;
                recs.push_back(r);
            }
            const auto f = fit_power_law(recs);
            return py::make_tuple(f.alpha, f.gamma);
        },
        py::arg("rows"), "(alpha, gamma) from [(index, lambda)].");

    m.def(
        "bound_suite",
        [](unsigned threads) {
            py::list out;
            for (const auto& r : run_bound_suite(threads)) {
                py::dict d;
                d["bound_id"] = to_string(r.bound_id);
                d["epsilon"] = r.params.epsilon();
                d["lambda"] = r.params.lambda();
                d["N_emp"] = r.N_emp;
                d["window_end"] = r.window_end;
                d["pass"] = r.pass;
                out.append(d);
            }
            return out;
        },
        py::arg("threads") = 1);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "(exit code, stdout, stderr) of one CLI invocation.");
}
