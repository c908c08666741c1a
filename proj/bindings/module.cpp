#include "verblunsky/analysis.hpp"
#include "verblunsky/engine.hpp"
#include "verblunsky/oracle.hpp"
#include "verblunsky/phase.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace verblunsky;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Verblunsky coefficients (PACF) of ARMA/FARIMA models";

    py::class_<ModelSpec>(m, "ModelSpec")
        .def(py::init([](RealSeq phi, RealSeq theta, double d) {
                 return ModelSpec{std::move(phi), std::move(theta), d};
             }),
             py::arg("phi") = RealSeq{}, py::arg("theta") = RealSeq{}, py::arg("d") = 0.0)
        .def_readwrite("phi", &ModelSpec::ar)
        .def_readwrite("theta", &ModelSpec::ma)
        .def_readwrite("d", &ModelSpec::d)
        .def("__repr__", [](const ModelSpec& s) {
            std::string r = "ModelSpec(phi=[";
            for (double v : s.ar) r += std::to_string(v) + ",";
            r += "], theta=[";
            for (double v : s.ma) r += std::to_string(v) + ",";
            r += "], d=" + std::to_string(s.d) + ")";
            return r;
        });

    py::class_<TruncationPolicy>(m, "TruncationPolicy")
        .def(py::init<>())
        .def_readwrite("V", &TruncationPolicy::V)
        .def_readwrite("k_max", &TruncationPolicy::k_max)
        .def_readwrite("term_tol", &TruncationPolicy::term_tol)
        .def_readwrite("abs_floor", &TruncationPolicy::abs_floor)
        .def_readwrite("beta_inner", &TruncationPolicy::beta_inner)
        .def_readwrite("head", &TruncationPolicy::head);

    py::class_<PacfResult>(m, "PacfResult")
        .def_readonly("n", &PacfResult::n)
        .def_readonly("alpha", &PacfResult::alpha)
        .def_readonly("terms_used", &PacfResult::terms_used)
        .def_readonly("last_term", &PacfResult::last_term)
        .def_readonly("est_trunc_error", &PacfResult::est_trunc_error)
        .def_readonly("converged", &PacfResult::converged)
        .def("__repr__", [](const PacfResult& r) {
            return "PacfResult(n=" + std::to_string(r.n) +
                   ", alpha=" + std::to_string(r.alpha) + ")";
        });

    m.def("validate",
          [](const ModelSpec& spec) {
              const auto rep = validate(spec);
              return py::dict(py::arg("ok") = rep.ok(),
                              py::arg("phi_stable") = rep.phi_stable,
                              py::arg("theta_stable") = rep.theta_stable,
                              py::arg("coprime") = rep.coprime,
                              py::arg("d_in_range") = rep.d_in_range);
          },
          py::arg("spec"));

    m.def("ma_coeffs", &ma_coeffs, py::arg("spec"), py::arg("length"));
    m.def("ar_coeffs", &ar_coeffs, py::arg("spec"), py::arg("length"));
    m.def("autocovariance", &autocovariance, py::arg("spec"), py::arg("length"));
    m.def("tau", &tau, py::arg("k_max"));

    m.def("beta",
          [](const ModelSpec& spec, std::size_t n_max, const TruncationPolicy& pol) {
              return beta(spec, n_max, pol).beta;
          },
          py::arg("spec"), py::arg("n_max"), py::arg("policy") = TruncationPolicy{});
    m.def("beta_est_error",
          [](const ModelSpec& spec, std::size_t n_max, const TruncationPolicy& pol) {
              return beta(spec, n_max, pol).est_error;
          },
          py::arg("spec"), py::arg("n_max"), py::arg("policy") = TruncationPolicy{});

    m.def("pacf", &pacf_sweep, py::arg("spec"), py::arg("n_max"),
          py::arg("policy") = TruncationPolicy{}, py::arg("threads") = 0,
          py::call_guard<py::gil_scoped_release>(),
          "Series PACF for n = 2..n_max with the Levinson value at n = 1");

    m.def("levinson",
          [](const RealSeq& gamma, std::size_t n_max) {
              const auto r = levinson(gamma, n_max);
              return py::make_tuple(r.alpha, r.phi.rows, r.v);
          },
          py::arg("gamma"), py::arg("n_max"),
          "Durbin-Levinson PACF, predictor rows, and prediction variances");

    m.def("predictor_table",
          [](const ModelSpec& spec, std::size_t n_max, const TruncationPolicy& pol) {
              const std::size_t W =
                  spec.d > 0.0 ? std::max<std::size_t>(pol.head, 64) : pol.V;
              const std::size_t n_beta = n_max + 2 * W + 2;
              const std::size_t inner = pol.beta_inner_for(spec.d);
              const CoeffTable ct = coeff_table(spec, inner + n_beta + 2, n_max + 2);
              const BetaTable bt = beta(spec, ct, n_beta, pol);
              return predictor_coeffs(ct, bt, n_max, pol).rows;
          },
          py::arg("spec"), py::arg("n_max"), py::arg("policy") = TruncationPolicy{},
          py::call_guard<py::gil_scoped_release>());

    m.def("verify",
          [](const ModelSpec& spec, std::size_t n_max, const TruncationPolicy& pol) {
              bool all_pass = false;
              const auto j = verify_bundle(spec, pol, n_max, all_pass);
              return std::make_pair(all_pass, j.dump());
          },
          py::arg("spec"), py::arg("n_max") = 20,
          py::arg("policy") = TruncationPolicy{},
          py::call_guard<py::gil_scoped_release>(),
          "Returns (all_pass, report_json)");
}
