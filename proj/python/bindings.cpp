#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ptep/capacitance.hpp"
#include "ptep/epfinder.hpp"
#include "ptep/json_io.hpp"
#include "ptep/linalg.hpp"
#include "ptep/sensing.hpp"
#include "ptep/spectra.hpp"

namespace py = pybind11;
using namespace ptep;
using epfinder::EpSolution;

namespace {

using Rows = std::vector<std::vector<Complex>>;

linalg::ComplexMatrix to_matrix(const Rows& rows) {
  const std::size_t n = rows.size();
  linalg::ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw InvalidInput("matrix must be square");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Rows to_rows(const linalg::ComplexMatrix& m) {
  Rows rows(m.size(), std::vector<Complex>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) rows[i][j] = m(i, j);
  }
  return rows;
}

EpSolution unwrap(epfinder::NewtonResult r) {
  if (auto* s = std::get_if<EpSolution>(&r)) return std::move(*s);
  const auto& f = std::get<epfinder::NonConvergence>(r);
  throw std::runtime_error("no convergence: " + f.reason);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exceptional points of PT-symmetric resonator arrays";

  py::class_<EpSolution>(m, "EpSolution")
      .def_readonly("order", &EpSolution::order)
      .def_property_readonly("mode", [](const EpSolution& s) { return model::to_string(s.mode); })
      .def_readonly("epsilon", &EpSolution::epsilon)
      .def_property_readonly("a", [](const EpSolution& s) { return s.profile.a; })
      .def_property_readonly("b", [](const EpSolution& s) { return s.profile.b; })
      .def_readonly("gamma", &EpSolution::gamma)
      .def_readonly("residual_norm", &EpSolution::residual_norm)
      .def_readonly("kernel_dim", &EpSolution::kernel_dim)
      .def_readonly("family_id", &EpSolution::family_id)
      .def_property_readonly("pattern",
                             [](const EpSolution& s) { return epfinder::to_string(epfinder::classify(s.profile)); })
      .def("to_json", [](const EpSolution& s) { return json_io::dump(json_io::to_json(s)); })
      .def_static("from_json",
                  [](const std::string& text) { return json_io::solution_from_json(json_io::Json::parse(text)); })
      .def("__repr__", [](const EpSolution& s) {
        return "<EpSolution order=" + std::to_string(s.order) + " mode=" + model::to_string(s.mode) +
               " family=" + std::to_string(s.family_id) + ">";
      });

  m.def(
      "find_eps",
      [](int order, const std::string& mode, double epsilon, int starts, std::uint64_t seed, int threads) {
        epfinder::SolverConfig cfg;
        cfg.starts = starts;
        cfg.rng_seed = seed;
        cfg.threads = threads;
        epfinder::validate_config(cfg);
        const epfinder::EpProblem problem{order, model::parse_mode(mode), epsilon};
        epfinder::validate_problem(problem);
        py::gil_scoped_release release;
        if (problem.mode == model::Mode::leading) return epfinder::enumerate_families(problem, cfg);
        std::vector<EpSolution> out;
        for (const auto& s : epfinder::enumerate_families({order, model::Mode::leading, 0.0}, cfg)) {
          auto r = epfinder::refine_full(s, epsilon, cfg);
          if (auto* f = std::get_if<EpSolution>(&r)) out.push_back(std::move(*f));
        }
        return out;
      },
      py::arg("order"), py::arg("mode") = "leading", py::arg("epsilon") = 0.0, py::arg("starts") = 500,
      py::arg("seed") = 1, py::arg("threads") = 0);

  m.def("refine_full", [](const EpSolution& s, double epsilon) { return unwrap(epfinder::refine_full(s, epsilon)); },
        py::arg("solution"), py::arg("epsilon"));

  m.def(
      "continue_family",
      [](const EpSolution& s, int order) {
        epfinder::SolverConfig cfg;
        cfg.threads = 0;
        auto r = epfinder::continue_family(s, order, cfg);
        if (!r) throw std::runtime_error("no solution with the same pattern at order " + std::to_string(order));
        return *r;
      },
      py::arg("solution"), py::arg("order"));

  m.def(
      "residual",
      [](int order, const std::vector<double>& unknowns, const std::string& mode, double epsilon) {
        return epfinder::residual({order, model::parse_mode(mode), epsilon}, unknowns);
      },
      py::arg("order"), py::arg("unknowns"), py::arg("mode") = "leading", py::arg("epsilon") = 0.0);

  m.def(
      "verify",
      [](const EpSolution& s) {
        std::vector<std::tuple<std::string, bool, std::string>> out;
        for (const auto& c : epfinder::verify(s).checks) out.emplace_back(c.name, c.passed, c.detail);
        return out;
      },
      py::arg("solution"));

  m.def(
      "sweep",
      [](const EpSolution& s, const std::vector<double>& taus) {
        const auto t = spectra::sweep(epfinder::exact_profile(s), s.mode, s.epsilon, taus);
        py::dict d;
        d["tau"] = t.taus;
        d["eigenvalues"] = t.eigenvalues;
        d["gap"] = t.coalescence_gap;
        return d;
      },
      py::arg("solution"), py::arg("taus"));

  m.def(
      "coalescence_exponent",
      [](const EpSolution& s, double tau_min, double tau_max, int steps, double near, double far) {
        const auto taus = spectra::tau_grid(tau_min, tau_max, steps);
        const auto t = spectra::sweep(epfinder::exact_profile(s), s.mode, s.epsilon, taus);
        return spectra::coalescence_exponent(t, s.order, near, far);
      },
      py::arg("solution"), py::arg("tau_min") = 0.0, py::arg("tau_max") = 2.0, py::arg("steps") = 401,
      py::arg("near") = spectra::kFitNear, py::arg("far") = spectra::kFitFar);

  m.def(
      "split",
      [](const EpSolution& s, std::size_t site, double s_min, double s_max, int points) {
        const auto spec = sensing::PerturbationSpec::diagonal(site, sensing::log_grid(s_min, s_max, points));
        const auto f = sensing::split(epfinder::exact_matrix(s), ExtComplex(epfinder::exact_gamma(s)), spec);
        py::dict d;
        d["sizes"] = f.sizes;
        d["max_shift"] = f.max_shift;
        d["slope"] = f.slope;
        d["intercept"] = f.intercept;
        d["r_squared"] = f.r_squared;
        return d;
      },
      py::arg("solution"), py::arg("site") = 1, py::arg("s_min") = 1e-8, py::arg("s_max") = 1e-3,
      py::arg("points") = 25);

  m.def(
      "frequencies",
      [](const std::vector<Complex>& gammas, double delta, double a_scale, double volume) {
        model::PhysicalConstants c;
        c.delta = delta;
        c.a_scale = a_scale;
        c.volume = volume;
        return spectra::to_frequencies(gammas, c).omegas;
      },
      py::arg("gammas"), py::arg("delta") = model::PhysicalConstants{}.delta,
      py::arg("a_scale") = model::PhysicalConstants{}.a_scale, py::arg("volume") = model::PhysicalConstants{}.volume);

  m.def(
      "dilute_matrix",
      [](const std::vector<double>& a, const std::vector<double>& b, double epsilon) {
        return to_rows(capacitance::build_dilute({a, b}, epsilon));
      },
      py::arg("a"), py::arg("b"), py::arg("epsilon"));

  m.def(
      "char_poly", [](const Rows& rows) { return linalg::char_poly(to_matrix(rows)).coeffs; }, py::arg("matrix"));
  m.def(
      "eigenvalues", [](const Rows& rows) { return linalg::eigenvalues(to_matrix(rows)).eigenvalues; },
      py::arg("matrix"));
}
