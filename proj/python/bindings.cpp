#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "khess/pohozaev.hpp"
#include "khess/properties.hpp"
#include "khess/radial.hpp"

namespace py = pybind11;
using namespace khess;

namespace {

py::tuple scalar_tuple(const RadialScalar& s) {
  return py::make_tuple(s.value, s.first_derivative, s.second_derivative);
}

SymMatrix to_matrix(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  SymMatrix a(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n) {
      throw std::invalid_argument("matrix rows must be square");
    }
    for (int j = 0; j < n; ++j) a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  a.require_symmetric();
  return a;
}

std::vector<std::vector<double>> from_matrix(const SymMatrix& a) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(a.size()));
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < a.size(); ++j) rows[static_cast<std::size_t>(i)].push_back(a(i, j));
  }
  return rows;
}

GridOptions grid_options(int panels, int nodes_per_panel, int max_refinements) {
  GridOptions g;
  g.panels = panels;
  g.nodes_per_panel = nodes_per_panel;
  g.max_refinements = max_refinements;
  return g;
}

IdentityId identity_from(const std::string& name) {
  const auto id = parse_identity(name);
  if (!id) throw std::invalid_argument("unknown identity '" + name + "'");
  return *id;
}

}  // namespace

PYBIND11_MODULE(_khess, m) {
  m.doc() = "Radial k-Hessian solutions on space forms and their integral identities";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ShootingError>(m, "ShootingError", PyExc_RuntimeError);

  py::class_<SpaceForm>(m, "SpaceForm")
      .def(py::init<int, double>(), py::arg("n"), py::arg("K"))
      .def_property_readonly("n", &SpaceForm::dimension)
      .def_property_readonly("K", &SpaceForm::curvature)
      .def_property_readonly("max_radius", &SpaceForm::max_radius)
      .def("admissible", &SpaceForm::admissible)
      .def("__repr__", [](const SpaceForm& s) {
        std::ostringstream out;
        out << "SpaceForm(n=" << s.dimension() << ", K=" << s.curvature() << ")";
        return out.str();
      });

  // (value, first derivative, second derivative)
  m.def("warping", [](const SpaceForm& s, double r) { return scalar_tuple(warping(s, r)); });
  m.def("potential", [](const SpaceForm& s, double r) { return scalar_tuple(potential(s, r)); });
  m.def("conformal_factor", [](const SpaceForm& s, double r) { return scalar_tuple(conformal_factor(s, r)); });
  m.def("sphere_area", &sphere_area);

  m.def("sigma_k", [](const std::vector<double>& lambda, int k) { return sigma_k(Spectrum(lambda), k); },
        py::arg("spectrum"), py::arg("k"));
  m.def(
      "sigma_k_matrix",
      [](const std::vector<std::vector<double>>& a, int k, const std::string& route) {
        if (route != "jacobi" && route != "newton") throw std::invalid_argument("route is jacobi or newton");
        return sigma_k_matrix(to_matrix(a), k, route == "newton" ? SigmaRoute::newton : SigmaRoute::jacobi);
      },
      py::arg("matrix"), py::arg("k"), py::arg("route") = "jacobi");
  m.def("sigma_k_grad", [](const std::vector<std::vector<double>>& a, int k) {
    return from_matrix(sigma_k_grad(to_matrix(a), k));
  });
  m.def("quotient_derivative", [](const std::vector<std::vector<double>>& a, int k, int l) {
    return from_matrix(quotient_derivative(to_matrix(a), k, l));
  });
  m.def("garding_cone", [](const std::vector<double>& lambda) { return garding_cone(Spectrum(lambda)).max_k; },
        "Largest k with sigma_1..sigma_k > 0.");
  m.def("rescale_to_quotient", [](const std::vector<double>& lambda, int k, int l) {
    const Spectrum s = rescale_to_quotient(Spectrum(lambda), k, l);
    return std::vector<double>(s.values().begin(), s.values().end());
  });

  py::class_<ProblemParams>(m, "ProblemParams")
      .def(py::init([](int n, double K, int k, int l, double c1, double c2) {
             ProblemParams p{SpaceForm(n, K), k, l, c1, c2};
             p.validate();
             return p;
           }),
           py::arg("n") = 3, py::arg("K") = 0.0, py::arg("k") = 2, py::arg("l") = 0, py::arg("c1") = 0.0,
           py::arg("c2") = 1.0)
      .def_property_readonly("n", &ProblemParams::n)
      .def_property_readonly("K", &ProblemParams::curvature)
      .def_readonly("k", &ProblemParams::k)
      .def_readonly("l", &ProblemParams::l)
      .def_readonly("c1", &ProblemParams::c1)
      .def_readonly("c2", &ProblemParams::c2)
      .def_property_readonly("p_boundary_value", &ProblemParams::p_boundary_value);

  py::class_<RadialSolution>(m, "RadialSolution")
      .def_property_readonly("params", &RadialSolution::params)
      .def_property_readonly("radius", &RadialSolution::radius)
      .def_property_readonly("origin", [](const RadialSolution& s) { return to_string(s.origin()); })
      .def("evaluate",
           [](const RadialSolution& s, double r) {
             const RadialJet j = s.evaluate(r);
             return py::make_tuple(j.u, j.du, j.d2u, j.d3u);
           })
      .def("b_eigenvalues",
           [](const RadialSolution& s, double r) {
             const BTensorSample b = b_tensor(s, r);
             return py::make_tuple(b.lambda_radial, b.lambda_tangential);
           })
      .def("pde_residual", [](const RadialSolution& s, double r) { return pde_residual(s, r); })
      .def("max_pde_residual", [](const RadialSolution& s, int samples) { return max_pde_residual(s, samples); },
           py::arg("samples") = 200)
      .def("P", [](const RadialSolution& s, double r) { return p_function(s, r); })
      .def("P_tilde", [](const RadialSolution& s, double r) { return p_tilde_function(s, r); })
      .def("w", [](const RadialSolution& s, double r) { return w_function(s, r); })
      .def("sign_condition_holds", &RadialSolution::sign_condition_holds)
      .def("to_csv",
           [](const RadialSolution& s, int samples) {
             std::ostringstream out;
             write_solution_csv(out, s, samples);
             return out.str();
           },
           py::arg("samples") = 200);

  m.def("explicit_solution", &explicit_solution);
  m.def("perturbed", &perturbed, py::arg("solution"), py::arg("eps"));
  m.def("shot_solution", &shot_solution, py::arg("params"), py::arg("step") = 1e-3);
  m.def(
      "shoot_radius",
      [](const ProblemParams& p, double step) {
        const ShootResult r = shoot_radius(p, step);
        return py::make_tuple(r.radius, r.v0);
      },
      py::arg("params"), py::arg("step") = 1e-3, "Returns (R, v0).");
  m.def("reference_matrix", &reference_matrix, py::arg("l_zero_only") = false);

  py::class_<IdentityReport>(m, "IdentityReport")
      .def_property_readonly("identity", [](const IdentityReport& r) { return to_string(r.id); })
      .def_readonly("lhs", &IdentityReport::lhs)
      .def_readonly("rhs", &IdentityReport::rhs)
      .def_readonly("abs_residual", &IdentityReport::abs_residual)
      .def_readonly("rel_residual", &IdentityReport::rel_residual)
      .def_readonly("panels", &IdentityReport::panels)
      .def_readonly("converged", &IdentityReport::converged)
      .def_readonly("permissive", &IdentityReport::permissive)
      .def_readonly("rel_history", &IdentityReport::rel_history);

  m.def(
      "verify_identity",
      [](const RadialSolution& s, const std::string& id, int panels, int nodes, int refinements,
         bool permissive) {
        return verify_identity(s, identity_from(id), grid_options(panels, nodes, refinements),
                               permissive ? VerifyMode::permissive : VerifyMode::strict);
      },
      py::arg("solution"), py::arg("identity"), py::arg("panels") = 64, py::arg("nodes_per_panel") = 8,
      py::arg("max_refinements") = 4, py::arg("permissive") = false);
  m.def(
      "negative_control",
      [](const RadialSolution& s, double eps, const std::string& id) {
        return negative_control(s, eps, identity_from(id));
      },
      py::arg("solution"), py::arg("eps"), py::arg("identity"));

  m.def(
      "run_property_suite",
      [](int trials, std::uint64_t seed, int nmax) {
        PropertySuiteOptions o;
        o.trials = trials;
        o.seed = seed;
        o.max_dimension = nmax;
        py::list out;
        for (const auto& r : run_property_suite(o).results) {
          py::dict d;
          d["name"] = r.name;
          d["trials"] = r.trials;
          d["worst"] = r.worst;
          d["threshold"] = r.threshold;
          d["passed"] = r.passed;
          out.append(d);
        }
        return out;
      },
      py::arg("trials") = 1000, py::arg("seed") = 42, py::arg("nmax") = 8);
}
