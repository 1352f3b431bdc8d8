#include "khess/pohozaev.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "khess/format.hpp"

namespace khess {

namespace {

double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// sigma_k^{ij} u_ij in the polar frame; the tangential Hessian eigenvalue is
// lambda_tan - K u, which carries the pole limit.
double contracted_hessian(const RadialPoint& p, int k, double curvature) {
  const double tangential_hessian = p.b.tangential - curvature * p.jet.u;
  return p.b.grad_radial(k) * p.jet.d2u + (p.b.n - 1) * p.b.grad_tangential(k) * tangential_hessian;
}

// sigma_k^{ij} u_{ilj} Phi_l = f (d sigma_k(b)/dr - K sigma_k^{rr} u'), using
// u_{irj} = b_{ijr} - K u_j delta_ir and lambda_tan' = (V/f)(lambda_rad - lambda_tan).
double third_derivative_term(const RadialPoint& p, int k, double curvature) {
  const double d_radial = p.jet.d3u + curvature * p.jet.du;
  const double d_tangential = (p.v / p.f) * (p.b.radial - p.b.tangential);
  const double d_sigma =
      p.b.grad_radial(k) * d_radial + (p.b.n - 1) * p.b.grad_tangential(k) * d_tangential;
  return p.f * (d_sigma - curvature * p.b.grad_radial(k) * p.jet.du);
}

// omega f(R)^{n-1} sigma_k^{rr}(R) f(R): the common factor of all surface terms.
double surface_factor(const RadialSolution& sol) {
  const int n = sol.params().n();
  const RadialPoint p = sample_point(sol, sol.radius());
  return unit_sphere_area(n) * std::pow(p.f, n - 1) * p.b.grad_radial(sol.params().k) * p.f;
}

struct Sides {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
};

// Accumulates omega_{n-1} int h f^{n-1} dr for several integrands at once.
template <std::size_t N, typename Fn>
std::array<double, N> integrate_many(const RadialSolution& sol, const QuadratureGrid& grid, Fn fn) {
  std::array<double, N> sums{};
  const int n = sol.params().n();
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const RadialPoint p = sample_point(sol, grid.nodes[i]);
    const double measure = grid.weights[i] * std::pow(p.f, n - 1);
    const std::array<double, N> values = fn(p);
    for (std::size_t j = 0; j < N; ++j) sums[j] += measure * values[j];
  }
  const double omega = unit_sphere_area(n);
  for (double& s : sums) s *= omega;
  return sums;
}

Sides evaluate_sides(const RadialSolution& sol, IdentityId id, const QuadratureGrid& grid) {
  const ProblemParams& prm = sol.params();
  const int n = prm.n();
  const int k = prm.k;
  const double kk = prm.curvature();
  const double c1 = prm.c1;
  const double c2 = prm.c2;
  const double kc = k * binomial(n, k);
  const double m = n - k + 1;
  Sides s;

  switch (id) {
    case IdentityId::L6_1: {
      const auto [uv, su2v, sdu2v] = integrate_many<3>(sol, grid, [&](const RadialPoint& p) {
        const double sk1 = p.b.sigma(k - 1);
        return std::array<double, 3>{p.jet.u * p.v, sk1 * p.jet.u * p.jet.u * p.v,
                                     sk1 * p.jet.du * p.jet.du * p.v};
      });
      const double t1 = boundary_reduce(sol, BoundaryTerm::sigma_phi_nu);
      const double t2 = boundary_reduce(sol, BoundaryTerm::sigma_hessian_phi_nu);
      s.lhs = kc * uv;
      s.rhs = c1 * kk * t2 + 0.5 * c1 * c1 * kk * kk * kk * t1 + 0.5 * m * kk * su2v -
              0.5 * c2 * c2 * t1 + 0.5 * m * sdu2v;
      break;
    }
    case IdentityId::L6_2_i: {
      const auto [sv] = integrate_many<1>(
          sol, grid, [&](const RadialPoint& p) { return std::array<double, 1>{p.b.sigma(k - 1) * p.v}; });
      s.lhs = boundary_reduce(sol, BoundaryTerm::sigma_phi_nu);
      s.rhs = m * sv;
      break;
    }
    case IdentityId::L6_2_ii: {
      const auto [integral] = integrate_many<1>(sol, grid, [&](const RadialPoint& p) {
        return std::array<double, 1>{(kc - kk * kk * c1 * m * p.b.sigma(k - 1)) * p.v};
      });
      s.lhs = boundary_reduce(sol, BoundaryTerm::sigma_hessian_phi_nu);
      s.rhs = integral;
      break;
    }
    case IdentityId::L6_3: {
      const double boundary = prm.boundary_value();
      const auto [left, right] = integrate_many<2>(sol, grid, [&](const RadialPoint& p) {
        const double u = p.jet.u;
        const double bracket = p.jet.du * p.jet.du + kk * u * u - kk * kk * kk * c1 * c1 - c2 * c2;
        return std::array<double, 2>{(u - boundary) * p.v, bracket * p.b.sigma(k - 1) * p.v};
      });
      s.lhs = binomial(n, k - 1) * left;
      s.rhs = 0.5 * right;
      break;
    }
    case IdentityId::EqI_pointwise: {
      double scale = 0.0;
      for (double r : grid.nodes) {
        const RadialPoint p = sample_point(sol, r);
        const double u = p.jet.u;
        const double lhs = kc * u * p.v;
        const double rhs = contracted_hessian(p, k, kk) * u * p.v + m * kk * p.b.sigma(k - 1) * u * u * p.v;
        scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
        if (std::abs(lhs - rhs) >= s.abs_residual) {
          s.abs_residual = std::abs(lhs - rhs);
          s.lhs = lhs;
          s.rhs = rhs;
        }
      }
      s.rel_residual = s.abs_residual / std::max(scale, 1e-300);
      return s;
    }
  }
  s.abs_residual = std::abs(s.lhs - s.rhs);
  s.rel_residual = relative_gap(s.lhs, s.rhs);
  return s;
}

void require_solution(const RadialSolution& sol) {
  const ProblemParams& p = sol.params();
  if (p.l != 0) {
    throw PreconditionError("not a solution of the k-Hessian problem: the integral identities need l = 0, got l = " +
                            std::to_string(p.l));
  }
  const double residual = max_pde_residual(sol);
  if (!(residual < 1e-8)) {
    throw PreconditionError("not a solution: max |sigma_k(b) - C(n,k)| = " + format_number(residual) +
                            " exceeds 1e-8");
  }
}

void validate_options(const GridOptions& o) {
  if (o.panels < 1 || o.nodes_per_panel < 1 || o.max_refinements < 0 || !(o.tolerance > 0.0)) {
    throw std::invalid_argument("invalid quadrature options");
  }
}

}  // namespace

// --- quadrature -------------------------------------------------------------

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  nodes.assign(static_cast<std::size_t>(order), 0.0);
  weights.assign(static_cast<std::size_t>(order), 0.0);
  const int half = (order + 1) / 2;
  for (int i = 1; i <= half; ++i) {
    double z = std::cos(std::numbers::pi * (i - 0.25) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = order * (z * p1 - p2) / (z * z - 1.0);
      const double z_prev = z;
      z = z_prev - p1 / dp;
      if (std::abs(z - z_prev) <= 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p1 = 1.0;
    double p2 = 0.0;
    for (int j = 1; j <= order; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    dp = order * (z * p1 - p2) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    nodes[static_cast<std::size_t>(i - 1)] = -z;
    nodes[static_cast<std::size_t>(order - i)] = z;
    weights[static_cast<std::size_t>(i - 1)] = w;
    weights[static_cast<std::size_t>(order - i)] = w;
  }
}

QuadratureGrid QuadratureGrid::build(double radius, int panels, int nodes_per_panel,
                                     int refinement_level) {
  if (!(radius > 0.0) || panels < 1 || nodes_per_panel < 1) {
    throw std::invalid_argument("quadrature grid needs radius > 0, panels >= 1, nodes >= 1");
  }
  QuadratureGrid g;
  g.panels = panels;
  g.nodes_per_panel = nodes_per_panel;
  g.refinement_level = refinement_level;
  g.radius = radius;
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(nodes_per_panel, x, w);
  const double width = radius / panels;
  g.nodes.reserve(static_cast<std::size_t>(panels * nodes_per_panel));
  g.weights.reserve(g.nodes.capacity());
  for (int p = 0; p < panels; ++p) {
    const double a = width * p;
    for (std::size_t i = 0; i < x.size(); ++i) {
      g.nodes.push_back(a + 0.5 * width * (x[i] + 1.0));
      g.weights.push_back(0.5 * width * w[i]);
    }
  }
  return g;
}

QuadratureGrid QuadratureGrid::refined() const {
  return build(radius, 2 * panels, nodes_per_panel, refinement_level + 1);
}

double bulk_integral(const RadialSolution& sol, const RadialIntegrand& integrand,
                     const QuadratureGrid& grid) {
  return integrate_many<1>(sol, grid, [&](const RadialPoint& p) {
    return std::array<double, 1>{integrand(p)};
  })[0];
}

BulkResult bulk_integral_refined(const RadialSolution& sol, const RadialIntegrand& integrand,
                                 const GridOptions& options) {
  validate_options(options);
  BulkResult out;
  QuadratureGrid grid = QuadratureGrid::build(sol.radius(), options.panels, options.nodes_per_panel);
  out.history.push_back(bulk_integral(sol, integrand, grid));
  for (int level = 1; level <= options.max_refinements; ++level) {
    grid = grid.refined();
    out.history.push_back(bulk_integral(sol, integrand, grid));
    const double prev = out.history[out.history.size() - 2];
    const double curr = out.history.back();
    if (std::abs(curr - prev) <= options.tolerance * std::max(std::abs(curr), 1e-300) ||
        curr == prev) {
      out.converged = true;
      break;
    }
  }
  out.value = out.history.back();
  out.panels = grid.panels;
  out.refinement_level = grid.refinement_level;
  return out;
}

double boundary_reduce(const RadialSolution& sol, BoundaryTerm term) {
  const double factor = surface_factor(sol);
  const RadialJet j = sol.evaluate(sol.radius());
  switch (term) {
    case BoundaryTerm::sigma_phi_nu: return factor;
    case BoundaryTerm::sigma_hessian_phi_nu: return factor * j.d2u;
    case BoundaryTerm::sigma_gradsq_phi_nu: return factor * j.du * j.du;
  }
  throw std::invalid_argument("unknown boundary term");
}

// --- identities -------------------------------------------------------------

const char* to_string(IdentityId id) {
  switch (id) {
    case IdentityId::L6_1: return "L6_1";
    case IdentityId::L6_2_i: return "L6_2_i";
    case IdentityId::L6_2_ii: return "L6_2_ii";
    case IdentityId::L6_3: return "L6_3";
    case IdentityId::EqI_pointwise: return "EqI_pointwise";
  }
  return "unknown";
}

std::optional<IdentityId> parse_identity(const std::string& text) {
  for (IdentityId id : {IdentityId::L6_1, IdentityId::L6_2_i, IdentityId::L6_2_ii, IdentityId::L6_3,
                        IdentityId::EqI_pointwise}) {
    if (text == to_string(id)) return id;
  }
  return std::nullopt;
}

bool requires_solution(IdentityId id) { return id != IdentityId::L6_2_i; }

IdentityReport verify_identity(const RadialSolution& sol, IdentityId id, const GridOptions& options,
                               VerifyMode mode) {
  validate_options(options);
  if (mode == VerifyMode::strict) require_solution(sol);

  const ProblemParams& p = sol.params();
  IdentityReport report;
  report.id = id;
  report.n = p.n();
  report.k = p.k;
  report.curvature = p.curvature();
  report.c1 = p.c1;
  report.c2 = p.c2;
  report.permissive = mode == VerifyMode::permissive;
  report.nodes_per_panel = options.nodes_per_panel;

  QuadratureGrid grid = QuadratureGrid::build(sol.radius(), options.panels, options.nodes_per_panel);
  Sides previous = evaluate_sides(sol, id, grid);
  report.rel_history.push_back(previous.rel_residual);
  if (id == IdentityId::EqI_pointwise) {
    report.lhs = previous.lhs;
    report.rhs = previous.rhs;
    report.abs_residual = previous.abs_residual;
    report.rel_residual = previous.rel_residual;
    report.panels = grid.panels;
    report.converged = true;
    return report;
  }
  Sides current = previous;
  bool stable = false;
  for (int level = 1; level <= options.max_refinements; ++level) {
    grid = grid.refined();
    current = evaluate_sides(sol, id, grid);
    report.rel_history.push_back(current.rel_residual);
    const double tol = options.tolerance;
    stable = std::abs(current.lhs - previous.lhs) <= tol * std::max(std::abs(current.lhs), 1e-300) &&
             std::abs(current.rhs - previous.rhs) <= tol * std::max(std::abs(current.rhs), 1e-300);
    if (stable) break;
    previous = current;
  }

  report.lhs = current.lhs;
  report.rhs = current.rhs;
  report.abs_residual = current.abs_residual;
  report.rel_residual = current.rel_residual;
  report.panels = grid.panels;
  report.refinement_level = grid.refinement_level;
  if (stable && report.rel_history.size() >= 2) {
    const double last = report.rel_history.back();
    const double change = std::abs(last - report.rel_history[report.rel_history.size() - 2]);
    report.converged = change < 0.1 * last || change < 1e-12;
  }
  return report;
}

DivergenceStepReport verify_divergence_steps(const RadialSolution& sol, double r,
                                             const GridOptions& options) {
  const ProblemParams& prm = sol.params();
  const int n = prm.n();
  const int k = prm.k;
  const double kk = prm.curvature();
  const double m = n - k + 1;

  DivergenceStepReport out;
  out.r = r;
  {
    const RadialPoint p = sample_point(sol, r);
    const double u = p.jet.u;
    const double lhs = k * binomial(n, k) * u * p.v;
    const double rhs = contracted_hessian(p, k, kk) * u * p.v + m * kk * p.b.sigma(k - 1) * u * u * p.v;
    out.eq_i_residual = std::abs(lhs - rhs);
  }

  const double factor = surface_factor(sol);
  const RadialJet edge = sol.evaluate(sol.radius());
  using Terms = std::array<double, 3>;
  auto integrated = [&](std::function<Terms(const RadialPoint&)> terms, double boundary) {
    IntegratedStep step;
    const BulkResult bulk = bulk_integral_refined(
        sol, [&](const RadialPoint& p) { const Terms t = terms(p); return t[0] + t[1] + t[2]; },
        options);
    const QuadratureGrid grid = QuadratureGrid::build(sol.radius(), bulk.panels, options.nodes_per_panel);
    step.bulk = bulk.value;
    step.boundary = boundary;
    step.scale = bulk_integral(
        sol,
        [&](const RadialPoint& p) {
          const Terms t = terms(p);
          return std::abs(t[0]) + std::abs(t[1]) + std::abs(t[2]);
        },
        grid);
    const double denom = std::max({step.scale, std::abs(boundary), 1e-300});
    step.rel_residual = std::abs(step.bulk - boundary) / denom;
    return step;
  };

  // sigma^{ij} u_il u_j Phi_l = sigma^{rr} u'' u' f in the polar frame.
  auto gradient_term = [k](const RadialPoint& p) {
    return p.b.grad_radial(k) * p.jet.d2u * p.jet.du * p.f;
  };

  out.eq_i1 = integrated(
      [&](const RadialPoint& p) {
        return Terms{contracted_hessian(p, k, kk) * p.jet.u * p.v,
                     third_derivative_term(p, k, kk) * p.jet.u, gradient_term(p)};
      },
      factor * edge.d2u * edge.u);
  out.eq_i11 = integrated(
      [&](const RadialPoint& p) {
        return Terms{third_derivative_term(p, k, kk) * p.jet.u,
                     -0.5 * m * kk * p.b.sigma(k - 1) * p.jet.u * p.jet.u * p.v, 0.0};
      },
      -0.5 * kk * factor * edge.u * edge.u);
  out.eq_i12 = integrated(
      [&](const RadialPoint& p) {
        return Terms{gradient_term(p), 0.5 * m * p.b.sigma(k - 1) * p.jet.du * p.jet.du * p.v, 0.0};
      },
      0.5 * factor * edge.du * edge.du);
  return out;
}

IdentityReport negative_control(const RadialSolution& sol, double eps, IdentityId id,
                                const GridOptions& options) {
  const RadialSolution target = (eps == 0.0) ? sol : perturbed(sol, eps);
  IdentityReport report = verify_identity(target, id, options, VerifyMode::permissive);
  report.perturbation = eps;
  return report;
}

LinearityProbe linearity_probe(const RadialSolution& sol, IdentityId id,
                               const std::vector<double>& epsilons, const GridOptions& options) {
  LinearityProbe probe;
  probe.epsilons = epsilons;
  std::sort(probe.epsilons.begin(), probe.epsilons.end());
  for (double eps : probe.epsilons) probe.residuals.push_back(negative_control(sol, eps, id, options).rel_residual);
  for (std::size_t i = 1; i < probe.residuals.size(); ++i) {
    probe.ratios.push_back(probe.residuals[i] / probe.residuals[i - 1]);
  }
  return probe;
}

// --- output -----------------------------------------------------------------

void write_report_csv_header(std::ostream& out) {
  out << "identity_id,n,k,K,c1,c2,lhs,rhs,abs_residual,rel_residual,panels,converged\n";
}

void write_report_csv_row(std::ostream& out, const IdentityReport& r) {
  out << to_string(r.id) << ',' << r.n << ',' << r.k << ',' << format_number(r.curvature) << ','
      << format_number(r.c1) << ',' << format_number(r.c2) << ',' << format_number(r.lhs) << ','
      << format_number(r.rhs) << ',' << format_number(r.abs_residual) << ','
      << format_number(r.rel_residual) << ',' << r.panels << ',' << (r.converged ? "true" : "false")
      << '\n';
}

void write_report_text(std::ostream& out, const std::vector<IdentityReport>& reports) {
  auto num = [](double v) { return format_number(v, 6); };
  out << std::left << std::setw(15) << "identity" << std::setw(4) << "n" << std::setw(4) << "k"
      << std::setw(8) << "K" << std::setw(8) << "c1" << std::setw(8) << "c2" << std::setw(14)
      << "lhs" << std::setw(14) << "rhs" << std::setw(14) << "rel_residual" << std::setw(8)
      << "panels" << "status\n";
  for (const auto& r : reports) {
    out << std::left << std::setw(15) << to_string(r.id) << std::setw(4) << r.n << std::setw(4)
        << r.k << std::setw(8) << num(r.curvature) << std::setw(8) << num(r.c1) << std::setw(8)
        << num(r.c2) << std::setw(14) << num(r.lhs) << std::setw(14) << num(r.rhs) << std::setw(14)
        << num(r.rel_residual) << std::setw(8) << r.panels
        << (r.converged ? "converged" : "UNCONVERGED");
    if (r.permissive) out << " (permissive, eps=" << num(r.perturbation) << ")";
    out << '\n';
  }
}

}  // namespace khess
