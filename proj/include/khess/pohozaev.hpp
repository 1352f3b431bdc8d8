#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "khess/radial.hpp"

namespace khess {

/// Composite Gauss-Legendre rule on [0, R] with equal panels.
struct QuadratureGrid {
  int panels = 0;
  int nodes_per_panel = 0;
  int refinement_level = 0;
  double radius = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  static QuadratureGrid build(double radius, int panels, int nodes_per_panel = 8,
                              int refinement_level = 0);
  /// Same rule with twice the panels.
  QuadratureGrid refined() const;
};

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

struct GridOptions {
  int panels = 64;
  int nodes_per_panel = 8;
  int max_refinements = 4;
  /// Refinement stops once successive values agree to this relative tolerance.
  double tolerance = 1e-12;
};

using RadialIntegrand = std::function<double(const RadialPoint&)>;

/// int_Omega h dmu = omega_{n-1} int_0^R h(r) f(r)^{n-1} dr on a fixed grid.
double bulk_integral(const RadialSolution& sol, const RadialIntegrand& integrand,
                     const QuadratureGrid& grid);

struct BulkResult {
  double value = 0.0;
  int panels = 0;
  int refinement_level = 0;
  bool converged = false;
  std::vector<double> history;  ///< value at each level
};

/// Doubles the panel count until successive values agree to options.tolerance.
BulkResult bulk_integral_refined(const RadialSolution& sol, const RadialIntegrand& integrand,
                                 const GridOptions& options = {});

enum class BoundaryTerm {
  sigma_phi_nu,         ///< sigma_k^{ij} Phi_i nu_j
  sigma_hessian_phi_nu, ///< sigma_k^{ij} u_il Phi_l nu_j
  sigma_gradsq_phi_nu,  ///< sigma_k^{li} |grad u|^2 Phi_l nu_i
};

/// Exact surface integral over the sphere r = R: radial symmetry reduces each
/// term to omega_{n-1} f(R)^{n-1} sigma_k^{rr}(R) f(R) times 1, u''(R) or u'(R)^2.
double boundary_reduce(const RadialSolution& sol, BoundaryTerm term);

enum class IdentityId { L6_1, L6_2_i, L6_2_ii, L6_3, EqI_pointwise };

const char* to_string(IdentityId id);
std::optional<IdentityId> parse_identity(const std::string& text);

/// Identities the CLI verifies by default.
inline const std::vector<IdentityId> kIntegralIdentities = {IdentityId::L6_1, IdentityId::L6_2_i,
                                                            IdentityId::L6_2_ii, IdentityId::L6_3};

/// Whether the identity depends on sigma_k(b) = C(n,k); L6_2_i holds for any
/// radial profile.
bool requires_solution(IdentityId id);

enum class VerifyMode {
  strict,      ///< refuse profiles that do not solve the l = 0 problem
  permissive,  ///< evaluate anyway; report is flagged
};

struct IdentityReport {
  IdentityId id = IdentityId::L6_1;
  int n = 0;
  int k = 0;
  double curvature = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  int panels = 0;
  int nodes_per_panel = 0;
  int refinement_level = 0;
  bool converged = false;
  bool permissive = false;
  double perturbation = 0.0;
  std::vector<double> rel_history;  ///< rel_residual per refinement level
};

/// LHS and RHS of the identity from independent routes: surface terms by
/// boundary_reduce, volume terms by bulk quadrature with sigma_{k-1}(b) from
/// the b-spectrum. converged: at least one refinement, values stable to
/// options.tolerance, and the last refinement changed rel_residual by less
/// than 10% (or by less than 1e-12 absolute, the round-off floor).
///
/// For EqI_pointwise the residual is the largest pointwise gap over the
/// base-grid nodes; lhs/rhs are the values at that node and rel_residual is
/// relative to the largest |lhs|, |rhs| over the nodes. No quadrature is
/// involved, so the grid is not refined and the report counts as converged.
IdentityReport verify_identity(const RadialSolution& sol, IdentityId id,
                               const GridOptions& options = {},
                               VerifyMode mode = VerifyMode::strict);

struct IntegratedStep {
  double bulk = 0.0;
  double boundary = 0.0;
  /// Integral of the summed absolute values of the bulk terms; keeps the
  /// relative residual meaningful when both sides vanish (u(R) = 0).
  double scale = 0.0;
  double rel_residual = 0.0;
};

struct DivergenceStepReport {
  double r = 0.0;
  double eq_i_residual = 0.0;  ///< pointwise, absolute
  IntegratedStep eq_i1;
  IntegratedStep eq_i11;
  IntegratedStep eq_i12;
};

/// Pointwise first expansion at radius r plus the integrated forms of the
/// three divergence steps behind the main identity.
DivergenceStepReport verify_divergence_steps(const RadialSolution& sol, double r,
                                             const GridOptions& options = {});

/// verify_identity in permissive mode on u + eps r^2 (R - r)^2. eps = 0
/// evaluates the unperturbed profile.
IdentityReport negative_control(const RadialSolution& sol, double eps, IdentityId id,
                                const GridOptions& options = {});

struct LinearityProbe {
  std::vector<double> epsilons;  ///< ascending
  std::vector<double> residuals;
  std::vector<double> ratios;  ///< residuals[i+1] / residuals[i]
};

LinearityProbe linearity_probe(const RadialSolution& sol, IdentityId id,
                               const std::vector<double>& epsilons,
                               const GridOptions& options = {});

/// identity_id,n,k,K,c1,c2,lhs,rhs,abs_residual,rel_residual,panels,converged
void write_report_csv_header(std::ostream& out);
void write_report_csv_row(std::ostream& out, const IdentityReport& report);
/// Aligned table at 6 significant digits; unconverged rows are flagged.
void write_report_text(std::ostream& out, const std::vector<IdentityReport>& reports);

}  // namespace khess
