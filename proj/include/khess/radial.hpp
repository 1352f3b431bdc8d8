#pragma once

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "khess/elemsym.hpp"
#include "khess/geometry.hpp"
#include "khess/radial_frame.hpp"

namespace khess {

/// Raised for problem parameters that admit no radial solution, with a
/// diagnostic naming the violated condition.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the shooting iteration cannot bracket or reach the boundary data.
class ShootingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// sigma_k(b)/sigma_l(b) = C(n,k)/C(n,l) with u = K c1 and u_nu = c2 on the
/// boundary, b = Hess u + K u g.
struct ProblemParams {
  SpaceForm space{3, 0.0};
  int k = 1;
  int l = 0;
  double c1 = 0.0;
  double c2 = 1.0;

  int n() const noexcept { return space.dimension(); }
  double curvature() const noexcept { return space.curvature(); }

  /// Checks 0 <= l < k <= n, finite c1, c2 > 0.
  void validate() const;

  /// Dirichlet value K c1.
  double boundary_value() const noexcept { return curvature() * c1; }
  /// K^3 c1^2 + c2^2 - 2 K c1, the value P takes on the boundary.
  double p_boundary_value() const noexcept;
  /// C(n,k)/C(n,l).
  double quotient_target() const;
};

/// u and its first three radial derivatives.
struct RadialJet {
  double u = 0.0;
  double du = 0.0;
  double d2u = 0.0;
  double d3u = 0.0;
};

/// A radial function on the geodesic ball of radius R together with the
/// problem data it is meant to solve. Immutable.
class RadialSolution {
 public:
  enum class Origin { closed_form, perturbed, shooting, custom };
  using Profile = std::function<RadialJet(double)>;

  /// Requires 0 < R inside the admissible range of params.space.
  RadialSolution(ProblemParams params, double radius, Profile profile, Origin origin);

  const ProblemParams& params() const noexcept { return params_; }
  const SpaceForm& space() const noexcept { return params_.space; }
  double radius() const noexcept { return radius_; }
  Origin origin() const noexcept { return origin_; }

  /// Requires 0 <= r <= R.
  RadialJet evaluate(double r) const;

  /// min over `samples` equispaced radii of K u(r).
  double min_sign_product(int samples = 1000) const;
  /// K u >= -1e-12 on the 1000-point grid.
  bool sign_condition_holds() const { return min_sign_product() >= -1e-12; }

 private:
  ProblemParams params_;
  double radius_;
  Profile profile_;
  Origin origin_;
};

const char* to_string(RadialSolution::Origin origin);

/// Ball radius of the closed-form solution: c2 for K = 0,
/// arctan(c2 sqrt K / (1 - K^2 c1)) / sqrt K for K > 0,
/// artanh(c2 sqrt(-K) / (1 - K^2 c1)) / sqrt(-K) for K < 0.
/// Throws ParameterError outside the admissible region (see explicit_solution).
double explicit_radius(const ProblemParams& params);

/// The closed-form radial solution. Parameter errors:
///  - K > 0: need 1 - K^2 c1 > 0 and c1 > 0 (K u >= 0 forces u = K c1 > 0 on the boundary);
///  - K < 0: need c1 >= 0 and 0 < c2 sqrt(-K) / (1 - K^2 c1) < 1.
/// The full sign condition K u >= 0 is not enforced here; query
/// RadialSolution::sign_condition_holds().
RadialSolution explicit_solution(const ProblemParams& params);

/// u + eps r^2 (R - r)^2: same u(R), u'(R), u'(0), but no longer a solution.
RadialSolution perturbed(const RadialSolution& base, double eps);

/// RK4 samples of v'' + K v = 1, v(0) = v0, v'(0) = 0 on an equispaced grid.
struct OdeProfile {
  double curvature = 0.0;
  double step = 0.0;
  std::vector<double> r;
  std::vector<double> v;
  std::vector<double> dv;

  /// Cubic Hermite interpolation of v and v'; v'' and v''' from the ODE.
  RadialJet at(double radius) const;
};

/// Integrates to r_max with the largest step <= `step` that divides r_max.
OdeProfile ode_solve(const SpaceForm& space, double v0, double r_max, double step);

struct ShootResult {
  double radius = 0.0;
  double v0 = 0.0;
  int iterations = 0;
};

/// Finds v0 and R with v(R) = K c1 and v'(R) = c2 (first crossing) by RK4
/// shooting and bisection on v0.
ShootResult shoot_radius(const ProblemParams& params, double step = 1e-3);

/// Solution built from the shot profile with grid + Hermite interpolation.
RadialSolution shot_solution(const ProblemParams& params, double step = 1e-3);

struct BTensorSample {
  double r = 0.0;
  double lambda_radial = 0.0;      ///< u'' + K u
  double lambda_tangential = 0.0;  ///< u' f'/f + K u, multiplicity n - 1
};

BTensorSample b_tensor(const RadialSolution& sol, double r);

RadialFrame b_frame(const RadialSolution& sol, double r);

/// sigma_k(b)/sigma_l(b) - C(n,k)/C(n,l). Throws DomainError if sigma_l(b) = 0.
double pde_residual(const RadialSolution& sol, double r);

/// max |pde_residual| over `samples` equispaced radii in [0, R].
double max_pde_residual(const RadialSolution& sol, int samples = 200);

/// P = |grad u|^2 + K u^2 - 2u.
double p_function(const RadialSolution& sol, double r);

/// P~ = -<grad u, grad Phi> + u V + Phi.
double p_tilde_function(const RadialSolution& sol, double r);

/// w = (u - K c1)/V. Throws DomainError if V <= 0.
double w_function(const RadialSolution& sol, double r);

/// Radial form of Delta w + (2/V)<grad V, grad w> - n (1 - K^2 c1)/V.
double w_operator_residual(const RadialSolution& sol, double r);

/// Everything a radial integrand may need at one radius.
struct RadialPoint {
  double r = 0.0;
  RadialJet jet;
  double f = 0.0;
  double v = 0.0;
  double phi = 0.0;
  RadialFrame b;
};

RadialPoint sample_point(const RadialSolution& sol, double r);

/// Half the reduced value of F^{ij} nabla^2_ij P on a spectrum b with
/// F = sigma_k/sigma_l and K u = ku:
///   F(-(k+1) s_{k+1}/s_k + (l+1) s_{l+1}/s_l - (k-l))
///   + ku F(-(k-l) + (n-k+1) s_{k-1}/s_k - (n-l+1) s_{l-1}/s_l).
double p_operator_reduced(const Spectrum& b, int k, int l, double ku);

/// Reduced F^{ij} nabla^2_ij P~:
///   V F((n-k+1) s_{k-1}/s_k - (n-l+1) s_{l-1}/s_l - (k-l)).
double p_tilde_operator_reduced(const Spectrum& b, int k, int l, double v);

/// The reference grid of admissible problems: n in {2, 3, 4, 6};
/// (k, l) in {(1,0), (2,0), (2,1), (n,0), (3,1)} where valid; K = 0 with
/// c2 in {0.5, 1.5}, K = 1 with (c1, c2) in {(0.5,0.5), (0.5,0.8), (0.9,0.4)},
/// K = -1 with (c1, c2) in {(0,0.5), (0.5,0.3), (0,0.9)}. Duplicated (k, l)
/// pairs (k = n = 2) appear once. With `l_zero_only`, only l = 0 entries.
std::vector<ProblemParams> reference_matrix(bool l_zero_only = false);

/// CSV with '#'-prefixed metadata lines, a header row and `samples` rows of
///   r,u,du,d2u,lambda_rad,lambda_tan,P,P_tilde,w
/// at 17 significant digits.
void write_solution_csv(std::ostream& out, const RadialSolution& sol, int samples = 200);

}  // namespace khess
