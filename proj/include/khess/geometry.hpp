#pragma once

#include <stdexcept>
#include <string>

namespace khess {

/// Raised when a radius lies outside the admissible range of a space form,
/// or when a radial quantity is evaluated at a singular point.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A radial function and its first two derivatives with respect to arc length.
struct RadialScalar {
  double value = 0.0;
  double first_derivative = 0.0;
  double second_derivative = 0.0;
};

/// Simply connected space form M^n(K) in geodesic polar coordinates,
/// g = dr^2 + f(r)^2 g_{S^{n-1}}.
///
/// For K > 0 only the open hemisphere r < pi / (2 sqrt K) is admissible; the
/// equator itself is excluded.
class SpaceForm {
 public:
  SpaceForm(int dimension, double curvature);

  int dimension() const noexcept { return dimension_; }
  double curvature() const noexcept { return curvature_; }

  /// Supremum of admissible radii (infinity when K <= 0).
  double max_radius() const noexcept;
  bool admissible(double r) const noexcept;

  /// Throws DomainError unless admissible(r).
  void require_admissible(double r) const;

 private:
  int dimension_;
  double curvature_;
};

/// Below this |K| the closed forms are replaced by series in K r^2.
inline constexpr double kFlatCurvatureThreshold = 1e-8;

/// f, f' = V, f'' = -K f.
RadialScalar warping(const SpaceForm& space, double r);

/// Phi with Phi' = f and Phi'' = V.
RadialScalar potential(const SpaceForm& space, double r);

/// V = f', V' = -K f, V'' = -K V.
RadialScalar conformal_factor(const SpaceForm& space, double r);

struct HessianEigenvalues {
  double radial = 0.0;
  double tangential = 0.0;  // multiplicity n - 1
};

/// Eigenvalues of the Hessian of a radial function h at radius r:
/// h'' along d/dr and h' f'/f on the tangent sphere. At r = 0 both equal h''(0),
/// which requires h'(0) = 0.
HessianEigenvalues radial_hessian_eigenvalues(const SpaceForm& space, const RadialScalar& h,
                                              double r);

/// omega_{n-1} = 2 pi^{n/2} / Gamma(n/2), the area of the unit (n-1)-sphere.
double unit_sphere_area(int n);

/// Area of the geodesic sphere of radius r: omega_{n-1} f(r)^{n-1}.
double sphere_area(const SpaceForm& space, double r);

}  // namespace khess
