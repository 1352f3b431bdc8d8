#include "khess/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace khess {

namespace {

bool near_flat(double curvature) { return std::abs(curvature) < kFlatCurvatureThreshold; }

// Series in x = -K r^2 truncated after the x^4 term:
//   f/r      = sum x^j / (2j+1)!
//   V        = sum x^j / (2j)!
//   (Phi + 1/K) / r^2 = sum x^j / (2j+2)!
double series(double x, const double (&inverse_factorials)[5]) {
  double sum = 0.0;
  for (int j = 4; j >= 0; --j) sum = sum * x + inverse_factorials[j];
  return sum;
}

constexpr double kSinSeries[5] = {1.0, 1.0 / 6.0, 1.0 / 120.0, 1.0 / 5040.0, 1.0 / 362880.0};
constexpr double kCosSeries[5] = {1.0, 1.0 / 2.0, 1.0 / 24.0, 1.0 / 720.0, 1.0 / 40320.0};
constexpr double kPotentialSeries[5] = {1.0 / 2.0, 1.0 / 24.0, 1.0 / 720.0, 1.0 / 40320.0,
                                        1.0 / 3628800.0};

struct Trig {
  double f;
  double v;
};

Trig warping_pair(double curvature, double r) {
  if (curvature == 0.0) return {r, 1.0};
  if (near_flat(curvature)) {
    // Alternating signs come from x = -K r^2.
    const double x = -curvature * r * r;
    return {r * series(x, kSinSeries), series(x, kCosSeries)};
  }
  if (curvature > 0.0) {
    const double s = std::sqrt(curvature);
    return {std::sin(s * r) / s, std::cos(s * r)};
  }
  const double s = std::sqrt(-curvature);
  return {std::sinh(s * r) / s, std::cosh(s * r)};
}

}  // namespace

SpaceForm::SpaceForm(int dimension, double curvature)
    : dimension_(dimension), curvature_(curvature) {
  if (dimension < 2) {
    throw std::invalid_argument("space form dimension must be at least 2, got " +
                                std::to_string(dimension));
  }
  if (!std::isfinite(curvature)) throw std::invalid_argument("space form curvature must be finite");
}

double SpaceForm::max_radius() const noexcept {
  if (curvature_ > 0.0) return std::numbers::pi / (2.0 * std::sqrt(curvature_));
  return std::numeric_limits<double>::infinity();
}

bool SpaceForm::admissible(double r) const noexcept {
  return std::isfinite(r) && r >= 0.0 && r < max_radius();
}

void SpaceForm::require_admissible(double r) const {
  if (admissible(r)) return;
  std::ostringstream msg;
  msg.precision(17);
  msg << "radius " << r << " outside admissible range [0, " << max_radius()
      << ") for K = " << curvature_;
  throw DomainError(msg.str());
}

RadialScalar warping(const SpaceForm& space, double r) {
  space.require_admissible(r);
  const auto [f, v] = warping_pair(space.curvature(), r);
  return {f, v, -space.curvature() * f};
}

RadialScalar conformal_factor(const SpaceForm& space, double r) {
  space.require_admissible(r);
  const double k = space.curvature();
  const auto [f, v] = warping_pair(k, r);
  return {v, -k * f, -k * v};
}

RadialScalar potential(const SpaceForm& space, double r) {
  space.require_admissible(r);
  const double k = space.curvature();
  const auto [f, v] = warping_pair(k, r);
  double phi = 0.0;
  if (k == 0.0) {
    phi = 0.5 * r * r;
  } else if (near_flat(k)) {
    phi = -1.0 / k + r * r * series(-k * r * r, kPotentialSeries);
  } else if (k > 0.0) {
    phi = -std::cos(std::sqrt(k) * r) / k;
  } else {
    phi = std::cosh(std::sqrt(-k) * r) / -k;
  }
  return {phi, f, v};
}

HessianEigenvalues radial_hessian_eigenvalues(const SpaceForm& space, const RadialScalar& h,
                                              double r) {
  space.require_admissible(r);
  if (r == 0.0) {
    if (std::abs(h.first_derivative) > 1e-12 * (1.0 + std::abs(h.second_derivative))) {
      throw DomainError("radial Hessian at the pole requires h'(0) = 0");
    }
    return {h.second_derivative, h.second_derivative};
  }
  const auto [f, v] = warping_pair(space.curvature(), r);
  return {h.second_derivative, h.first_derivative * v / f};
}

double unit_sphere_area(int n) {
  if (n < 1) throw std::invalid_argument("unit_sphere_area needs n >= 1");
  // Gamma(n/2): factorial for even n, (2m)! sqrt(pi) / (4^m m!) for n = 2m + 1.
  double gamma_half_n = 1.0;
  if (n % 2 == 0) {
    for (int j = 2; j < n / 2; ++j) gamma_half_n *= j;
  } else {
    gamma_half_n = std::sqrt(std::numbers::pi);
    for (int j = 1; j <= (n - 1) / 2; ++j) gamma_half_n *= (j - 0.5);
  }
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / gamma_half_n;
}

double sphere_area(const SpaceForm& space, double r) {
  const double f = warping(space, r).value;
  return unit_sphere_area(space.dimension()) * std::pow(f, space.dimension() - 1);
}

}  // namespace khess
