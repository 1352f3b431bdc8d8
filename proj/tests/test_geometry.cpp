#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "khess/geometry.hpp"

using namespace khess;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
// Reference values of sinh(1), cosh(1) to 17 digits.
constexpr double kSinh1 = 1.1752011936438014;
constexpr double kCosh1 = 1.5430806348152437;
}  // namespace

TEST_CASE("warping function in the three space forms") {
  const RadialScalar flat = warping(SpaceForm(3, 0.0), 2.0);
  CHECK(flat.value == 2.0);
  CHECK(flat.first_derivative == 1.0);
  CHECK(flat.second_derivative == 0.0);

  const RadialScalar sphere = warping(SpaceForm(3, 1.0), kPi / 2 * (1 - 1e-15));
  CHECK(sphere.value == Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(sphere.first_derivative) < 1e-14);
  CHECK(sphere.second_derivative == Approx(-1.0).epsilon(1e-14));

  const RadialScalar hyper = warping(SpaceForm(3, -1.0), 1.0);
  CHECK(hyper.value == Approx(kSinh1).epsilon(1e-15));
  CHECK(hyper.first_derivative == Approx(kCosh1).epsilon(1e-15));
  CHECK(hyper.second_derivative == Approx(kSinh1).epsilon(1e-15));
}

TEST_CASE("potential and conformal factor") {
  CHECK(potential(SpaceForm(3, 0.0), 2.0).value == 2.0);
  CHECK(potential(SpaceForm(3, 1.0), 0.0).value == -1.0);
  CHECK(potential(SpaceForm(3, -1.0), 1.0).value == Approx(kCosh1).epsilon(1e-15));

  CHECK(conformal_factor(SpaceForm(4, 0.0), 3.7).value == 1.0);
  CHECK(conformal_factor(SpaceForm(3, 1.0), kPi / 3).value == Approx(0.5).epsilon(1e-15));
  CHECK(conformal_factor(SpaceForm(3, -1.0), 1.0).value == Approx(kCosh1).epsilon(1e-15));
}

TEST_CASE("hemisphere bound is excluded") {
  const SpaceForm s(3, 4.0);
  CHECK(s.max_radius() == Approx(kPi / 4).epsilon(1e-15));
  CHECK(s.admissible(0.0));
  CHECK_FALSE(s.admissible(kPi / 4));
  CHECK_FALSE(s.admissible(-0.1));
  CHECK_THROWS_AS(warping(s, kPi / 4), DomainError);
  CHECK_THROWS_AS(potential(s, 1.0), DomainError);
  CHECK(std::isinf(SpaceForm(3, -1.0).max_radius()));
  CHECK_THROWS_AS(SpaceForm(1, 0.0), std::invalid_argument);
}

TEST_CASE("radial Hessian of Phi and V") {
  const SpaceForm s(3, 1.0);
  const double r = 0.3;
  const HessianEigenvalues hp = radial_hessian_eigenvalues(s, potential(s, r), r);
  CHECK(hp.radial == Approx(std::cos(r)).epsilon(1e-12));
  CHECK(hp.tangential == Approx(std::cos(r)).epsilon(1e-12));
  const HessianEigenvalues hv = radial_hessian_eigenvalues(s, conformal_factor(s, r), r);
  CHECK(hv.radial == Approx(-std::cos(r)).epsilon(1e-12));
  CHECK(hv.tangential == Approx(-std::cos(r)).epsilon(1e-12));

  const HessianEigenvalues quad =
      radial_hessian_eigenvalues(SpaceForm(5, 0.0), RadialScalar{1.7 * 1.7 / 2, 1.7, 1.0}, 1.7);
  CHECK(quad.radial == 1.0);
  CHECK(quad.tangential == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("radial Hessian at the pole") {
  const SpaceForm s(4, -2.0);
  const HessianEigenvalues pole = radial_hessian_eigenvalues(s, potential(s, 0.0), 0.0);
  CHECK(pole.radial == 1.0);
  CHECK(pole.tangential == 1.0);
  CHECK_THROWS_AS(radial_hessian_eigenvalues(s, RadialScalar{0.0, 0.5, 1.0}, 0.0), DomainError);
}

TEST_CASE("sphere areas") {
  CHECK(sphere_area(SpaceForm(3, 0.0), 2.0) == Approx(16 * kPi).epsilon(1e-15));
  CHECK(sphere_area(SpaceForm(2, 0.0), 1.0) == Approx(2 * kPi).epsilon(1e-15));
  CHECK(sphere_area(SpaceForm(3, 1.0), kPi / 2 * (1 - 1e-12)) == Approx(4 * kPi).epsilon(1e-12));
  // omega_{n-1} = 2 pi^{n/2} / Gamma(n/2) against the library gamma function.
  for (int n = 2; n <= 16; ++n) {
    const double expected = 2.0 * std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0);
    CHECK(unit_sphere_area(n) == Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("structure equations at random radii") {
  std::mt19937_64 rng(7);
  for (double K : {-2.0, -1.0, -1e-9, 0.0, 1e-9, 0.5, 1.0, 3.0}) {
    const SpaceForm s(3, K);
    const double top = K > 0 ? s.max_radius() * 0.98 : 3.0;
    std::uniform_real_distribution<double> radius(0.05, top);
    for (int i = 0; i < 100; ++i) {
      const double r = radius(rng);
      const RadialScalar f = warping(s, r);
      const RadialScalar v = conformal_factor(s, r);
      const RadialScalar phi = potential(s, r);
      CHECK(std::abs(f.second_derivative + K * f.value) <= 1e-12 * (1 + std::abs(f.value)));
      CHECK(std::abs(phi.first_derivative - f.value) <= 1e-12 * (1 + std::abs(f.value)));
      CHECK(std::abs(v.first_derivative + K * f.value) <= 1e-12 * (1 + std::abs(f.value)));
      CHECK(v.value == Approx(f.first_derivative).epsilon(1e-15));

      // Central differences of the closed form.
      const double h = 1e-4 * std::max(1.0, r);
      const double fd2 = (warping(s, r + h).value - 2 * f.value + warping(s, r - h).value) / (h * h);
      CHECK(std::abs(fd2 + K * f.value) <= 1e-6 * std::max(1.0, std::abs(f.value)));

      const HessianEigenvalues hp = radial_hessian_eigenvalues(s, phi, r);
      CHECK(std::abs(hp.radial - v.value) < 1e-10);
      CHECK(std::abs(hp.tangential - v.value) < 1e-10);
      const HessianEigenvalues hv = radial_hessian_eigenvalues(s, v, r);
      CHECK(std::abs(hv.radial + K * v.value) < 1e-10);
      CHECK(std::abs(hv.tangential + K * v.value) < 1e-10);
    }
  }
}

TEST_CASE("near-flat curvature: series branch meets closed forms") {
  // Just outside the series window the trigonometric forms are still
  // accurate to ~1e-8 relative; both branches must agree there.
  for (double K : {1.0000001e-8, -1.0000001e-8}) {
    const SpaceForm closed(3, K);
    const SpaceForm series(3, K * 0.9999999);
    for (double r : {0.1, 1.0, 5.0}) {
      CHECK(warping(series, r).value == Approx(warping(closed, r).value).epsilon(1e-7));
      CHECK(conformal_factor(series, r).value == Approx(conformal_factor(closed, r).value).epsilon(1e-7));
    }
  }
  // f - r is about -K r^3/6; the deviation from the flat case is bounded by it.
  for (double K : {1e-8, -1e-8, 1e-12, -5e-9}) {
    const SpaceForm s(3, K);
    for (double r = 0.0; r <= 10.0; r += 0.25) {
      const RadialScalar f = warping(s, r);
      CHECK(std::abs(f.value - r) <= std::abs(K) * r * r * r / 6 + 1e-12 * (1 + r * r * r));
      CHECK(std::abs(f.value - (r - K * r * r * r / 6)) <= 1e-12 * (1 + r * r * r));
      CHECK(std::abs(potential(s, r).first_derivative - f.value) <= 1e-12 * (1 + r));
    }
  }
  CHECK(potential(SpaceForm(3, 0.0), 3.0).value == 4.5);
}
