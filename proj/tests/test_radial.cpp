#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "khess/radial.hpp"
#include "khess/sampling.hpp"

using namespace khess;
using doctest::Approx;

namespace {

ProblemParams params(int n, double K, int k, int l, double c1, double c2) {
  return ProblemParams{SpaceForm(n, K), k, l, c1, c2};
}

// R for K = 1, c1 = 0.5, c2 = 1: arctan(1 / (1 - 0.5)) = arctan 2.
constexpr double kRadiusAtan2 = 1.1071487177940904;
// artanh(0.5).
constexpr double kRadiusAtanhHalf = 0.5493061443340549;

}  // namespace

TEST_CASE("closed-form radius and boundary data") {
  const RadialSolution flat = explicit_solution(params(3, 0.0, 2, 0, 0.0, 1.5));
  CHECK(flat.radius() == 1.5);
  CHECK(flat.evaluate(0.0).u == -1.125);
  CHECK(flat.evaluate(1.5).u == 0.0);
  CHECK(flat.evaluate(1.5).du == 1.5);

  const RadialSolution sphere = explicit_solution(params(3, 1.0, 2, 0, 0.5, 1.0));
  CHECK(sphere.radius() == Approx(kRadiusAtan2).epsilon(1e-15));
  CHECK(std::abs(sphere.evaluate(sphere.radius()).u - 0.5) < 1e-14);
  CHECK(std::abs(sphere.evaluate(sphere.radius()).du - 1.0) < 1e-14);

  const RadialSolution hyper = explicit_solution(params(3, -1.0, 2, 0, 0.0, 0.5));
  CHECK(hyper.radius() == Approx(kRadiusAtanhHalf).epsilon(1e-15));
  CHECK(std::abs(hyper.evaluate(hyper.radius()).u) < 1e-15);
  CHECK(std::abs(hyper.evaluate(hyper.radius()).du - 0.5) < 1e-14);
}

TEST_CASE("inadmissible parameters are rejected") {
  CHECK_THROWS_AS(explicit_solution(params(3, 1.0, 2, 0, 1.0, 0.5)), ParameterError);   // 1 - K^2 c1 = 0
  CHECK_THROWS_AS(explicit_solution(params(3, 1.0, 2, 0, 0.0, 0.5)), ParameterError);   // K > 0 needs c1 > 0
  CHECK_THROWS_AS(explicit_solution(params(3, -1.0, 2, 0, -1.0, 0.5)), ParameterError); // K < 0 needs c1 >= 0
  CHECK_THROWS_AS(explicit_solution(params(3, -1.0, 2, 0, 0.0, 1.0)), ParameterError);  // artanh(1)
  CHECK_THROWS_AS(explicit_solution(params(3, 0.0, 2, 0, 0.0, -1.0)), ParameterError);
  CHECK_THROWS_AS(explicit_solution(params(3, 0.0, 4, 0, 0.0, 1.0)), ParameterError);
  CHECK_THROWS_AS(explicit_solution(params(3, 0.0, 2, 2, 0.0, 1.0)), ParameterError);
}

TEST_CASE("sign condition is reported, not thrown") {
  // u(0) = 1 - sqrt 5 / 2 < 0 here.
  const RadialSolution s = explicit_solution(params(3, 1.0, 2, 0, 0.5, 1.0));
  CHECK_FALSE(s.sign_condition_holds());
  CHECK(s.min_sign_product() == Approx(1.0 - std::sqrt(5.0) / 2.0).epsilon(1e-12));
  CHECK(explicit_solution(params(3, 1.0, 2, 0, 0.5, 0.5)).sign_condition_holds());
  for (const auto& p : reference_matrix()) CHECK(explicit_solution(p).sign_condition_holds());
}

TEST_CASE("reference matrix shape") {
  const auto all = reference_matrix();
  const auto lzero = reference_matrix(true);
  // n=2: (1,0),(2,0),(2,1); n=3: 5 pairs; n=4: 5; n=6: 5. Eight data triples each.
  CHECK(all.size() == (3 + 5 + 5 + 5) * 8);
  CHECK(lzero.size() == (2 + 3 + 3 + 3) * 8);
  for (const auto& p : lzero) CHECK(p.l == 0);
}

TEST_CASE("b-tensor of explicit solutions is the metric") {
  for (const auto& p : reference_matrix()) {
    const RadialSolution s = explicit_solution(p);
    for (int i = 0; i <= 500; ++i) {
      const double r = s.radius() * i / 500.0;
      const BTensorSample b = b_tensor(s, r);
      CHECK(std::abs(b.lambda_radial - 1.0) < 1e-10);
      CHECK(std::abs(b.lambda_tangential - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("PDE residual and negative control") {
  for (const auto& p : reference_matrix()) {
    CHECK(max_pde_residual(explicit_solution(p), 500) < 1e-10);
  }
  const RadialSolution base = explicit_solution(params(3, 1.0, 2, 0, 0.5, 0.5));
  const RadialSolution bent = perturbed(base, 1e-3);
  CHECK(bent.origin() == RadialSolution::Origin::perturbed);
  const double res = max_pde_residual(bent);
  CHECK(res > 1e-5);
  CHECK(res < 1e-1);
  // The perturbation keeps both boundary values and the pole slope.
  CHECK(bent.evaluate(base.radius()).u == Approx(base.evaluate(base.radius()).u).epsilon(1e-14));
  CHECK(bent.evaluate(base.radius()).du == Approx(base.evaluate(base.radius()).du).epsilon(1e-14));
  CHECK(bent.evaluate(0.0).du == 0.0);
  const BTensorSample b = b_tensor(bent, 0.5 * base.radius());
  CHECK(std::abs(b.lambda_radial - 1.0) > 1e-5);
  CHECK(std::abs(b.lambda_radial - 1.0) < 1e-2);
}

TEST_CASE("P and P-tilde") {
  const RadialSolution flat = explicit_solution(params(3, 0.0, 2, 0, 0.0, 1.5));
  const RadialSolution sphere = explicit_solution(params(3, 1.0, 2, 0, 0.5, 1.0));
  for (double t : {0.0, 0.3, 0.77, 1.0}) {
    CHECK(p_function(flat, t * flat.radius()) == Approx(2.25).epsilon(1e-14));
    CHECK(p_tilde_function(flat, t * flat.radius()) == Approx(-1.125).epsilon(1e-14));
    CHECK(p_function(sphere, t * sphere.radius()) == Approx(0.25).epsilon(1e-12));
    CHECK(p_tilde_function(sphere, t * sphere.radius()) == Approx(-std::sqrt(5.0) / 2).epsilon(1e-14));
  }
  for (const auto& p : reference_matrix()) {
    const RadialSolution s = explicit_solution(p);
    const double h = 1e-5 * s.radius();
    for (int i = 1; i < 20; ++i) {
      const double r = s.radius() * i / 20.0;
      CHECK(std::abs(p_function(s, r) - p.p_boundary_value()) < 1e-10);
      const double dp = (p_tilde_function(s, r + h) - p_tilde_function(s, r - h)) / (2 * h);
      const double dq = (p_function(s, r + h) - p_function(s, r - h)) / (2 * h);
      CHECK(std::abs(dp) < 1e-8);
      CHECK(std::abs(dq) < 1e-8);
    }
  }
}

TEST_CASE("auxiliary function w") {
  const RadialSolution flat = explicit_solution(params(3, 0.0, 2, 0, 0.0, 1.5));
  CHECK(w_function(flat, 0.0) == -1.125);
  for (const auto& p : reference_matrix()) {
    const RadialSolution s = explicit_solution(p);
    CHECK(w_function(s, s.radius()) == Approx(0.0).scale(1.0).epsilon(1e-14));
    for (int i = 0; i < 200; ++i) {
      const double r = s.radius() * i / 200.0;
      CHECK(w_function(s, r) < 0.0);
      CHECK(std::abs(w_operator_residual(s, r)) < 1e-8);
    }
  }
  const RadialSolution sphere = explicit_solution(params(3, 1.0, 2, 0, 0.5, 1.0));
  for (int i = 0; i <= 200; ++i) {
    CHECK(std::abs(w_operator_residual(sphere, sphere.radius() * i / 200.0)) < 1e-8);
  }
}

TEST_CASE("monotone profile and the curvature gate") {
  for (const auto& p : reference_matrix()) {
    const RadialSolution s = explicit_solution(p);
    for (int i = 1; i <= 100; ++i) CHECK(s.evaluate(s.radius() * i / 100.0).du > 0.0);
    if (p.curvature() != 0.0) CHECK(p.curvature() * p.curvature() * p.c1 < 1.0);
  }
}

TEST_CASE("RK4 profile against the closed form") {
  const OdeProfile flat = ode_solve(SpaceForm(3, 0.0), -1.125, 1.5, 1e-3);
  const RadialJet end = flat.at(1.5);
  CHECK(std::abs(end.u) < 1e-12);
  CHECK(std::abs(end.du - 1.5) < 1e-12);

  const OdeProfile still = ode_solve(SpaceForm(3, 1.0), 1.0, 1.5, 1e-2);
  for (double r : {0.0, 0.4, 1.5}) CHECK(still.at(r).u == Approx(1.0).epsilon(1e-15));

  const double step = 1e-2;
  const OdeProfile hyper = ode_solve(SpaceForm(3, -1.0), 0.0, 1.0, step);
  CHECK(std::abs(hyper.at(1.0).u - 0.5430806348152437) < std::pow(step, 4) * 1e3);

  for (double K : {-1.0, 0.0, 1.0}) {
    const double v0 = -0.3;
    const OdeProfile prof = ode_solve(SpaceForm(3, K), v0, 1.2, step);
    double worst = 0.0;
    for (std::size_t i = 0; i < prof.r.size(); ++i) {
      const double r = prof.r[i];
      double exact = v0 + r * r / 2;
      if (K > 0) exact = 1 / K + (v0 - 1 / K) * std::cos(std::sqrt(K) * r);
      if (K < 0) exact = 1 / K + (v0 - 1 / K) * std::cosh(std::sqrt(-K) * r);
      worst = std::max(worst, std::abs(prof.v[i] - exact));
    }
    CHECK(worst < std::pow(step, 4) * 1e3);
  }
}

TEST_CASE("shooting recovers the closed-form radius") {
  const ShootResult flat = shoot_radius(params(3, 0.0, 2, 0, 0.0, 1.5));
  CHECK(std::abs(flat.radius - 1.5) < 1e-10);
  CHECK(std::abs(flat.v0 + 1.125) < 1e-10);
  const ShootResult sphere = shoot_radius(params(3, 1.0, 2, 0, 0.5, 1.0));
  CHECK(std::abs(sphere.radius - kRadiusAtan2) < 1e-10);
  CHECK(std::abs(sphere.v0 - (1.0 - std::sqrt(5.0) / 2)) < 1e-10);
  const ShootResult hyper = shoot_radius(params(3, -1.0, 2, 0, 0.0, 0.5));
  CHECK(std::abs(hyper.radius - kRadiusAtanhHalf) < 1e-10);

  const RadialSolution shot = shot_solution(params(4, -1.0, 2, 0, 0.5, 0.3));
  CHECK(shot.origin() == RadialSolution::Origin::shooting);
  CHECK(max_pde_residual(shot) < 1e-8);
}

TEST_CASE("reduced operator expressions") {
  for (int n = 2; n <= 6; ++n) {
    for (int k = 1; k <= n; ++k) {
      for (int l = 0; l < k; ++l) {
        CHECK(std::abs(p_operator_reduced(Spectrum::constant(n, 1.0), k, l, 0.37)) < 1e-10);
        CHECK(std::abs(p_tilde_operator_reduced(Spectrum::constant(n, 1.0), k, l, 1.3)) < 1e-10);
      }
    }
  }
  TrialRng rng(21);
  for (int t = 0; t < 300; ++t) {
    const int n = rng.integer(2, 8);
    const int k = rng.integer(1, n);
    const int l = rng.integer(0, k - 1);
    const Spectrum s = rescale_to_quotient(random_cone_spectrum(rng, n, k), k, l);
    CHECK(p_operator_reduced(s, k, l, rng.uniform()) >= -1e-10);
    CHECK(p_tilde_operator_reduced(s, k, l, rng.uniform(0.1, 2.0)) >= -1e-10);
  }
}

TEST_CASE("solution CSV export") {
  const RadialSolution s = explicit_solution(params(3, 0.0, 2, 0, 0.0, 1.5));
  std::ostringstream a;
  std::ostringstream b;
  write_solution_csv(a, s, 200);
  write_solution_csv(b, s, 200);
  CHECK(a.str() == b.str());

  std::istringstream in(a.str());
  std::string line;
  int meta = 0;
  int rows = 0;
  std::string header;
  std::string last;
  while (std::getline(in, line)) {
    if (line.rfind('#', 0) == 0) {
      ++meta;
    } else if (header.empty()) {
      header = line;
    } else {
      ++rows;
      last = line;
    }
  }
  CHECK(meta > 0);
  CHECK(header == "r,u,du,d2u,lambda_rad,lambda_tan,P,P_tilde,w");
  CHECK(rows == 200);
  CHECK(last.rfind("1.5,0,1.5,", 0) == 0);
  CHECK(a.str().find("# R=1.5\n") != std::string::npos);
}
