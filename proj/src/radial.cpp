#include "khess/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

#include "khess/format.hpp"

namespace khess {

namespace {

std::string describe(const ProblemParams& p) {
  std::ostringstream s;
  s << "(n=" << p.n() << ", k=" << p.k << ", l=" << p.l << ", K=" << format_number(p.curvature())
    << ", c1=" << format_number(p.c1) << ", c2=" << format_number(p.c2) << ")";
  return s.str();
}

[[noreturn]] void reject(const ProblemParams& p, const std::string& why) {
  throw ParameterError("inadmissible parameters " + describe(p) + ": " + why);
}

// Admissibility of the closed form plus the sign rules implied by K u >= 0.
void check_admissible(const ProblemParams& p) {
  p.validate();
  const double k = p.curvature();
  const double gap = 1.0 - k * k * p.c1;
  if (k > 0.0) {
    if (!(gap > 0.0)) reject(p, "K > 0 requires 1 - K^2 c1 > 0");
    if (!(p.c1 > 0.0)) reject(p, "K > 0 requires c1 > 0 (boundary value K c1 must be positive)");
  } else if (k < 0.0) {
    if (!(p.c1 >= 0.0)) reject(p, "K < 0 requires c1 >= 0 (K u >= 0)");
    if (!(gap > 0.0)) reject(p, "K < 0 requires 1 - K^2 c1 > 0");
    const double arg = p.c2 * std::sqrt(-k) / gap;
    if (!(arg < 1.0)) {
      reject(p, "K < 0 requires c2 sqrt(-K) / (1 - K^2 c1) < 1 (artanh argument is " +
                    format_number(arg) + ")");
    }
  }
}

struct State {
  double v;
  double dv;
};

// One RK4 step of v'' = 1 - K v.
State rk4(double curvature, State y, double h) {
  auto rhs = [curvature](State s) { return State{s.dv, 1.0 - curvature * s.v}; };
  const State k1 = rhs(y);
  const State k2 = rhs({y.v + 0.5 * h * k1.v, y.dv + 0.5 * h * k1.dv});
  const State k3 = rhs({y.v + 0.5 * h * k2.v, y.dv + 0.5 * h * k2.dv});
  const State k4 = rhs({y.v + h * k3.v, y.dv + h * k3.dv});
  return {y.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
          y.dv + h / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv)};
}

struct Flight {
  bool crossed = false;
  double radius = 0.0;
  double value = 0.0;
};

// Integrates from the pole until v' first reaches c2 or r reaches r_cap.
Flight fly(double curvature, double v0, double c2, double r_cap, double h) {
  State y{v0, 0.0};
  double r = 0.0;
  while (r < r_cap) {
    const double step = std::min(h, r_cap - r);
    const State next = rk4(curvature, y, step);
    if (next.dv >= c2) {
      // Safeguarded Newton on tau in (0, step]: g(tau) = v'(r + tau) - c2.
      double lo = 0.0;
      double hi = step;
      double tau = step * (c2 - y.dv) / (next.dv - y.dv);
      for (int it = 0; it < 100; ++it) {
        const State s = rk4(curvature, y, tau);
        const double g = s.dv - c2;
        if (g == 0.0) break;
        (g > 0.0 ? hi : lo) = tau;
        const double slope = 1.0 - curvature * s.v;
        double trial = tau - g / slope;
        if (!(trial > lo && trial < hi) || slope == 0.0) trial = 0.5 * (lo + hi);
        if (std::abs(trial - tau) <= 1e-17 * (r + step)) {
          tau = trial;
          break;
        }
        tau = trial;
      }
      return {true, r + tau, rk4(curvature, y, tau).v};
    }
    y = next;
    r += step;
  }
  return {};
}

}  // namespace

// --- ProblemParams ----------------------------------------------------------

void ProblemParams::validate() const {
  if (!(0 <= l && l < k && k <= n())) {
    throw ParameterError("need 0 <= l < k <= n, got " + describe(*this));
  }
  if (!std::isfinite(c1)) throw ParameterError("c1 must be finite");
  if (!(std::isfinite(c2) && c2 > 0.0)) throw ParameterError("c2 must be positive, got " + describe(*this));
}

double ProblemParams::p_boundary_value() const noexcept {
  const double kk = curvature();
  return kk * kk * kk * c1 * c1 + c2 * c2 - 2.0 * kk * c1;
}

double ProblemParams::quotient_target() const { return binomial(n(), k) / binomial(n(), l); }

// --- RadialSolution ---------------------------------------------------------

RadialSolution::RadialSolution(ProblemParams params, double radius, Profile profile, Origin origin)
    : params_(std::move(params)), radius_(radius), profile_(std::move(profile)), origin_(origin) {
  if (!(radius > 0.0) || !params_.space.admissible(radius)) {
    throw DomainError("ball radius " + format_number(radius) + " is not admissible for K = " +
                      format_number(params_.curvature()));
  }
  if (!profile_) throw std::invalid_argument("radial profile must be callable");
}

RadialJet RadialSolution::evaluate(double r) const {
  if (!(r >= 0.0 && r <= radius_ * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()))) {
    throw DomainError("radius " + format_number(r) + " outside [0, " + format_number(radius_) + "]");
  }
  return profile_(std::min(r, radius_));
}

double RadialSolution::min_sign_product(int samples) const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double r = (i == samples - 1) ? radius_ : radius_ * i / (samples - 1);
    m = std::min(m, params_.curvature() * evaluate(r).u);
  }
  return m;
}

const char* to_string(RadialSolution::Origin origin) {
  switch (origin) {
    case RadialSolution::Origin::closed_form: return "closed_form";
    case RadialSolution::Origin::perturbed: return "perturbed";
    case RadialSolution::Origin::shooting: return "shooting";
    case RadialSolution::Origin::custom: return "custom";
  }
  return "unknown";
}

double explicit_radius(const ProblemParams& params) {
  check_admissible(params);
  const double k = params.curvature();
  if (k == 0.0) return params.c2;
  const double gap = 1.0 - k * k * params.c1;
  if (k > 0.0) {
    const double s = std::sqrt(k);
    return std::atan(params.c2 * s / gap) / s;
  }
  const double s = std::sqrt(-k);
  return std::atanh(params.c2 * s / gap) / s;
}

RadialSolution explicit_solution(const ProblemParams& params) {
  const double radius = explicit_radius(params);
  const double k = params.curvature();
  const double boundary = params.boundary_value();
  RadialSolution::Profile profile;

  if (k == 0.0) {
    const double c2 = params.c2;
    profile = [c2](double r) { return RadialJet{0.5 * (r * r - c2 * c2), r, 1.0, 0.0}; };
  } else if (k > 0.0) {
    // u = 1/K - a cos(s r), written relative to u(R) = K c1 to avoid cancellation.
    const double s = std::sqrt(k);
    const double a = params.c2 / (s * std::sin(s * radius));
    profile = [=](double r) {
      const double sn = std::sin(s * r);
      const double cs = std::cos(s * r);
      const double u =
          boundary - 2.0 * a * std::sin(0.5 * s * (radius + r)) * std::sin(0.5 * s * (radius - r));
      return RadialJet{u, a * s * sn, a * k * cs, -a * k * s * sn};
    };
  } else {
    // u = 1/K + a cosh(s r).
    const double s = std::sqrt(-k);
    const double a = params.c2 / (s * std::sinh(s * radius));
    profile = [=](double r) {
      const double sh = std::sinh(s * r);
      const double ch = std::cosh(s * r);
      const double u = boundary - 2.0 * a * std::sinh(0.5 * s * (radius + r)) *
                                      std::sinh(0.5 * s * (radius - r));
      return RadialJet{u, a * s * sh, -a * k * ch, -a * k * s * sh};
    };
  }
  return RadialSolution(params, radius, std::move(profile), RadialSolution::Origin::closed_form);
}

RadialSolution perturbed(const RadialSolution& base, double eps) {
  const double radius = base.radius();
  auto profile = [base, eps, radius](double r) {
    RadialJet j = base.evaluate(r);
    const double d = radius - r;
    // eps (R^2 r^2 - 2 R r^3 + r^4) and its derivatives.
    j.u += eps * r * r * d * d;
    j.du += eps * (2.0 * radius * radius * r - 6.0 * radius * r * r + 4.0 * r * r * r);
    j.d2u += eps * (2.0 * radius * radius - 12.0 * radius * r + 12.0 * r * r);
    j.d3u += eps * (-12.0 * radius + 24.0 * r);
    return j;
  };
  return RadialSolution(base.params(), radius, std::move(profile),
                        RadialSolution::Origin::perturbed);
}

// --- ODE --------------------------------------------------------------------

RadialJet OdeProfile::at(double radius) const {
  const std::size_t intervals = r.size() - 1;
  const double h = step;
  std::size_t i = static_cast<std::size_t>(std::floor(radius / h));
  i = std::min(i, intervals - 1);
  const double t = (radius - r[i]) / h;
  const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
  const double h10 = t * (1.0 - t) * (1.0 - t);
  const double h01 = t * t * (3.0 - 2.0 * t);
  const double h11 = t * t * (t - 1.0);
  auto hermite = [&](double y0, double d0, double y1, double d1) {
    return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
  };
  const double value = hermite(v[i], dv[i], v[i + 1], dv[i + 1]);
  const double slope = hermite(dv[i], 1.0 - curvature * v[i], dv[i + 1], 1.0 - curvature * v[i + 1]);
  return {value, slope, 1.0 - curvature * value, -curvature * slope};
}

OdeProfile ode_solve(const SpaceForm& space, double v0, double r_max, double step) {
  space.require_admissible(r_max);
  if (!(step > 0.0) || !(r_max > 0.0)) throw std::invalid_argument("ode_solve needs step > 0 and r_max > 0");
  const auto intervals = static_cast<std::size_t>(std::ceil(r_max / step));
  OdeProfile out;
  out.curvature = space.curvature();
  out.step = r_max / static_cast<double>(intervals);
  out.r.reserve(intervals + 1);
  State y{v0, 0.0};
  out.r.push_back(0.0);
  out.v.push_back(y.v);
  out.dv.push_back(y.dv);
  for (std::size_t i = 1; i <= intervals; ++i) {
    y = rk4(out.curvature, y, out.step);
    out.r.push_back(i == intervals ? r_max : out.step * static_cast<double>(i));
    out.v.push_back(y.v);
    out.dv.push_back(y.dv);
  }
  return out;
}

ShootResult shoot_radius(const ProblemParams& params, double step) {
  check_admissible(params);
  if (!(step > 0.0)) throw std::invalid_argument("shooting step must be positive");
  const double k = params.curvature();
  const double target = params.boundary_value();
  double r_cap = 0.0;
  if (k > 0.0) {
    r_cap = params.space.max_radius() * (1.0 - 1e-12);
  } else if (k == 0.0) {
    r_cap = 2.0 * params.c2 + 1.0;
  } else {
    r_cap = std::min(40.0 / std::sqrt(-k), 1e3);
  }

  ShootResult result;
  auto too_high = [&](double v0) {
    ++result.iterations;
    const Flight fl = fly(k, v0, params.c2, r_cap, step);
    // Without a crossing, v0 sits too close to the constant solution 1/K:
    // above it for K > 0, below it for K < 0.
    if (!fl.crossed) return k > 0.0;
    return fl.value > target;
  };

  double hi = target;
  if (!too_high(hi)) {
    throw ShootingError("shooting failed for " + describe(params) +
                        ": starting from the boundary value does not overshoot");
  }
  double width = std::max({1.0, std::abs(target), params.c2 * params.c2});
  double lo = hi - width;
  int expansions = 0;
  while (too_high(lo)) {
    if (++expansions > 80) {
      throw ShootingError("shooting failed for " + describe(params) + ": no lower bracket for v0");
    }
    width *= 2.0;
    lo = hi - width;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (too_high(mid) ? hi : lo) = mid;
  }

  result.v0 = 0.5 * (lo + hi);
  const Flight fl = fly(k, result.v0, params.c2, r_cap, step);
  if (!fl.crossed || !params.space.admissible(fl.radius)) {
    throw ShootingError("shooting failed for " + describe(params) +
                        ": no admissible radius with u_nu = c2");
  }
  result.radius = fl.radius;
  return result;
}

RadialSolution shot_solution(const ProblemParams& params, double step) {
  const ShootResult shot = shoot_radius(params, step);
  auto profile = std::make_shared<OdeProfile>(ode_solve(params.space, shot.v0, shot.radius, step));
  return RadialSolution(
      params, shot.radius, [profile](double r) { return profile->at(r); },
      RadialSolution::Origin::shooting);
}

// --- derived fields ---------------------------------------------------------

BTensorSample b_tensor(const RadialSolution& sol, double r) {
  const RadialJet j = sol.evaluate(r);
  const double ku = sol.params().curvature() * j.u;
  const auto hess = radial_hessian_eigenvalues(sol.space(), {j.u, j.du, j.d2u}, r);
  return {r, hess.radial + ku, hess.tangential + ku};
}

RadialFrame b_frame(const RadialSolution& sol, double r) {
  const BTensorSample b = b_tensor(sol, r);
  return {sol.params().n(), b.lambda_radial, b.lambda_tangential};
}

double pde_residual(const RadialSolution& sol, double r) {
  const ProblemParams& p = sol.params();
  const Spectrum spectrum = b_frame(sol, r).spectrum();
  const double denominator = sigma_k(spectrum, p.l);
  if (denominator == 0.0) {
    throw DomainError("sigma_l(b) vanishes at r = " + format_number(r));
  }
  return sigma_k(spectrum, p.k) / denominator - p.quotient_target();
}

double max_pde_residual(const RadialSolution& sol, int samples) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = (i == samples - 1) ? sol.radius() : sol.radius() * i / (samples - 1);
    worst = std::max(worst, std::abs(pde_residual(sol, r)));
  }
  return worst;
}

double p_function(const RadialSolution& sol, double r) {
  const RadialJet j = sol.evaluate(r);
  return j.du * j.du + sol.params().curvature() * j.u * j.u - 2.0 * j.u;
}

double p_tilde_function(const RadialSolution& sol, double r) {
  const RadialJet j = sol.evaluate(r);
  const double f = warping(sol.space(), r).value;
  const double v = conformal_factor(sol.space(), r).value;
  const double phi = potential(sol.space(), r).value;
  return -j.du * f + j.u * v + phi;
}

double w_function(const RadialSolution& sol, double r) {
  const RadialJet j = sol.evaluate(r);
  const double v = conformal_factor(sol.space(), r).value;
  if (!(v > 0.0)) throw DomainError("w = (u - K c1)/V needs V > 0");
  return (j.u - sol.params().boundary_value()) / v;
}

double w_operator_residual(const RadialSolution& sol, double r) {
  const ProblemParams& p = sol.params();
  const int n = p.n();
  const double k = p.curvature();
  const RadialJet j = sol.evaluate(r);
  const RadialScalar vs = conformal_factor(sol.space(), r);
  const double v = vs.value;
  const double dv = vs.first_derivative;
  const double d2v = vs.second_derivative;
  if (!(v > 0.0)) throw DomainError("w operator needs V > 0");

  const double ubar = j.u - p.boundary_value();
  const double num = j.du * v - dv * ubar;
  const double dnum = j.d2u * v - d2v * ubar;
  const double dw = num / (v * v);
  const double d2w = dnum / (v * v) - 2.0 * num * dv / (v * v * v);
  const double source = n * (1.0 - k * k * p.c1) / v;
  if (r == 0.0) {
    // w'/f -> w''(0) at the pole, and V'(0) = 0.
    return n * d2w - source;
  }
  const double f = warping(sol.space(), r).value;
  return d2w + (n - 1) * (v / f) * dw + 2.0 * (dv / v) * dw - source;
}

RadialPoint sample_point(const RadialSolution& sol, double r) {
  RadialPoint pt;
  pt.r = r;
  pt.jet = sol.evaluate(r);
  pt.f = warping(sol.space(), r).value;
  pt.v = conformal_factor(sol.space(), r).value;
  pt.phi = potential(sol.space(), r).value;
  pt.b = b_frame(sol, r);
  return pt;
}

double p_operator_reduced(const Spectrum& b, int k, int l, double ku) {
  const int n = b.size();
  const double sk = sigma_k(b, k);
  const double sl = sigma_k(b, l);
  const double f = sk / sl;
  const double first = -(k + 1) * sigma_k(b, k + 1) / sk + (l + 1) * sigma_k(b, l + 1) / sl - (k - l);
  const double second =
      -(k - l) + (n - k + 1) * sigma_k(b, k - 1) / sk - (n - l + 1) * sigma_k(b, l - 1) / sl;
  return f * first + ku * f * second;
}

double p_tilde_operator_reduced(const Spectrum& b, int k, int l, double v) {
  const int n = b.size();
  const double sk = sigma_k(b, k);
  const double sl = sigma_k(b, l);
  const double f = sk / sl;
  return v * f *
         ((n - k + 1) * sigma_k(b, k - 1) / sk - (n - l + 1) * sigma_k(b, l - 1) / sl - (k - l));
}

std::vector<ProblemParams> reference_matrix(bool l_zero_only) {
  struct Data {
    double curvature, c1, c2;
  };
  static constexpr Data kData[] = {{0.0, 0.0, 0.5},  {0.0, 0.0, 1.5},  {1.0, 0.5, 0.5},
                                   {1.0, 0.5, 0.8},  {1.0, 0.9, 0.4},  {-1.0, 0.0, 0.5},
                                   {-1.0, 0.5, 0.3}, {-1.0, 0.0, 0.9}};
  std::vector<ProblemParams> out;
  for (int n : {2, 3, 4, 6}) {
    std::vector<std::pair<int, int>> orders;
    for (auto kl : {std::pair{1, 0}, std::pair{2, 0}, std::pair{2, 1}, std::pair{n, 0}, std::pair{3, 1}}) {
      if (kl.first > n || (l_zero_only && kl.second != 0)) continue;
      if (std::find(orders.begin(), orders.end(), kl) == orders.end()) orders.push_back(kl);
    }
    for (auto [k, l] : orders) {
      for (const Data& d : kData) out.push_back(ProblemParams{SpaceForm(n, d.curvature), k, l, d.c1, d.c2});
    }
  }
  return out;
}

void write_solution_csv(std::ostream& out, const RadialSolution& sol, int samples) {
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  const ProblemParams& p = sol.params();
  out << "# n=" << p.n() << "\n"
      << "# k=" << p.k << "\n"
      << "# l=" << p.l << "\n"
      << "# K=" << format_number(p.curvature()) << "\n"
      << "# c1=" << format_number(p.c1) << "\n"
      << "# c2=" << format_number(p.c2) << "\n"
      << "# R=" << format_number(sol.radius()) << "\n"
      << "# origin=" << to_string(sol.origin()) << "\n"
      << "# min_Ku=" << format_number(sol.min_sign_product() + 0.0) << "\n"
      << "# sign_condition=" << (sol.sign_condition_holds() ? "holds" : "violated") << "\n";
  out << "r,u,du,d2u,lambda_rad,lambda_tan,P,P_tilde,w\n";
  for (int i = 0; i < samples; ++i) {
    const double r = (i == samples - 1) ? sol.radius() : sol.radius() * i / (samples - 1);
    const RadialJet j = sol.evaluate(r);
    const BTensorSample b = b_tensor(sol, r);
    const std::array<double, 9> row{r,
                                    j.u,
                                    j.du,
                                    j.d2u,
                                    b.lambda_radial,
                                    b.lambda_tangential,
                                    p_function(sol, r),
                                    p_tilde_function(sol, r),
                                    w_function(sol, r)};
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << ',';
      out << format_number(row[c]);
    }
    out << '\n';
  }
}

}  // namespace khess
