#include "khess/properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "khess/elemsym.hpp"
#include "khess/sampling.hpp"

namespace khess {

namespace {

// sigma_k of |lambda|: the natural magnitude of sigma_k(lambda) when terms cancel.
double absolute_scale(const Spectrum& lambda, int k) {
  std::vector<double> abs_values;
  for (double v : lambda.values()) abs_values.push_back(std::abs(v));
  return sigma_k(Spectrum(std::move(abs_values)), k);
}

double relative_error(double a, double b, double scale) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), scale, 1e-300});
}

// Subsequent streams are seeded from the master seed so each property sees a
// fixed corpus independent of the others.
TrialRng stream(std::uint64_t seed, std::uint64_t index) {
  return TrialRng(seed * 0x9E3779B97F4A7C15ULL + index);
}

struct Orders {
  int n;
  int k;
  int l;
};

Orders draw_orders(TrialRng& rng, int nmax, int kmin_offset = 0) {
  const int n = rng.integer(2, nmax);
  const int k = rng.integer(1, n - kmin_offset);
  const int l = rng.integer(0, k - 1);
  return {n, k, l};
}

PropertyResult contraction_identities(const PropertySuiteOptions& o, int which) {
  static const char* names[] = {"sigma_k^{ij} a_ij = k sigma_k",
                                "trace sigma_k^{ij} = (n-k+1) sigma_{k-1}",
                                "sigma_k^{il} a_jl a_ij = sigma_1 sigma_k - (k+1) sigma_{k+1}"};
  PropertyResult r{names[which], o.trials, 0.0, 1e-9, true, "relative to sigma(|lambda|) scale"};
  TrialRng rng = stream(o.seed, static_cast<std::uint64_t>(which + 1));
  for (int t = 0; t < o.trials; ++t) {
    const int n = rng.integer(2, o.max_dimension);
    const int k = rng.integer(1, n);
    const SymMatrix a = random_symmetric(rng, n);
    const Spectrum lambda = eigenvalues(a);
    const SymMatrix g = sigma_k_grad(a, k);
    double err = 0.0;
    if (which == 0) {
      err = relative_error(g.frobenius_dot(a), k * sigma_k_matrix(a, k),
                           k * absolute_scale(lambda, k));
    } else if (which == 1) {
      err = relative_error(g.trace(), (n - k + 1) * sigma_k_matrix(a, k - 1),
                           (n - k + 1) * absolute_scale(lambda, k - 1));
    } else {
      SymMatrix a2(n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += a(i, m) * a(m, j);
          a2(i, j) = s;
        }
      }
      const double lhs = g.frobenius_dot(a2);
      const double rhs = sigma_k_matrix(a, 1) * sigma_k_matrix(a, k) -
                         (k + 1) * sigma_k_matrix(a, k + 1);
      const double scale = absolute_scale(lambda, 1) * absolute_scale(lambda, k) +
                           (k + 1) * absolute_scale(lambda, k + 1);
      err = relative_error(lhs, rhs, scale);
    }
    r.worst = std::max(r.worst, err);
  }
  r.passed = r.worst < r.threshold;
  return r;
}

PropertyResult dual_route(const PropertySuiteOptions& o) {
  PropertyResult r{"Jacobi vs Newton-identity sigma_k", o.trials, 0.0, 1e-9, true,
                   "all k in [1, n] per matrix"};
  TrialRng rng = stream(o.seed, 4);
  for (int t = 0; t < o.trials; ++t) {
    const int n = rng.integer(2, o.max_dimension);
    const SymMatrix a = random_symmetric(rng, n);
    const Spectrum lambda = eigenvalues(a);
    for (int k = 1; k <= n; ++k) {
      const double jac = sigma_k_matrix(a, k, SigmaRoute::jacobi);
      const double newt = sigma_k_matrix(a, k, SigmaRoute::newton);
      r.worst = std::max(r.worst, relative_error(jac, newt, absolute_scale(lambda, k)));
    }
  }
  r.passed = r.worst < r.threshold;
  return r;
}

PropertyResult gradient_vs_finite_differences(const PropertySuiteOptions& o) {
  PropertyResult r{"sigma_k^{ij} vs central differences (h = 1e-5)", o.trials, 0.0, 1e-6, true,
                   "max entry error relative to max(1, max |sigma_k^{ij}|)"};
  TrialRng rng = stream(o.seed, 5);
  constexpr double h = 1e-5;
  for (int t = 0; t < o.trials; ++t) {
    const int n = rng.integer(2, o.max_dimension);
    const int k = rng.integer(1, n);
    const SymMatrix a = random_symmetric(rng, n);
    const SymMatrix g = sigma_k_grad(a, k);
    double scale = 1.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(g(i, j)));
    }
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        // A symmetric perturbation moves a_ij and a_ji together.
        SymMatrix plus = a;
        SymMatrix minus = a;
        plus(i, j) += h;
        minus(i, j) -= h;
        if (i != j) {
          plus(j, i) += h;
          minus(j, i) -= h;
        }
        // The power-sum route is a polynomial in the entries, so the quotient
        // carries no eigensolver noise.
        const double fd = (sigma_k_matrix(plus, k, SigmaRoute::newton) -
                           sigma_k_matrix(minus, k, SigmaRoute::newton)) /
                          (2.0 * h);
        const double expected = (i == j) ? g(i, i) : 2.0 * g(i, j);
        err = std::max(err, std::abs(fd - expected) / (i == j ? 1.0 : 2.0));
      }
    }
    r.worst = std::max(r.worst, err / scale);
  }
  r.passed = r.worst < r.threshold;
  return r;
}

PropertyResult quotient_positive_definite(const PropertySuiteOptions& o) {
  PropertyResult r{"F^{ij} positive definite on Gamma_k", o.trials, 0.0, 0.0, true,
                   "worst = -min(lambda_min/lambda_max), negative when every sample is definite"};
  TrialRng rng = stream(o.seed, 6);
  int failures = 0;
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (int t = 0; t < o.trials; ++t) {
    const auto [n, k, l] = draw_orders(rng, o.max_dimension);
    const SymMatrix a = random_cone_matrix(rng, n, k);
    const SymMatrix f = quotient_derivative(a, k, l);
    const Spectrum ev = eigenvalues(f);
    worst_ratio = std::min(worst_ratio, ev[0] / ev[n - 1]);
    if (!is_positive_definite(f)) ++failures;
  }
  r.worst = o.trials > 0 ? -worst_ratio : 0.0;
  r.passed = failures == 0;
  if (failures > 0) r.detail += "; failures: " + std::to_string(failures);
  return r;
}

PropertyResult newton_maclaurin(const PropertySuiteOptions& o) {
  PropertyResult r{"Newton-MacLaurin ratio inequality", o.trials, 0.0, 1e-10, true,
                   "worst = max(lhs - rhs) on rescaled Gamma_k samples"};
  TrialRng rng = stream(o.seed, 7);
  int inconsistent = 0;
  for (int t = 0; t < o.trials; ++t) {
    const int n = rng.integer(2, o.max_dimension);
    const int k = rng.integer(1, n - 1);
    const int l = rng.integer(0, k - 1);
    const Spectrum lambda = rescale_to_quotient(random_cone_spectrum(rng, n, k), k, l);
    const auto nm = newton_maclaurin_check(lambda, k);
    r.worst = std::max(r.worst, nm.lhs - nm.rhs);
    if (!nm.equality_consistent || !nm.holds) ++inconsistent;
  }
  r.passed = r.worst <= r.threshold && inconsistent == 0;
  if (inconsistent > 0) r.detail += "; failed checks: " + std::to_string(inconsistent);
  return r;
}

PropertyResult newton_maclaurin_power(const PropertySuiteOptions& o) {
  PropertyResult r{"Newton-MacLaurin power form", o.trials, 0.0, 1e-10, true,
                   "worst = max(-slack) on Gamma_{k+1} samples"};
  TrialRng rng = stream(o.seed, 8);
  for (int t = 0; t < o.trials; ++t) {
    const int n = rng.integer(2, o.max_dimension);
    const int k = rng.integer(1, n - 1);
    const Spectrum lambda = random_cone_spectrum(rng, n, k + 1);
    r.worst = std::max(r.worst, -newton_maclaurin_power_slack(lambda, k));
  }
  r.passed = r.worst <= r.threshold;
  return r;
}

PropertyResult quotient_bounds(const PropertySuiteOptions& o) {
  PropertyResult r{"quotient ratio bounds", o.trials, 0.0, 1e-10, true,
                   "worst = max(-slack) on rescaled Gamma_k samples"};
  TrialRng rng = stream(o.seed, 9);
  int strict_equalities = 0;
  for (int t = 0; t < o.trials; ++t) {
    const auto [n, k, l] = draw_orders(rng, o.max_dimension);
    const Spectrum lambda = rescale_to_quotient(random_cone_spectrum(rng, n, k), k, l);
    const auto b = quotient_ratio_bounds(lambda, k, l);
    r.worst = std::max(r.worst, -b.min_slack());
    if (!is_constant_spectrum(lambda) && b.min_informative_slack() < 1e-10) ++strict_equalities;
  }
  r.passed = r.worst <= r.threshold && strict_equalities == 0;
  if (strict_equalities > 0) {
    r.detail += "; equality on non-constant spectra: " + std::to_string(strict_equalities);
  }
  return r;
}

PropertyResult equality_at_constant_spectra(const PropertySuiteOptions& o) {
  PropertyResult r{"equality cases at constant spectra", o.trials, 0.0, 1e-10, true,
                   "worst = max |slack| and |lhs - rhs| on c*(1,...,1)"};
  TrialRng rng = stream(o.seed, 10);
  int missed = 0;
  for (int t = 0; t < o.trials; ++t) {
    const auto [n, k, l] = draw_orders(rng, o.max_dimension);
    const Spectrum lambda =
        rescale_to_quotient(Spectrum::constant(n, rng.uniform(0.1, 3.0)), k, l);
    const auto b = quotient_ratio_bounds(lambda, k, l);
    r.worst = std::max({r.worst, std::abs(b.lower_k), std::abs(b.lower_l), std::abs(b.upper_k),
                        std::abs(b.upper_l)});
    if (k <= n - 1) {
      const auto nm = newton_maclaurin_check(lambda, k);
      r.worst = std::max(r.worst, std::abs(nm.lhs - nm.rhs));
      if (!nm.equality) ++missed;
    }
  }
  r.passed = r.worst < r.threshold && missed == 0;
  if (missed > 0) r.detail += "; missed equalities: " + std::to_string(missed);
  return r;
}

}  // namespace

bool PropertySuiteReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

PropertySuiteReport run_property_suite(const PropertySuiteOptions& options) {
  if (options.trials < 0) throw std::invalid_argument("trials must be non-negative");
  if (options.max_dimension < 2 || options.max_dimension > SymMatrix::kMaxDimension) {
    throw std::invalid_argument("max dimension must be in [2, 16]");
  }
  PropertySuiteReport report{options, {}};
  for (int which = 0; which < 3; ++which) {
    report.results.push_back(contraction_identities(options, which));
  }
  report.results.push_back(dual_route(options));
  report.results.push_back(gradient_vs_finite_differences(options));
  report.results.push_back(quotient_positive_definite(options));
  report.results.push_back(newton_maclaurin(options));
  report.results.push_back(newton_maclaurin_power(options));
  report.results.push_back(quotient_bounds(options));
  report.results.push_back(equality_at_constant_spectra(options));
  return report;
}

}  // namespace khess
