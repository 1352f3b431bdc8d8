#include "khess/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace khess {

double TrialRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int TrialRng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

double TrialRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  spare_ = radius * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return radius * std::cos(2.0 * std::numbers::pi * u2);
}

SymMatrix random_symmetric(TrialRng& rng, int n, double lo, double hi) {
  SymMatrix a(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = rng.uniform(lo, hi);
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

std::vector<double> random_rotation(TrialRng& rng, int n) {
  std::vector<double> q(static_cast<std::size_t>(n * n));
  auto at = [&](int i, int j) -> double& { return q[static_cast<std::size_t>(i * n + j)]; };
  for (int row = 0; row < n; ++row) {
    for (;;) {
      for (int j = 0; j < n; ++j) at(row, j) = rng.normal();
      // Modified Gram-Schmidt against the rows already accepted.
      for (int prev = 0; prev < row; ++prev) {
        double dot = 0.0;
        for (int j = 0; j < n; ++j) dot += at(row, j) * at(prev, j);
        for (int j = 0; j < n; ++j) at(row, j) -= dot * at(prev, j);
      }
      double norm = 0.0;
      for (int j = 0; j < n; ++j) norm += at(row, j) * at(row, j);
      norm = std::sqrt(norm);
      if (norm > 1e-6) {
        for (int j = 0; j < n; ++j) at(row, j) /= norm;
        break;
      }
    }
  }
  return q;
}

Spectrum random_cone_spectrum(TrialRng& rng, int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("random_cone_spectrum: need 0 <= k <= n");
  std::vector<double> values(static_cast<std::size_t>(n));
  for (;;) {
    for (double& v : values) v = rng.uniform(-0.5, 2.0);
    Spectrum candidate(values);
    if (garding_cone(candidate).max_k >= k) return candidate;
  }
}

SymMatrix random_cone_matrix(TrialRng& rng, int n, int k) {
  const Spectrum lambda = random_cone_spectrum(rng, n, k);
  const auto q = random_rotation(rng, n);
  return SymMatrix::conjugated_diagonal(lambda.values(), q);
}

}  // namespace khess
