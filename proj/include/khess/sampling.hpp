#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "khess/elemsym.hpp"

namespace khess {

/// Seeded generator for trial corpora. Uniform and normal variates are derived
/// from the raw 64-bit stream directly, so a seed yields the same corpus on
/// every standard library.
class TrialRng {
 public:
  explicit TrialRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Integer uniform on [lo, hi].
  int integer(int lo, int hi);
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Entries U(lo, hi), exactly symmetric.
SymMatrix random_symmetric(TrialRng& rng, int n, double lo = -2.0, double hi = 2.0);

/// Row-major orthogonal matrix from Gram-Schmidt on a Gaussian matrix.
std::vector<double> random_rotation(TrialRng& rng, int n);

/// lambda_i ~ U(-0.5, 2.0), rejected until the spectrum lies in Gamma_k.
Spectrum random_cone_spectrum(TrialRng& rng, int n, int k);

/// Q diag(lambda) Q^T with lambda from random_cone_spectrum.
SymMatrix random_cone_matrix(TrialRng& rng, int n, int k);

}  // namespace khess
