#pragma once

#include "khess/elemsym.hpp"

namespace khess {

/// A symmetric form diagonal in the polar frame: one radial eigenvalue and
/// one tangential eigenvalue of multiplicity n - 1. All sigma quantities are
/// evaluated by the binomial split rather than from an explicit spectrum.
struct RadialFrame {
  int n = 2;
  double radial = 0.0;
  double tangential = 0.0;

  Spectrum spectrum() const;

  /// sigma_j = C(n-1, j) t^j + rho C(n-1, j-1) t^{j-1}.
  double sigma(int j) const;

  /// sigma_k^{rr} = sigma_{k-1}(lambda | radial) = C(n-1, k-1) t^{k-1}.
  double grad_radial(int k) const;

  /// sigma_k^{tt} = sigma_{k-1}(lambda | one tangential)
  ///             = C(n-2, k-1) t^{k-1} + rho C(n-2, k-2) t^{k-2}.
  double grad_tangential(int k) const;
};

}  // namespace khess
