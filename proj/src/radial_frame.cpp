#include "khess/radial_frame.hpp"

#include <vector>

namespace khess {

namespace {

double ipow(double x, int m) {
  double out = 1.0;
  for (int i = 0; i < m; ++i) out *= x;
  return out;
}

// C(m, j) t^j, zero outside 0 <= j <= m.
double term(int m, int j, double t) {
  if (j < 0 || j > m) return 0.0;
  return binomial(m, j) * ipow(t, j);
}

}  // namespace

Spectrum RadialFrame::spectrum() const {
  std::vector<double> values(static_cast<std::size_t>(n), tangential);
  values[0] = radial;
  return Spectrum(std::move(values));
}

double RadialFrame::sigma(int j) const {
  if (j < 0 || j > n) return 0.0;
  return term(n - 1, j, tangential) + radial * term(n - 1, j - 1, tangential);
}

double RadialFrame::grad_radial(int k) const { return term(n - 1, k - 1, tangential); }

double RadialFrame::grad_tangential(int k) const {
  return term(n - 2, k - 1, tangential) + radial * term(n - 2, k - 2, tangential);
}

}  // namespace khess
