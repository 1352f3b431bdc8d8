#include "khess/elemsym.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

namespace khess {

namespace {

std::vector<double> multiply(const SymMatrix& a, const SymMatrix& b) {
  const int n = a.size();
  std::vector<double> out(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) {
      const double ail = a(i, l);
      if (ail == 0.0) continue;
      for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i * n + j)] += ail * b(l, j);
    }
  }
  return out;
}

// Product of two commuting symmetric matrices, symmetrised to remove roundoff.
SymMatrix commuting_product(const SymMatrix& a, const SymMatrix& b) {
  const int n = a.size();
  const auto raw = multiply(a, b);
  SymMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out(i, j) = 0.5 * (raw[static_cast<std::size_t>(i * n + j)] +
                         raw[static_cast<std::size_t>(j * n + i)]);
    }
  }
  return out;
}

void require_k_range(int k, int lo, int hi, const char* what) {
  if (k < lo || k > hi) {
    throw PreconditionError(std::string(what) + ": index " + std::to_string(k) +
                            " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

void require_cone(const Spectrum& lambda, int k, const char* what) {
  if (garding_cone(lambda).max_k < k) {
    throw PreconditionError(std::string(what) + ": spectrum is not in Gamma_" + std::to_string(k));
  }
}

void require_orders(int n, int k, int l, const char* what) {
  if (!(0 <= l && l < k && k <= n)) {
    throw PreconditionError(std::string(what) + ": need 0 <= l < k <= n, got k=" +
                            std::to_string(k) + " l=" + std::to_string(l) +
                            " n=" + std::to_string(n));
  }
}

}  // namespace

// --- Spectrum ---------------------------------------------------------------

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("spectrum must be non-empty");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("spectrum entries must be finite");
  }
}

Spectrum::Spectrum(std::initializer_list<double> values)
    : Spectrum(std::vector<double>(values)) {}

Spectrum Spectrum::constant(int n, double c) {
  return Spectrum(std::vector<double>(static_cast<std::size_t>(n), c));
}

Spectrum Spectrum::scaled(double t) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= t;
  return Spectrum(std::move(out));
}

// --- SymMatrix --------------------------------------------------------------

SymMatrix::SymMatrix(int n) : n_(n) {
  if (n < 1 || n > kMaxDimension) {
    throw std::invalid_argument("matrix dimension must be in [1, 16], got " + std::to_string(n));
  }
  data_.assign(static_cast<std::size_t>(n * n), 0.0);
}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : SymMatrix(static_cast<int>(rows.size())) {
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n_) throw std::invalid_argument("matrix rows must be square");
    int j = 0;
    for (double v : row) (*this)(i, j++) = v;
    ++i;
  }
  require_symmetric();
}

SymMatrix SymMatrix::identity(int n) {
  SymMatrix out(n);
  for (int i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix out(static_cast<int>(d.size()));
  for (int i = 0; i < out.size(); ++i) out(i, i) = d[static_cast<std::size_t>(i)];
  return out;
}

SymMatrix SymMatrix::conjugated_diagonal(std::span<const double> d, std::span<const double> q) {
  const int n = static_cast<int>(d.size());
  if (q.size() != static_cast<std::size_t>(n * n)) {
    throw std::invalid_argument("rotation must be n x n");
  }
  SymMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int m = 0; m < n; ++m) {
        s += q[static_cast<std::size_t>(i * n + m)] * d[static_cast<std::size_t>(m)] *
             q[static_cast<std::size_t>(j * n + m)];
      }
      out(i, j) = s;
      out(j, i) = s;
    }
  }
  return out;
}

bool SymMatrix::is_symmetric() const noexcept {
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) return false;
    }
  }
  return true;
}

void SymMatrix::require_symmetric() const {
  if (!is_symmetric()) throw PreconditionError("matrix is not symmetric");
}

double SymMatrix::trace() const noexcept {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& rhs) {
  if (rhs.n_ != n_) throw std::invalid_argument("dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double SymMatrix::frobenius_dot(const SymMatrix& rhs) const {
  if (rhs.n_ != n_) throw std::invalid_argument("dimension mismatch");
  return std::inner_product(data_.begin(), data_.end(), rhs.data_.begin(), 0.0);
}

// --- scalar machinery -------------------------------------------------------

double binomial(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0.0;
  return static_cast<double>(binomial_exact(n, k));
}

std::uint64_t binomial_exact(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0;
  if (n > 62) throw std::invalid_argument("binomial_exact supports n <= 62");
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  // c * (n - k + j) <= C(61, 30) * 62 < 2^64.
  for (int j = 1; j <= k; ++j) c = c * static_cast<std::uint64_t>(n - k + j) / static_cast<std::uint64_t>(j);
  return c;
}

std::vector<double> elementary_symmetric(std::span<const double> values) {
  std::vector<double> e(values.size() + 1, 0.0);
  e[0] = 1.0;
  std::size_t filled = 0;
  for (double v : values) {
    ++filled;
    for (std::size_t j = filled; j >= 1; --j) e[j] += v * e[j - 1];
  }
  return e;
}

double sigma_k(const Spectrum& lambda, int k) {
  if (k < 0 || k > lambda.size()) return 0.0;
  if (k == 0) return 1.0;
  return elementary_symmetric(lambda.values())[static_cast<std::size_t>(k)];
}

Spectrum eigenvalues(const SymMatrix& a) {
  a.require_symmetric();
  const int n = a.size();
  SymMatrix m = a;
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) scale += m(i, j) * m(i, j);
  }
  const double threshold = std::numeric_limits<double>::epsilon() * std::sqrt(scale) * 1e-3;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
    }
    if (std::sqrt(off) <= threshold || off == 0.0) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int r = 0; r < n; ++r) {
          const double mrp = m(r, p);
          const double mrq = m(r, q);
          m(r, p) = c * mrp - s * mrq;
          m(r, q) = s * mrp + c * mrq;
        }
        for (int r = 0; r < n; ++r) {
          const double mpr = m(p, r);
          const double mqr = m(q, r);
          m(p, r) = c * mpr - s * mqr;
          m(q, r) = s * mpr + c * mqr;
        }
        m(p, q) = 0.0;
        m(q, p) = 0.0;
      }
    }
  }

  std::vector<double> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = m(i, i);
  std::sort(values.begin(), values.end());
  return Spectrum(std::move(values));
}

double sigma_k_matrix(const SymMatrix& a, int k, SigmaRoute route) {
  a.require_symmetric();
  const int n = a.size();
  if (k < 0 || k > n) return 0.0;
  if (k == 0) return 1.0;
  if (route == SigmaRoute::jacobi) return sigma_k(eigenvalues(a), k);

  // e_m = (1/m) sum_{i=1..m} (-1)^{i-1} e_{m-i} p_i with p_i = tr(A^i).
  std::vector<double> power_sums(static_cast<std::size_t>(k + 1), 0.0);
  SymMatrix power = a;
  power_sums[1] = power.trace();
  for (int i = 2; i <= k; ++i) {
    power = commuting_product(power, a);
    power_sums[static_cast<std::size_t>(i)] = power.trace();
  }
  std::vector<double> e(static_cast<std::size_t>(k + 1), 0.0);
  e[0] = 1.0;
  for (int m = 1; m <= k; ++m) {
    double s = 0.0;
    for (int i = 1; i <= m; ++i) {
      const double term = e[static_cast<std::size_t>(m - i)] * power_sums[static_cast<std::size_t>(i)];
      s += (i % 2 == 1) ? term : -term;
    }
    e[static_cast<std::size_t>(m)] = s / m;
  }
  return e[static_cast<std::size_t>(k)];
}

SymMatrix sigma_k_grad(const SymMatrix& a, int k) {
  a.require_symmetric();
  const int n = a.size();
  require_k_range(k, 1, n, "sigma_k_grad");
  SymMatrix g = SymMatrix::identity(n);
  for (int j = 2; j <= k; ++j) {
    SymMatrix next = SymMatrix::identity(n);
    next *= sigma_k_matrix(a, j - 1, SigmaRoute::newton);
    SymMatrix ga = commuting_product(g, a);
    ga *= -1.0;
    next += ga;
    g = std::move(next);
  }
  return g;
}

ConeReport garding_cone(const Spectrum& lambda) {
  const auto e = elementary_symmetric(lambda.values());
  ConeReport report;
  report.sigmas.assign(e.begin() + 1, e.end());
  while (report.max_k < lambda.size() &&
         report.sigmas[static_cast<std::size_t>(report.max_k)] > 0.0) {
    ++report.max_k;
  }
  return report;
}

bool is_constant_spectrum(const Spectrum& lambda) {
  const auto v = lambda.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  return *hi - *lo < 1e-8 * (1.0 + std::abs(mean));
}

NewtonMaclaurinReport newton_maclaurin_check(const Spectrum& lambda, int k) {
  const int n = lambda.size();
  require_k_range(k, 1, n - 1, "newton_maclaurin_check");
  require_cone(lambda, k, "newton_maclaurin_check");
  const auto e = elementary_symmetric(lambda.values());
  auto normalized = [&](int j) { return e[static_cast<std::size_t>(j)] / binomial(n, j); };

  NewtonMaclaurinReport r;
  r.lhs = normalized(k + 1) / normalized(k);
  r.rhs = normalized(k) / normalized(k - 1);
  r.holds = r.lhs <= r.rhs + 1e-12;
  r.equality = std::abs(r.lhs - r.rhs) <= 1e-10;
  r.equality_consistent = !r.equality || is_constant_spectrum(lambda);
  return r;
}

double newton_maclaurin_power_slack(const Spectrum& lambda, int k) {
  const int n = lambda.size();
  require_k_range(k, 1, n - 1, "newton_maclaurin_power_slack");
  require_cone(lambda, k + 1, "newton_maclaurin_power_slack");
  const auto e = elementary_symmetric(lambda.values());
  const double lhs = e[static_cast<std::size_t>(k + 1)] / binomial(n, k + 1);
  const double base = e[static_cast<std::size_t>(k)] / binomial(n, k);
  return std::pow(base, static_cast<double>(k + 1) / k) - lhs;
}

double QuotientBoundsReport::min_slack() const {
  return std::min({lower_k, lower_l, upper_k, upper_l});
}

double QuotientBoundsReport::min_informative_slack() const {
  double m = std::numeric_limits<double>::infinity();
  if (!forced_lower) m = std::min({m, lower_k, lower_l});
  if (!forced_upper_k) m = std::min(m, upper_k);
  if (!forced_upper_l) m = std::min(m, upper_l);
  return m;
}

QuotientBoundsReport quotient_ratio_bounds(const Spectrum& lambda, int k, int l) {
  const int n = lambda.size();
  require_orders(n, k, l, "quotient_ratio_bounds");
  require_cone(lambda, k, "quotient_ratio_bounds");
  const auto e = elementary_symmetric(lambda.values());
  auto s = [&](int j) { return (j < 0 || j > n) ? 0.0 : e[static_cast<std::size_t>(j)]; };

  const double target = binomial(n, k) / binomial(n, l);
  const double quotient = s(k) / s(l);
  if (std::abs(quotient / target - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "quotient_ratio_bounds: sigma_k/sigma_l = " << quotient << " but C(n,k)/C(n,l) = "
        << target << "; rescale first";
    throw PreconditionError(msg.str());
  }

  QuotientBoundsReport r;
  r.lower_k = s(k - 1) / s(k) - static_cast<double>(k) / (n - k + 1);
  r.lower_l = s(l + 1) / s(l) - static_cast<double>(n - l) / (l + 1);
  r.upper_k = static_cast<double>(n - k) / (k + 1) - s(k + 1) / s(k);
  r.upper_l = static_cast<double>(l) / (n - l + 1) - s(l - 1) / s(l);
  r.sigma_k_plus_1_positive = s(k + 1) > 0.0;
  r.forced_lower = (k == l + 1);
  r.forced_upper_k = (k == n);
  r.forced_upper_l = (l == 0);
  return r;
}

Spectrum rescale_to_quotient(const Spectrum& lambda, int k, int l) {
  const int n = lambda.size();
  require_orders(n, k, l, "rescale_to_quotient");
  require_cone(lambda, k, "rescale_to_quotient");
  const double current = sigma_k(lambda, k) / sigma_k(lambda, l);
  const double target = binomial(n, k) / binomial(n, l);
  const double t = std::pow(target / current, 1.0 / (k - l));
  return lambda.scaled(t);
}

SymMatrix quotient_derivative(const SymMatrix& a, int k, int l) {
  a.require_symmetric();
  const int n = a.size();
  require_orders(n, k, l, "quotient_derivative");
  require_cone(eigenvalues(a), k, "quotient_derivative");

  const double sk = sigma_k_matrix(a, k, SigmaRoute::newton);
  const double sl = sigma_k_matrix(a, l, SigmaRoute::newton);
  SymMatrix out = sigma_k_grad(a, k);
  out *= 1.0 / sl;
  if (l >= 1) {
    SymMatrix gl = sigma_k_grad(a, l);
    gl *= -sk / (sl * sl);
    out += gl;
  }
  return out;
}

bool is_positive_definite(const SymMatrix& a) {
  const Spectrum ev = eigenvalues(a);
  const double largest = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
  return ev[0] > 1e-12 * largest;
}

}  // namespace khess
