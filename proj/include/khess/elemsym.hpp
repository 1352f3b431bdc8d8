#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace khess {

/// Raised when an operation's precondition (cone membership, symmetry,
/// quotient normalisation, index range) does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Eigenvalue multiset of a symmetric form. Non-empty, all entries finite.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> values);
  Spectrum(std::initializer_list<double> values);

  /// n copies of c.
  static Spectrum constant(int n, double c);

  int size() const noexcept { return static_cast<int>(values_.size()); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

  Spectrum scaled(double t) const;

 private:
  std::vector<double> values_;
};

/// Dense symmetric n x n matrix, row-major, 1 <= n <= 16.
class SymMatrix {
 public:
  static constexpr int kMaxDimension = 16;

  explicit SymMatrix(int n);
  /// Rows must form a square, exactly symmetric array.
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymMatrix identity(int n);
  static SymMatrix diagonal(std::span<const double> d);
  /// Q diag(d) Q^T for a row-major orthogonal Q.
  static SymMatrix conjugated_diagonal(std::span<const double> d, std::span<const double> q);

  int size() const noexcept { return n_; }
  double operator()(int i, int j) const { return data_[index(i, j)]; }
  double& operator()(int i, int j) { return data_[index(i, j)]; }

  bool is_symmetric() const noexcept;
  /// Throws PreconditionError if a_ij != a_ji for some pair.
  void require_symmetric() const;

  double trace() const noexcept;
  SymMatrix& operator+=(const SymMatrix& rhs);
  SymMatrix& operator*=(double s);
  /// sum_ij a_ij b_ij
  double frobenius_dot(const SymMatrix& rhs) const;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

  int n_;
  std::vector<double> data_;
};

/// C(n, k) as a double; zero outside 0 <= k <= n.
double binomial(int n, int k);
/// C(n, k) in exact integer arithmetic (n <= 62).
std::uint64_t binomial_exact(int n, int k);

/// sigma_0 .. sigma_n of the values, from the coefficients of prod (1 + t lambda_i).
std::vector<double> elementary_symmetric(std::span<const double> values);

/// sigma_k of the spectrum; 1 for k = 0, 0 for k < 0 or k > n.
double sigma_k(const Spectrum& lambda, int k);

/// Eigenvalues by cyclic Jacobi rotations, ascending.
Spectrum eigenvalues(const SymMatrix& a);

enum class SigmaRoute {
  jacobi,  ///< sigma_k of the Jacobi eigenvalues
  newton,  ///< Newton's identities on the power sums tr(A^j)
};

double sigma_k_matrix(const SymMatrix& a, int k, SigmaRoute route = SigmaRoute::jacobi);

/// The derivative matrix (d sigma_k / d a_ij), built by
/// G_1 = I, G_k = sigma_{k-1}(A) I - G_{k-1} A. Requires 1 <= k <= n.
SymMatrix sigma_k_grad(const SymMatrix& a, int k);

struct ConeReport {
  int max_k = 0;              ///< largest k with sigma_1..sigma_k > 0
  std::vector<double> sigmas; ///< sigma_1 .. sigma_n
};

ConeReport garding_cone(const Spectrum& lambda);

/// Spread max - min below 1e-8 (1 + |mean|).
bool is_constant_spectrum(const Spectrum& lambda);

struct NewtonMaclaurinReport {
  double lhs = 0.0;  ///< (sigma_{k+1}/C(n,k+1)) / (sigma_k/C(n,k))
  double rhs = 0.0;  ///< (sigma_k/C(n,k)) / (sigma_{k-1}/C(n,k-1))
  bool holds = false;
  bool equality = false;         ///< |lhs - rhs| <= 1e-10
  bool equality_consistent = true;  ///< equality only on constant spectra
};

/// Requires lambda in Gamma_k and 1 <= k <= n - 1.
NewtonMaclaurinReport newton_maclaurin_check(const Spectrum& lambda, int k);

/// sigma_{k+1}/C(n,k+1) <= (sigma_k/C(n,k))^{(k+1)/k}; returns rhs - lhs.
/// Requires lambda in Gamma_{k+1}.
double newton_maclaurin_power_slack(const Spectrum& lambda, int k);

struct QuotientBoundsReport {
  // Each slack is (bound side) - (ratio side) arranged so that >= 0 means the
  // inequality holds.
  double lower_k = 0.0;  ///< sigma_{k-1}/sigma_k - k/(n-k+1)
  double lower_l = 0.0;  ///< sigma_{l+1}/sigma_l - (n-l)/(l+1)
  double upper_k = 0.0;  ///< (n-k)/(k+1) - sigma_{k+1}/sigma_k
  double upper_l = 0.0;  ///< l/(n-l+1) - sigma_{l-1}/sigma_l
  bool sigma_k_plus_1_positive = false;

  /// Bounds that are equalities for every admissible spectrum: the two lower
  /// bounds when k = l + 1, upper_k when k = n, upper_l when l = 0.
  bool forced_lower = false;
  bool forced_upper_k = false;
  bool forced_upper_l = false;

  double min_slack() const;
  /// Minimum over the bounds that are not forced equalities; +inf if none.
  double min_informative_slack() const;
  bool holds(double tolerance = 1e-10) const { return min_slack() >= -tolerance; }
};

/// Requires lambda in Gamma_k, 0 <= l < k <= n and sigma_k/sigma_l = C(n,k)/C(n,l)
/// to relative 1e-10.
QuotientBoundsReport quotient_ratio_bounds(const Spectrum& lambda, int k, int l);

/// t lambda with t = (target/current)^{1/(k-l)} so that sigma_k/sigma_l = C(n,k)/C(n,l).
Spectrum rescale_to_quotient(const Spectrum& lambda, int k, int l);

/// F^{ij} for F = sigma_k/sigma_l: (G_k sigma_l - sigma_k G_l) / sigma_l^2.
/// Requires A in Gamma_k and 0 <= l < k <= n.
SymMatrix quotient_derivative(const SymMatrix& a, int k, int l);

/// Smallest eigenvalue of F^{ij} must exceed 1e-12 times the largest.
bool is_positive_definite(const SymMatrix& a);

}  // namespace khess
