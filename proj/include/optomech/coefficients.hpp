#pragma once

#include <cstdint>
#include <Eigen/Dense>

namespace optomech {

// Exact rational used for the integer-valued closed forms of the coupling
// coefficients. Always stored reduced with a positive denominator.
class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;

 private:
  std::int64_t num_;
  std::int64_t den_;
};

// Closed forms for the moving-mirror mode-coupling coefficients (1-based
// mode indices). g is antisymmetric, h vanishes on the diagonal, d is the
// symmetric part of h with r on the diagonal.
double g_coefficient(int k, int j);
double h_coefficient(int k, int j);
double d_coefficient(int k, int j);
double r_coefficient(int k);

// Exact-rational path, valid for 1 <= k, j <= kExactModeLimit.
inline constexpr int kExactModeLimit = 64;
Rational g_exact(int k, int j);
Rational h_exact(int k, int j);
// Off-diagonal closed form 4(-1)^{k+j} kj (k^2+j^2) / (k^2-j^2)^2; k != j.
Rational d_exact(int k, int j);

// Eagerly built, immutable table of g, h, d and r for modes 1..kmax.
class CoefficientTable {
 public:
  explicit CoefficientTable(int kmax);

  int kmax() const { return kmax_; }

  // 1-based accessors.
  double g(int k, int j) const { return g_(k - 1, j - 1); }
  double h(int k, int j) const { return h_(k - 1, j - 1); }
  double d(int k, int j) const { return d_(k - 1, j - 1); }
  double r(int k) const { return r_(k - 1); }

  // 0-based dense views.
  const Eigen::MatrixXd& g_matrix() const { return g_; }
  const Eigen::MatrixXd& h_matrix() const { return h_; }
  const Eigen::MatrixXd& d_matrix() const { return d_; }
  const Eigen::VectorXd& r_vector() const { return r_; }

 private:
  int kmax_;
  Eigen::MatrixXd g_;
  Eigen::MatrixXd h_;
  Eigen::MatrixXd d_;
  Eigen::VectorXd r_;
};

inline CoefficientTable build_table(int kmax) { return CoefficientTable(kmax); }

// |sum_{j != k, j <= jmax} g_kj^2 (+ 4k^2/jmax) - r_k|.
double verify_g_squared_sum(int k, long jmax, bool tail_correct);

// Residual of sum_{l <= ltrunc} g_kl g_jl (+ 4kj(-1)^{k+j}/ltrunc) against d_kj.
double gram_residual(int k, int j, long ltrunc, bool tail_correct);

// Partial sum of g_kl g_jl over l in [l_first, l_last].
double gram_partial_sum(int k, int j, long l_first, long l_last);

// Max of gram_residual over 1 <= k, j <= kmax.
double verify_gram_identity(int kmax, long ltrunc, bool tail_correct);

// Magnitude of the first neglected tail term after the 1/L correction:
// the truncated sums miss 4kj(-1)^{k+j}(1/L - 1/(2L^2) + ...), so the
// leading-order corrected residual is ~ 2kj/L^2.
double gram_next_order_tail(int k, int j, long ltrunc);

}  // namespace optomech
