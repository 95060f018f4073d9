#include "optomech/coefficients.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "optomech/summation.hpp"

namespace optomech {
namespace {

int parity_sign(int k, int j) { return ((k + j) % 2 == 0) ? 1 : -1; }

void require_mode(int k) {
  if (k < 1) throw std::domain_error("mode index must be >= 1, got " + std::to_string(k));
}

void require_exact_range(int k, int j) {
  require_mode(k);
  require_mode(j);
  if (k > kExactModeLimit || j > kExactModeLimit)
    throw std::domain_error("exact coefficients are limited to modes <= 64");
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t div = std::gcd(num, den);
  num_ = div == 0 ? 0 : num / div;
  den_ = div == 0 ? 1 : den / div;
}

Rational operator+(const Rational& a, const Rational& b) {
  const std::int64_t l = std::lcm(a.den_, b.den_);
  return Rational(a.num_ * (l / a.den_) + b.num_ * (l / b.den_), l);
}

Rational operator*(const Rational& a, const Rational& b) {
  // Cross-reduce first to keep intermediates small.
  const std::int64_t g1 = std::gcd(a.num_, b.den_);
  const std::int64_t g2 = std::gcd(b.num_, a.den_);
  const std::int64_t n1 = g1 == 0 ? a.num_ : a.num_ / g1;
  const std::int64_t d2 = g1 == 0 ? b.den_ : b.den_ / g1;
  const std::int64_t n2 = g2 == 0 ? b.num_ : b.num_ / g2;
  const std::int64_t d1 = g2 == 0 ? a.den_ : a.den_ / g2;
  return Rational(n1 * n2, d1 * d2);
}

double g_coefficient(int k, int j) {
  require_mode(k);
  require_mode(j);
  if (k == j) return 0.0;
  const double kk = k, jj = j;
  return 2.0 * parity_sign(k, j) * kk * jj / (jj * jj - kk * kk);
}

double h_coefficient(int k, int j) {
  require_mode(k);
  require_mode(j);
  if (k == j) return 0.0;
  const double kk = k, jj = j;
  const double diff = kk * kk - jj * jj;
  return 8.0 * parity_sign(k, j) * kk * jj * jj * jj / (diff * diff);
}

double d_coefficient(int k, int j) {
  require_mode(k);
  require_mode(j);
  if (k == j) return r_coefficient(k);
  const double kk = k, jj = j;
  const double diff = kk * kk - jj * jj;
  return 4.0 * parity_sign(k, j) * kk * jj * (kk * kk + jj * jj) / (diff * diff);
}

double r_coefficient(int k) {
  require_mode(k);
  const double kk = k;
  return kk * kk * std::numbers::pi * std::numbers::pi / 3.0 + 0.25;
}

Rational g_exact(int k, int j) {
  require_exact_range(k, j);
  if (k == j) return Rational(0);
  const std::int64_t kk = k, jj = j;
  return Rational(2 * parity_sign(k, j) * kk * jj, jj * jj - kk * kk);
}

Rational h_exact(int k, int j) {
  require_exact_range(k, j);
  if (k == j) return Rational(0);
  const std::int64_t kk = k, jj = j;
  const std::int64_t diff = kk * kk - jj * jj;
  return Rational(8 * parity_sign(k, j) * kk * jj * jj * jj, diff * diff);
}

Rational d_exact(int k, int j) {
  require_exact_range(k, j);
  if (k == j) throw std::domain_error("diagonal d is irrational (r_k); use r_coefficient");
  const std::int64_t kk = k, jj = j;
  const std::int64_t diff = kk * kk - jj * jj;
  return Rational(4 * parity_sign(k, j) * kk * jj * (kk * kk + jj * jj), diff * diff);
}

CoefficientTable::CoefficientTable(int kmax)
    : kmax_(kmax) {
  if (kmax < 1) throw std::domain_error("coefficient table needs kmax >= 1");
  g_.resize(kmax, kmax);
  h_.resize(kmax, kmax);
  d_.resize(kmax, kmax);
  r_.resize(kmax);
  for (int k = 1; k <= kmax; ++k) {
    r_(k - 1) = r_coefficient(k);
    for (int j = 1; j <= kmax; ++j) {
      g_(k - 1, j - 1) = g_coefficient(k, j);
      h_(k - 1, j - 1) = h_coefficient(k, j);
      d_(k - 1, j - 1) = d_coefficient(k, j);
    }
  }
}

double verify_g_squared_sum(int k, long jmax, bool tail_correct) {
  require_mode(k);
  if (jmax <= k) throw std::domain_error("jmax must exceed k");
  CompensatedSum sum;
  // Smallest terms first.
  for (long j = jmax; j >= 1; --j) {
    if (j == k) continue;
    const double g = g_coefficient(k, static_cast<int>(j));
    sum.add(g * g);
  }
  if (tail_correct) sum.add(4.0 * k * k / static_cast<double>(jmax));
  return std::abs(sum.value() - r_coefficient(k));
}

double gram_partial_sum(int k, int j, long l_first, long l_last) {
  require_mode(k);
  require_mode(j);
  CompensatedSum sum;
  for (long l = l_last; l >= l_first; --l) {
    const int li = static_cast<int>(l);
    sum.add(g_coefficient(k, li) * g_coefficient(j, li));
  }
  return sum.value();
}

double gram_residual(int k, int j, long ltrunc, bool tail_correct) {
  double value = gram_partial_sum(k, j, 1, ltrunc);
  if (tail_correct) value += 4.0 * k * j * parity_sign(k, j) / static_cast<double>(ltrunc);
  return std::abs(value - d_coefficient(k, j));
}

double verify_gram_identity(int kmax, long ltrunc, bool tail_correct) {
  if (kmax < 2) throw std::domain_error("gram identity check needs kmax >= 2");
  if (ltrunc <= kmax) throw std::domain_error("ltrunc must exceed kmax");
  double worst = 0.0;
  for (int k = 1; k <= kmax; ++k)
    for (int j = k; j <= kmax; ++j) worst = std::max(worst, gram_residual(k, j, ltrunc, tail_correct));
  return worst;
}

double gram_next_order_tail(int k, int j, long ltrunc) {
  const double L = static_cast<double>(ltrunc);
  return 2.0 * k * j / (L * L);
}

}  // namespace optomech
