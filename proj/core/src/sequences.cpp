#include "fibermetric/sequences.hpp"

#include <numeric>
#include <stdexcept>

namespace fm {

namespace {

void check_overflow(std::int64_t a, std::int64_t b) {
  if (a != 0 && (std::abs(a) > INT64_MAX / 2 / std::max<std::int64_t>(1, std::abs(b))))
    throw std::overflow_error("Rational: product overflow");
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(std::abs(num), den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::operator+(const Rational& o) const {
  check_overflow(num, o.den);
  check_overflow(o.num, den);
  return Rational(num * o.den + o.num * den, den * o.den);
}

Rational Rational::operator-(const Rational& o) const {
  return *this + Rational(-o.num, o.den);
}

Rational Rational::operator*(const Rational& o) const {
  // cross-reduce before multiplying to keep intermediates small
  const std::int64_t g1 = std::gcd(std::abs(num), o.den);
  const std::int64_t g2 = std::gcd(std::abs(o.num), den);
  check_overflow(num / g1, o.num / g2);
  return Rational((num / g1) * (o.num / g2), (den / g2) * (o.den / g1));
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num == 0) throw std::invalid_argument("Rational: division by zero");
  return *this * Rational(o.den, o.num);
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational factorial_ratio(int a, int b) {
  if (a < 0 || b < 0) throw std::invalid_argument("factorial_ratio: negative");
  Rational r(1);
  if (a >= b)
    for (int i = b + 1; i <= a; ++i) r = r * Rational(i);
  else
    for (int i = a + 1; i <= b; ++i) r = r / Rational(i);
  return r;
}

SequenceTable iteration_sequences(int n, int k_max) {
  if (n < 1) throw std::invalid_argument("iteration_sequences: n must be >= 1");
  if (k_max < 1 || k_max > n + 1)
    throw std::invalid_argument("iteration_sequences: require 1 <= k_max <= n + 1");

  SequenceTable tab;
  tab.n = n;
  const Rational two_n(2 * n);

  Rational p(1), q(1);  // p_1 = 1, q_1 = e (tracked as q_k / q = 1)
  for (int k = 1; k <= k_max; ++k) {
    SequenceRow row;
    row.k = k;
    row.p_recursion = p;
    row.p_closed = two_n / Rational(2 * n - k + 1);
    row.p_match = (row.p_recursion == row.p_closed);
    row.q_recursion = q;
    // closed form q_{k+1} = (2n)!(n-k)!/(n!(2n-k)!) * q, i.e. at index k:
    // (2n)!(n-k+1)!/(n!(2n-k+1)!) for k >= 2; q_1/q = 1
    row.q_closed = (k == 1) ? Rational(1)
                            : factorial_ratio(2 * n, 2 * n - k + 1) /
                                  factorial_ratio(n, n - k + 1);
    row.q_match = (row.q_recursion == row.q_closed);
    tab.rows.push_back(row);

    // advance the recursion (q advance valid only while p_k < 2, k <= n)
    if (k <= n) {
      const Rational next_q = Rational(2) / (Rational(2) - p) * q;
      p = two_n * p / (two_n - p);
      q = next_q;
    }
  }

  // final-step factor q_{n+1}/q: recursion vs the printed (2n)!/(n! 2^n)
  Rational qr(1), pr(1);
  for (int k = 1; k <= n; ++k) {
    qr = Rational(2) / (Rational(2) - pr) * qr;
    pr = two_n * pr / (two_n - pr);
  }
  tab.q_final_recursion = qr;
  Rational pow2(1);
  for (int i = 0; i < n; ++i) pow2 = pow2 * Rational(2);
  tab.q_final_printed = factorial_ratio(2 * n, n) / pow2;
  tab.q_final_matches_printed = (tab.q_final_recursion == tab.q_final_printed);
  return tab;
}

}  // namespace fm
