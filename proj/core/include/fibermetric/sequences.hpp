// Exact rational iteration sequences used by the Moser-style bootstrapping:
//     p_1 = 1,  p_{k+1} = 2n p_k / (2n - p_k)
//     q_1 = e,  q_{k+1} = 2 q_k / (2 - p_k)      (q as a multiple of the
//                                                  base multi-index entry)
// together with the closed forms
//     p_k      = 2n / (2n - k + 1)                    (1 <= k <= 2n)
//     q_{k+1}  = (2n)! (n-k)! / (n! (2n-k)!) * q      (1 <= k <= n)
// and the separately printed final-step factor (2n)!/(n! 2^n), which does
// NOT match the recursion for any n >= 1; both are reported side by side so
// the discrepancy is visible in the emitted table.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fm {

// Exact rational with automatic normalization (gcd-reduced, den > 0).
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rational& o) const { return !(*this == o); }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
};

Rational factorial_ratio(int a, int b);  // a! / b!, exact (a, b >= 0)

struct SequenceRow {
  int k = 0;
  Rational p_recursion, p_closed;            // p_k two ways
  Rational q_recursion, q_closed;            // q_k / q two ways (k >= 2; q_1 = 1)
  bool p_match = false, q_match = false;
};

struct SequenceTable {
  int n = 0;
  std::vector<SequenceRow> rows;             // k = 1 .. k_max
  Rational q_final_recursion;                // q_{n+1} / q from the recursion
  Rational q_final_printed;                  // (2n)! / (n! 2^n)
  bool q_final_matches_printed = false;
};

// rows for k = 1..k_max; requires 1 <= k_max <= n + 1 (the recursion for q
// is defined only while p_k < 2, i.e. k <= n)
SequenceTable iteration_sequences(int n, int k_max);

}  // namespace fm
