#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ringbind {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow. Identities with -inf are exact:
// adding an empty term leaves the accumulator untouched.
inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

// log sum of exp over a whole vector, shifted by the maximum.
inline double log_sum_exp(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// Compensated summation; keeps long normalization sums accurate to a few ulp
// regardless of length.
struct KahanSum {
  double sum = 0;
  double carry = 0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace ringbind
