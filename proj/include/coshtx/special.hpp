#pragma once

// Overflow-safe elementary helpers shared by the evaluators.

#include <cmath>
#include <limits>
#include <numbers>
#include <span>

namespace coshtx::special {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kLn2 = std::numbers::ln2;

/// log cosh(t) = |t| + log((1 + e^{-2|t|})/2), exact for all finite t.
inline double log_cosh(double t) {
  t = std::fabs(t);
  return t + std::log1p(std::exp(-2.0 * t)) - kLn2;
}

/// log sinh(t) for t > 0; -inf at t = 0.
inline double log_sinh(double t) {
  if (t <= 0.0) return -kInf;
  if (t < 1.0) return std::log(std::sinh(t));
  return t + std::log1p(-std::exp(-2.0 * t)) - kLn2;
}

/// sinh(x)/x with the removable singularity filled in.
inline double sinhc(double x) {
  const double ax = std::fabs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0);
  }
  return std::sinh(ax) / ax;
}

inline double log_sinhc(double x) {
  const double ax = std::fabs(x);
  if (ax < 1.0) return std::log(sinhc(ax));
  return log_sinh(ax) - std::log(ax);
}

/// log(e^a + e^b) without overflow.
inline double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

inline double log_sum_exp(std::span<const double> xs) {
  double m = -kInf;
  for (double x : xs) m = std::max(m, x);
  if (m == -kInf || m == kInf) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

/// log(1 + e^a).
inline double log1p_exp(double a) {
  return a > 0.0 ? a + std::log1p(std::exp(-a)) : std::log1p(std::exp(a));
}

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace coshtx::special
