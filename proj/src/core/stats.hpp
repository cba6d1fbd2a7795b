#pragma once

#include <cmath>
#include <vector>

namespace pf2es {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }
inline double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

/// Inverse of the standard normal CDF on (0, 1).
double normal_quantile(double p);

/// Numerically stable logistic function.
inline double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

/// Linear-interpolation percentile (q in [0, 100]) of an unsorted sample.
double percentile(std::vector<double> values, double q);

inline double median(std::vector<double> values) { return percentile(std::move(values), 50.0); }

}  // namespace pf2es
