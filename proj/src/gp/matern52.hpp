#pragma once

#include "core/types.hpp"

namespace pf2es::gp {

inline constexpr double kSqrt5 = 2.23606797749978969641;

/// ARD Matérn-5/2 kernel on unit-cube inputs:
///   k(r) = s2 (1 + sqrt5 r + 5/3 r^2) exp(-sqrt5 r),  r^2 = sum ((x_i - y_i) / l_i)^2
struct Matern52 {
  double signal_variance = 1.0;
  Vector lengthscales;

  double scaled_distance(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const {
    return std::sqrt(((x - y).array() / lengthscales.array()).square().sum());
  }

  double value_at(double r) const { return signal_variance * (1.0 + kSqrt5 * r + 5.0 / 3.0 * r * r) * std::exp(-kSqrt5 * r); }

  double operator()(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const {
    return value_at(scaled_distance(x, y));
  }

  /// Common factor (5/3) s2 (1 + sqrt5 r) exp(-sqrt5 r) shared by all derivatives.
  double derivative_factor(double r) const {
    return 5.0 / 3.0 * signal_variance * (1.0 + kSqrt5 * r) * std::exp(-kSqrt5 * r);
  }

  /// Gradient of k(x, y) with respect to x.
  Vector gradient_x(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const {
    const double r = scaled_distance(x, y);
    return -derivative_factor(r) * ((x - y).array() / lengthscales.array().square()).matrix();
  }

  /// Gram matrix between row sets A (n x d) and B (m x d).
  Matrix gram(const Matrix& a, const Matrix& b) const;
};

}  // namespace pf2es::gp
