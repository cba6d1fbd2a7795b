#pragma once

#include "core/types.hpp"

#include <functional>

namespace pf2es::optim {

/// Objective returning f(x) and writing its gradient into `grad`.
using ValueAndGradient = std::function<double(const Vector& x, Vector& grad)>;

struct LbfgsOptions {
  int max_iterations = 100;
  double gradient_tolerance = 1e-6;
  int memory = 10;
  int max_backtracks = 40;
};

struct LbfgsResult {
  Vector x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Set when the start point was non-finite or no step could ever be accepted.
  bool failed = false;
};

/// Minimizes f over the box [lower, upper] with projected limited-memory BFGS.
/// Variables pinned at a bound by the gradient are frozen for the step; the
/// step itself is a backtracking Armijo search along the projected path.
LbfgsResult minimize_bounded(const ValueAndGradient& f, Vector x0, const Vector& lower, const Vector& upper,
                             const LbfgsOptions& options = {});

}  // namespace pf2es::optim
