#pragma once

#include "core/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pf2es::benchmarks {

/// Registered test problem. Reference points are stored as published (for the
/// minimization form); the *_max accessors give the negated points used with
/// the maximization-frame outputs of `spec.evaluator`.
struct BenchmarkProblem {
  ProblemSpec spec;
  Vector regret_reference;
  double ideal_hypervolume = 0.0;
  std::optional<Vector> calibration_reference;

  Vector regret_reference_max() const { return -regret_reference; }
  std::optional<Vector> calibration_reference_max() const {
    if (!calibration_reference) return std::nullopt;
    return Vector(-*calibration_reference);
  }
};

/// Names in registry order.
const std::vector<std::string>& problem_names();

/// Throws RegistryError for unknown names.
const BenchmarkProblem& get_problem(const std::string& name);

/// Evaluates a registered problem (maximization frame, constraints >= 0).
OutputVector evaluate_benchmark(const std::string& name, const Eigen::Ref<const Vector>& x);

}  // namespace pf2es::benchmarks
