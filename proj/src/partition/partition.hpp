#pragma once

#include "core/types.hpp"
#include "moo/nsga2.hpp"

#include <optional>
#include <vector>

namespace pf2es::partition {

inline constexpr double kSentinel = 1e20;

enum class EpsilonMode { heuristic, lower_bound };

struct EpsilonConfig {
  EpsilonMode mode = EpsilonMode::heuristic;
  double c = 0.04;

  void validate() const;
};

/// Per-objective shift: c times the frontier range (heuristic) or the largest
/// adjacent gap of the sorted coordinates (lower_bound, M = 2 only).
Vector frontier_epsilon(const Matrix& objectives, const EpsilonConfig& config);

/// Adds the epsilon vector to every objective row; constraints untouched.
moo::ParetoFrontierSample shift_frontier(const moo::ParetoFrontierSample& frontier, const EpsilonConfig& config);

/// Axis-aligned box over the M objectives followed by the C constraints.
/// Coordinates at +/- sentinel are treated as unbounded.
struct Box {
  Vector lower;
  Vector upper;
};

/// Disjoint boxes covering the non-dominated feasible region of a frontier.
/// Every box spans [0, sentinel] on each constraint coordinate.
struct BoxPartition {
  std::vector<Box> boxes;
  int num_objectives = 0;
  int num_constraints = 0;
  double sentinel = kSentinel;
  /// True when built from an empty frontier: the whole objective range is
  /// non-dominated and only feasibility matters.
  bool feasibility_only = false;

  bool contains(const Eigen::Ref<const Vector>& point) const;
};

/// Partitions {f : no frontier row weakly dominates f} inside the objective
/// box [objective_lower, objective_upper] (default +/- sentinel). Duplicates
/// and weakly dominated rows are removed first. M = 1, 2 or 3.
BoxPartition decompose_non_dominated(const Matrix& frontier, int num_objectives, int num_constraints,
                                     double sentinel = kSentinel,
                                     const std::optional<Vector>& objective_lower = std::nullopt,
                                     const std::optional<Vector>& objective_upper = std::nullopt);

/// Partition of an empty frontier: one box, unbounded objectives, feasible slab.
BoxPartition feasibility_partition(int num_objectives, int num_constraints, double sentinel = kSentinel);

/// P(lower < h < upper) for independent Gaussian coordinates.
double box_probability(const Box& box, const Vector& mean, const Vector& sd, double sentinel = kSentinel);

/// Probability mass of one coordinate interval. Sentinel bounds are exact
/// limits; sd == 0 gives the indicator of lower <= mean <= upper.
double interval_probability(double lower, double upper, double mean, double sd, double sentinel = kSentinel);

/// Sum of objective-box probabilities times the shared constraint slab.
double non_dominated_probability(const BoxPartition& partition, const Vector& mean, const Vector& sd);

/// Product over constraints of P(g >= 0).
double feasibility_probability(const Vector& mean, const Vector& sd, int num_objectives);

}  // namespace pf2es::partition
