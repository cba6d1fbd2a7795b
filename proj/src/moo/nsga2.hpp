#pragma once

#include "core/types.hpp"

#include <cstdint>
#include <functional>

namespace pf2es::moo {

/// Row-wise batch evaluation: (n x d) inputs -> (n x (M+C)) outputs.
using BatchFunction = std::function<Matrix(const Matrix&)>;

struct NSGA2Config {
  int population = 50;
  int generations = 300;
  double crossover_probability = 0.9;
  double crossover_eta = 15.0;
  double mutation_eta = 20.0;
  double mutation_probability = -1.0;  // negative means 1/d
  std::uint64_t seed = 0;
  /// Optional points injected into the initial population (clipped to the box).
  Matrix seed_points;

  void validate() const;
};

/// Finite feasible non-dominated set with the inputs that produced it.
struct ParetoFrontierSample {
  Matrix inputs;       // n x d
  Matrix objectives;   // n x M
  Matrix constraints;  // n x C

  Eigen::Index size() const { return objectives.rows(); }
  bool empty() const { return objectives.rows() == 0; }
};

/// Constrained NSGA-II (maximization). Constraint handling follows the
/// feasibility-first rule: feasible beats infeasible, infeasible points are
/// ranked by total violation. Returns the feasible non-dominated members of
/// the final population with duplicate objective vectors removed.
ParetoFrontierSample nsga2(const BatchFunction& fn, const Bounds& bounds, int num_objectives, int num_constraints,
                           const NSGA2Config& config);

}  // namespace pf2es::moo
