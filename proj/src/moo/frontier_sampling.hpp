#pragma once

#include "gp/surrogate.hpp"
#include "gp/trajectory.hpp"
#include "moo/nsga2.hpp"

#include <cstdint>
#include <vector>

namespace pf2es::moo {

/// Runs NSGA-II on one trajectory bundle; objectives are the first M
/// trajectory outputs and constraints the remaining C.
ParetoFrontierSample frontier_of_trajectory(const gp::TrajectorySample& trajectory, const Bounds& bounds,
                                            int num_objectives, int num_constraints, const NSGA2Config& config);

/// Draws `count` independent trajectory bundles from the surrogate and
/// returns the NSGA-II frontier of each. On constrained problems the initial
/// populations are seeded with the training inputs unless the config already
/// carries seed points.
std::vector<ParetoFrontierSample> sample_pareto_frontiers(const gp::IndependentGPSurrogate& surrogate, int count,
                                                          int n_features, const NSGA2Config& config,
                                                          std::uint64_t seed);

}  // namespace pf2es::moo
