#include "moo/frontier_sampling.hpp"

#include "core/errors.hpp"
#include "core/random.hpp"

namespace pf2es::moo {

ParetoFrontierSample frontier_of_trajectory(const gp::TrajectorySample& trajectory, const Bounds& bounds,
                                            int num_objectives, int num_constraints, const NSGA2Config& config) {
  const BatchFunction fn = [&](const Matrix& xs) { return trajectory.evaluate_batch(xs); };
  return nsga2(fn, bounds, num_objectives, num_constraints, config);
}

std::vector<ParetoFrontierSample> sample_pareto_frontiers(const gp::IndependentGPSurrogate& surrogate, int count,
                                                          int n_features, const NSGA2Config& config,
                                                          std::uint64_t seed) {
  if (count < 1) throw ConfigError("sample_pareto_frontiers: count must be positive");
  std::vector<ParetoFrontierSample> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const auto traj = gp::sample_trajectory(surrogate, n_features, mix_seed(seed, i, 1));
    NSGA2Config cfg = config;
    cfg.seed = mix_seed(seed, i, 2);
    if (surrogate.num_constraints() > 0 && cfg.seed_points.rows() == 0) cfg.seed_points = surrogate.data().inputs;
    out.push_back(frontier_of_trajectory(traj, surrogate.bounds(), surrogate.num_objectives(),
                                         surrogate.num_constraints(), cfg));
  }
  return out;
}

}  // namespace pf2es::moo
