#pragma once

#include "gp/gaussian_process.hpp"
#include "moo/nsga2.hpp"
#include "optim/multistart.hpp"
#include "partition/partition.hpp"

#include <cstdint>
#include <string>

namespace pf2es::bo {

enum class AcquisitionKind { pf2es, qpf2es, mopi, random, pf2es_kb };

std::string to_string(AcquisitionKind kind);
/// Throws ConfigError on unknown names.
AcquisitionKind acquisition_from_string(const std::string& name);

struct RecommendationConfig {
  double initial_confidence = 0.95;
  double confidence_step = 0.05;
  double slack_fraction = 0.005;  // of each observed constraint range

  void validate() const;
};

struct RunConfig {
  std::string problem;
  AcquisitionKind acquisition = AcquisitionKind::pf2es;
  int q = 1;
  int iterations = 40;
  int initial_points = -1;  // negative means 2d + 1
  int num_frontiers = 5;
  int n_features = 512;
  partition::EpsilonConfig epsilon;
  double tau = 1e-3;
  int n_mc = 128;
  std::uint64_t seed = 0;
  RecommendationConfig recommendation;
  moo::NSGA2Config frontier_nsga;
  moo::NSGA2Config recommendation_nsga;
  optim::OptimizerConfig optimizer;
  gp::HyperpriorConfig prior;
  int calibration_samples = 10;
  /// Calibration summary every this many iterations (and always at the first
  /// and last record); 0 disables it.
  int calibration_interval = 1;
  /// Wall-clock timings make records differ between runs; switch off for
  /// byte-identical output.
  bool record_timings = true;
  /// Free-form tag carried into records and aggregation (e.g. "c=0.04").
  std::string label;

  void validate() const;
  int initial_design_size(int dim) const { return initial_points >= 0 ? initial_points : 2 * dim + 1; }
};

}  // namespace pf2es::bo
