#include "bo/config.hpp"

#include "core/errors.hpp"

namespace pf2es::bo {

std::string to_string(AcquisitionKind kind) {
  switch (kind) {
    case AcquisitionKind::pf2es: return "pf2es";
    case AcquisitionKind::qpf2es: return "qpf2es";
    case AcquisitionKind::mopi: return "mopi";
    case AcquisitionKind::random: return "random";
    case AcquisitionKind::pf2es_kb: return "pf2es_kb";
  }
  return "unknown";
}

AcquisitionKind acquisition_from_string(const std::string& name) {
  for (auto k : {AcquisitionKind::pf2es, AcquisitionKind::qpf2es, AcquisitionKind::mopi, AcquisitionKind::random,
                 AcquisitionKind::pf2es_kb})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown acquisition: " + name);
}

void RecommendationConfig::validate() const {
  if (!(initial_confidence > 0.0 && initial_confidence <= 1.0))
    throw ConfigError("recommendation: initial confidence must lie in (0, 1]");
  if (!(confidence_step > 0.0)) throw ConfigError("recommendation: confidence step must be positive");
  if (!(slack_fraction >= 0.0)) throw ConfigError("recommendation: slack fraction must be non-negative");
}

void RunConfig::validate() const {
  if (problem.empty()) throw ConfigError("run: problem name is empty");
  if (q < 1) throw ConfigError("run: q must be at least 1");
  if (acquisition == AcquisitionKind::pf2es && q != 1) throw ConfigError("run: pf2es requires q = 1");
  if (acquisition == AcquisitionKind::mopi && q != 1) throw ConfigError("run: mopi requires q = 1");
  if (iterations < 0) throw ConfigError("run: iterations must be non-negative");
  if (num_frontiers < 1) throw ConfigError("run: num_frontiers must be positive");
  if (n_features < 64) throw ConfigError("run: n_features must be at least 64");
  if (!(tau > 0.0)) throw ConfigError("run: tau must be positive");
  if (n_mc < 1) throw ConfigError("run: n_mc must be positive");
  if (calibration_samples < 1) throw ConfigError("run: calibration_samples must be positive");
  if (calibration_interval < 0) throw ConfigError("run: calibration_interval must be non-negative");
  if (initial_points == 0 || initial_points == 1) throw ConfigError("run: at least two initial points are needed");
  epsilon.validate();
  recommendation.validate();
  frontier_nsga.validate();
  recommendation_nsga.validate();
  if (optimizer.n_random < 1) throw ConfigError("run: optimizer n_random must be positive");
  if (optimizer.n_starts > optimizer.n_random) throw ConfigError("run: optimizer n_starts exceeds n_random");
}

}  // namespace pf2es::bo
