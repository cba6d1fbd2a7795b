#pragma once

#include "bo/config.hpp"
#include "gp/gaussian_process.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pf2es::bo {

inline constexpr const char* kRecordSchema = "pf2es-run/1";

struct Timing {
  double fit = 0.0;
  double frontiers = 0.0;
  double acquisition = 0.0;
  double recommendation = 0.0;
  double calibration = 0.0;
  double total = 0.0;
};

struct IterationRecord {
  int iteration = 0;
  Matrix queries;        // q x d (empty for the initial record)
  Matrix observations;   // q x (M+C)
  double acquisition_value = 0.0;
  bool optimizer_warning = false;
  int empty_frontiers = 0;
  std::uint64_t seed = 0;
  std::vector<gp::GPHyperparameters> hyperparameters;
  Matrix recommended_inputs;
  Matrix recommended_outputs;  // true function values at recommended_inputs
  double recommendation_confidence = 0.0;
  std::vector<double> confidence_levels;
  bool recommendation_empty = false;
  double log_hv_difference = 0.0;
  bool has_calibration = false;
  double calibration_median = 0.0;
  double calibration_p10 = 0.0;
  double calibration_p90 = 0.0;
  std::vector<double> calibration_values;
  std::optional<Timing> timing;
};

struct BORunRecord {
  std::string schema = kRecordSchema;
  RunConfig config;
  int dim = 0;
  int num_objectives = 0;
  int num_constraints = 0;
  Matrix initial_inputs;
  Matrix initial_outputs;
  std::vector<IterationRecord> iterations;  // index 0 is the initial design
  bool aborted = false;
  std::string abort_reason;
  /// Set when a frontier sample came back empty and the feasibility-only
  /// partition was used.
  bool used_feasibility_fallback = false;

  /// All evaluated inputs/outputs, initial design first.
  Matrix all_inputs() const;
  Matrix all_outputs() const;
};

std::string record_to_json(const BORunRecord& record, int indent = 1);
BORunRecord record_from_json(const std::string& text);

std::string config_to_json(const RunConfig& config);
RunConfig config_from_json(const std::string& text);

/// Header plus one row per (iteration, metric): problem,acq,q,seed,iteration,metric,value
std::string record_to_csv(const BORunRecord& record, bool header = true);
inline constexpr const char* kCsvHeader = "problem,acq,q,seed,iteration,metric,value";

/// Record with every timing section removed.
BORunRecord strip_timings(BORunRecord record);

}  // namespace pf2es::bo
