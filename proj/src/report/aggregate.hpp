#pragma once

#include "bo/record.hpp"

#include <map>
#include <string>
#include <vector>

namespace pf2es::report {

/// Percentile band of one metric at one iteration across seeds.
struct BandPoint {
  int iteration = 0;
  int n = 0;
  double median = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// One (problem, acquisition, q, label) cell. Regret bands are 25-75,
/// calibration bands 10-90.
struct SeriesSummary {
  std::string problem;
  std::string acquisition;
  int q = 1;
  std::string label;
  int records = 0;
  std::vector<BandPoint> log_hv_difference;
  std::vector<BandPoint> calibration_median;
  std::vector<BandPoint> calibration_width;  // per-record p90 - p10

  std::string name() const;
};

struct AggregateResult {
  std::vector<SeriesSummary> series;  // sorted by key
  std::vector<std::string> warnings;

  std::string csv() const;
  /// Problem name -> SVG document of median regret curves with IQR bands.
  std::map<std::string, std::string> svgs() const;
};

inline constexpr const char* kAggregateHeader = "problem,acq,q,label,iteration,metric,n,median,lower,upper";

/// Records with differing budgets inside a cell are cut to the common
/// prefix and produce a warning.
AggregateResult aggregate(const std::vector<bo::BORunRecord>& records);

/// Reads every *.json record below `dir` (sorted by path). Throws IOError if
/// none are found.
std::vector<bo::BORunRecord> load_records(const std::string& dir);

/// Writes aggregate.csv and <problem>.svg into `out_dir`.
void write_aggregate(const AggregateResult& result, const std::string& out_dir);

}  // namespace pf2es::report
