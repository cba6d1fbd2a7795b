#pragma once

#include "bo/config.hpp"
#include "bo/record.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pf2es::report {

/// Called (serialized) with every progress-log line as it is written.
using LogSink = std::function<void(const std::string&)>;

struct RunSummary {
  int completed = 0;
  int failed = 0;
  std::vector<std::string> record_files;  // in run order, empty for failures
  std::vector<std::string> errors;
};

/// Record file name for a config, unique within one manifest.
std::string record_file_name(const bo::RunConfig& config);

/// Executes `runs` on a pool of `workers` threads. Writes one JSON record per
/// run under `out_dir`/runs, a progress.log, and summary.csv (rows in run
/// order). Configs are validated before anything is written; a ConfigError or
/// RegistryError then propagates with no files created.
RunSummary run_all(const std::vector<bo::RunConfig>& runs, const std::string& out_dir, int workers,
                   const LogSink& sink = {});

}  // namespace pf2es::report
