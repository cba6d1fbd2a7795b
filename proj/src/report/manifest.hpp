#pragma once

#include "bo/config.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pf2es::report {

inline constexpr const char* kManifestSchema = "pf2es-manifest/1";

enum class SweepParameter { c, n_mc };

struct Sweep {
  SweepParameter parameter = SweepParameter::c;
  std::vector<double> values;
};

/// Parsed experiment manifest. Run seeds are stored relative to `seed_base`;
/// `resolved_runs` applies the base and any sweep.
struct Manifest {
  std::string output_dir = "results";
  int workers = 1;
  std::uint64_t seed_base = 0;
  std::vector<bo::RunConfig> runs;
  std::optional<Sweep> sweep;

  /// Final run list. Throws ConfigError if a seed repeats inside one
  /// (problem, acquisition, q, label) cell, or RegistryError for unknown problems.
  std::vector<bo::RunConfig> resolved_runs() const;
};

/// Parses the YAML manifest grammar documented in docs/manifest.md.
/// Every error is a ConfigError carrying the offending key or line.
Manifest parse_manifest(const std::string& text);
Manifest load_manifest(const std::string& path);

SweepParameter sweep_parameter_from_string(const std::string& name);
std::string to_string(SweepParameter p);

/// One clone of every config per value, tagged "<parameter>=<value>".
std::vector<bo::RunConfig> expand_sweep(const std::vector<bo::RunConfig>& base, const Sweep& sweep);

}  // namespace pf2es::report
