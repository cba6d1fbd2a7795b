// Command-line front end. Uses only the public C API.
#include "pf2es/pf2es.h"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

enum Exit { kSuccess = 0, kConfigError = 1, kRuntimeError = 2 };

int exit_code(pf2es_status s) {
  switch (s) {
    case PF2ES_OK: return kSuccess;
    case PF2ES_ERR_INVALID_ARGUMENT:
    case PF2ES_ERR_CONFIG:
    case PF2ES_ERR_UNKNOWN_PROBLEM: return kConfigError;
    default: return kRuntimeError;
  }
}

int report(pf2es_status s, const std::string& context) {
  std::cerr << "pf2es " << context << ": " << pf2es_status_name(s) << ": " << pf2es_last_error() << '\n';
  return exit_code(s);
}

struct RunOptions {
  std::string manifest;
  std::optional<std::string> out;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed_base;
  bool quiet = false;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("manifest", o.manifest, "Experiment manifest (YAML)")->required();
  cmd->add_option("--out", o.out, "Output directory (overrides the manifest)");
  cmd->add_option("--workers", o.workers, "Parallel runs (overrides the manifest)")->check(CLI::PositiveNumber);
  cmd->add_option("--seed-base", o.seed_base, "Offset added to every run seed");
  cmd->add_flag("--quiet", o.quiet, "Do not echo the progress log");
}

void echo_line(const char* line, void*) { std::fprintf(stderr, "%s\n", line); }

int run_manifest(const RunOptions& o, const std::string* sweep_parameter, const std::vector<double>* sweep_values) {
  pf2es_manifest* m = nullptr;
  auto s = pf2es_manifest_load(o.manifest.c_str(), &m);
  if (s != PF2ES_OK) return report(s, "manifest");
  struct Free {
    pf2es_manifest* m;
    ~Free() { pf2es_manifest_free(m); }
  } guard{m};

  if (o.out) s = pf2es_manifest_set_output_dir(m, o.out->c_str());
  if (s == PF2ES_OK && o.workers) s = pf2es_manifest_set_workers(m, *o.workers);
  if (s == PF2ES_OK && o.seed_base) s = pf2es_manifest_set_seed_base(m, *o.seed_base);
  if (s == PF2ES_OK && sweep_parameter)
    s = pf2es_manifest_set_sweep(m, sweep_parameter->c_str(), sweep_values->data(),
                                 static_cast<int>(sweep_values->size()));
  int runs = 0;
  if (s == PF2ES_OK) s = pf2es_manifest_num_runs(m, &runs);
  if (s != PF2ES_OK) return report(s, "manifest");

  int failed = 0;
  s = pf2es_manifest_run(m, o.quiet ? nullptr : echo_line, nullptr, &failed);
  if (s != PF2ES_OK) return report(s, "run");
  char* dir = nullptr;
  if (pf2es_manifest_output_dir(m, &dir) == PF2ES_OK) {
    std::cout << runs - failed << " of " << runs << " runs completed; records in " << dir << "/runs\n";
    pf2es_string_free(dir);
  }
  if (failed > 0) {
    std::cerr << "pf2es run: " << failed << " run(s) failed, see progress.log\n";
    return kRuntimeError;
  }
  return kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective Bayesian optimization experiments"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Execute every run in a manifest");
  add_run_options(run, run_opts);

  RunOptions sweep_opts;
  std::string parameter;
  std::vector<double> values;
  auto* sweep = app.add_subcommand("sweep", "Repeat a manifest for each value of c or n_mc");
  add_run_options(sweep, sweep_opts);
  sweep->add_option("--parameter", parameter, "c or n_mc")->required();
  sweep->add_option("--values", values, "Comma-separated values")->delimiter(',')->required();

  std::string records;
  std::optional<std::string> agg_out;
  auto* agg = app.add_subcommand("aggregate", "Summarize record files into CSV and SVG");
  agg->add_option("records", records, "Directory containing run records")->required();
  agg->add_option("--out", agg_out, "Output directory (default: the records directory)");

  auto* list = app.add_subcommand("list-problems", "Print the benchmark registry as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  if (*run) return run_manifest(run_opts, nullptr, nullptr);
  if (*sweep) return run_manifest(sweep_opts, &parameter, &values);
  if (*agg) {
    char* warnings = nullptr;
    const std::string out = agg_out.value_or(records);
    const auto s = pf2es_aggregate(records.c_str(), out.c_str(), &warnings);
    if (s != PF2ES_OK) return report(s, "aggregate");
    const std::string w = warnings;
    pf2es_string_free(warnings);
    if (w != "[]") std::cerr << "pf2es aggregate: warnings: " << w << '\n';
    std::cout << "wrote " << out << "/aggregate.csv\n";
    return kSuccess;
  }
  if (*list) {
    char* json = nullptr;
    const auto s = pf2es_list_problems(&json);
    if (s != PF2ES_OK) return report(s, "list-problems");
    std::cout << json << '\n';
    pf2es_string_free(json);
    return kSuccess;
  }
  return kConfigError;
}
