#include "pf2es/pf2es.h"

#include "benchmarks/benchmarks.hpp"
#include "bo/loop.hpp"
#include "bo/record.hpp"
#include "core/errors.hpp"
#include "gp/surrogate.hpp"
#include "report/aggregate.hpp"
#include "report/manifest.hpp"
#include "report/runner.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>

struct pf2es_manifest {
  pf2es::report::Manifest manifest;
};

struct pf2es_record {
  pf2es::bo::BORunRecord record;
};

struct pf2es_surrogate {
  pf2es::gp::IndependentGPSurrogate model;
};

namespace {

thread_local std::string last_error;

pf2es_status fail(pf2es_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

// Runs `body`, translating library exceptions into status codes.
template <class F>
pf2es_status guarded(F&& body) {
  using namespace pf2es;
  try {
    body();
    return PF2ES_OK;
  } catch (const ContractError& e) {
    return fail(PF2ES_ERR_INVALID_ARGUMENT, e.what());
  } catch (const ConfigError& e) {
    return fail(PF2ES_ERR_CONFIG, e.what());
  } catch (const RegistryError& e) {
    return fail(PF2ES_ERR_UNKNOWN_PROBLEM, e.what());
  } catch (const NumericalError& e) {
    return fail(PF2ES_ERR_NUMERICAL, e.what());
  } catch (const FitError& e) {
    return fail(PF2ES_ERR_FIT, e.what());
  } catch (const UnsupportedDimensionError& e) {
    return fail(PF2ES_ERR_UNSUPPORTED, e.what());
  } catch (const IOError& e) {
    return fail(PF2ES_ERR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(PF2ES_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(PF2ES_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PF2ES_ERR_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw pf2es::ContractError(what);
}

}  // namespace

extern "C" {

const char* pf2es_version(void) { return "1.0.0"; }

const char* pf2es_last_error(void) { return last_error.c_str(); }

const char* pf2es_status_name(pf2es_status status) {
  switch (status) {
    case PF2ES_OK: return "ok";
    case PF2ES_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PF2ES_ERR_CONFIG: return "configuration error";
    case PF2ES_ERR_UNKNOWN_PROBLEM: return "unknown problem";
    case PF2ES_ERR_NUMERICAL: return "numerical failure";
    case PF2ES_ERR_FIT: return "surrogate fit failure";
    case PF2ES_ERR_UNSUPPORTED: return "unsupported";
    case PF2ES_ERR_IO: return "I/O error";
    case PF2ES_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void pf2es_string_free(char* s) { std::free(s); }

pf2es_status pf2es_list_problems(char** json_out) {
  return guarded([&] {
    require(json_out != nullptr, "json_out is null");
    nlohmann::json a = nlohmann::json::array();
    for (const auto& name : pf2es::benchmarks::problem_names()) {
      const auto& p = pf2es::benchmarks::get_problem(name);
      nlohmann::json e = {{"name", name},
                          {"dim", p.spec.dim()},
                          {"num_objectives", p.spec.num_objectives},
                          {"num_constraints", p.spec.num_constraints},
                          {"lower", std::vector<double>(p.spec.bounds.lower.begin(), p.spec.bounds.lower.end())},
                          {"upper", std::vector<double>(p.spec.bounds.upper.begin(), p.spec.bounds.upper.end())},
                          {"regret_reference",
                           std::vector<double>(p.regret_reference.begin(), p.regret_reference.end())},
                          {"ideal_hypervolume", p.ideal_hypervolume}};
      if (p.calibration_reference)
        e["calibration_reference"] =
            std::vector<double>(p.calibration_reference->begin(), p.calibration_reference->end());
      a.push_back(std::move(e));
    }
    *json_out = dup(a.dump(1));
  });
}

pf2es_status pf2es_problem_info(const char* name, int* dim, int* num_objectives, int* num_constraints) {
  return guarded([&] {
    require(name != nullptr, "name is null");
    const auto& p = pf2es::benchmarks::get_problem(name);
    if (dim) *dim = p.spec.dim();
    if (num_objectives) *num_objectives = p.spec.num_objectives;
    if (num_constraints) *num_constraints = p.spec.num_constraints;
  });
}

pf2es_status pf2es_problem_bounds(const char* name, double* lower, double* upper, int dim) {
  return guarded([&] {
    require(name != nullptr && lower != nullptr && upper != nullptr, "null argument");
    const auto& p = pf2es::benchmarks::get_problem(name);
    require(dim == p.spec.dim(), "dim does not match the problem");
    for (int i = 0; i < dim; ++i) {
      lower[i] = p.spec.bounds.lower[i];
      upper[i] = p.spec.bounds.upper[i];
    }
  });
}

pf2es_status pf2es_evaluate(const char* name, const double* x, int dim, double* out, int out_len) {
  return guarded([&] {
    require(name != nullptr && x != nullptr && out != nullptr, "null argument");
    const auto& p = pf2es::benchmarks::get_problem(name);
    require(dim == p.spec.dim(), "dim does not match the problem");
    require(out_len == p.spec.num_outputs(), "out_len must equal objectives + constraints");
    const pf2es::Vector y = p.spec.evaluate(Eigen::Map<const pf2es::Vector>(x, dim));
    for (int k = 0; k < out_len; ++k) out[k] = y[k];
  });
}

pf2es_status pf2es_default_config(const char* problem, char** json_out) {
  return guarded([&] {
    require(problem != nullptr && json_out != nullptr, "null argument");
    pf2es::benchmarks::get_problem(problem);
    pf2es::bo::RunConfig c;
    c.problem = problem;
    *json_out = dup(pf2es::bo::config_to_json(c));
  });
}

pf2es_status pf2es_run(const char* config_json, pf2es_record** out) {
  return guarded([&] {
    require(config_json != nullptr && out != nullptr, "null argument");
    const auto config = pf2es::bo::config_from_json(config_json);
    pf2es::benchmarks::get_problem(config.problem);
    *out = new pf2es_record{pf2es::bo::run_bo(config)};
  });
}

pf2es_status pf2es_record_from_json(const char* json, pf2es_record** out) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    *out = new pf2es_record{pf2es::bo::record_from_json(json)};
  });
}

pf2es_status pf2es_record_to_json(const pf2es_record* record, int strip_timings, char** json_out) {
  return guarded([&] {
    require(record != nullptr && json_out != nullptr, "null argument");
    *json_out = dup(pf2es::bo::record_to_json(strip_timings ? pf2es::bo::strip_timings(record->record)
                                                             : record->record));
  });
}

pf2es_status pf2es_record_to_csv(const pf2es_record* record, int header, char** csv_out) {
  return guarded([&] {
    require(record != nullptr && csv_out != nullptr, "null argument");
    *csv_out = dup(pf2es::bo::record_to_csv(record->record, header != 0));
  });
}

pf2es_status pf2es_record_num_iterations(const pf2es_record* record, int* count) {
  return guarded([&] {
    require(record != nullptr && count != nullptr, "null argument");
    *count = static_cast<int>(record->record.iterations.size());
  });
}

pf2es_status pf2es_record_log_hv_difference(const pf2es_record* record, int iteration, double* value) {
  return guarded([&] {
    require(record != nullptr && value != nullptr, "null argument");
    require(iteration >= 0 && iteration < static_cast<int>(record->record.iterations.size()),
            "iteration out of range");
    *value = record->record.iterations[static_cast<std::size_t>(iteration)].log_hv_difference;
  });
}

pf2es_status pf2es_record_num_evaluations(const pf2es_record* record, int* count) {
  return guarded([&] {
    require(record != nullptr && count != nullptr, "null argument");
    *count = static_cast<int>(record->record.all_inputs().rows());
  });
}

pf2es_status pf2es_record_aborted(const pf2es_record* record, int* aborted) {
  return guarded([&] {
    require(record != nullptr && aborted != nullptr, "null argument");
    *aborted = record->record.aborted ? 1 : 0;
  });
}

void pf2es_record_free(pf2es_record* record) { delete record; }

pf2es_status pf2es_manifest_load(const char* path, pf2es_manifest** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new pf2es_manifest{pf2es::report::load_manifest(path)};
  });
}

pf2es_status pf2es_manifest_parse(const char* text, pf2es_manifest** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new pf2es_manifest{pf2es::report::parse_manifest(text)};
  });
}

pf2es_status pf2es_manifest_set_output_dir(pf2es_manifest* m, const char* dir) {
  return guarded([&] {
    require(m != nullptr && dir != nullptr && *dir != '\0', "null or empty argument");
    m->manifest.output_dir = dir;
  });
}

pf2es_status pf2es_manifest_set_workers(pf2es_manifest* m, int workers) {
  return guarded([&] {
    require(m != nullptr, "null manifest");
    if (workers < 1) throw pf2es::ConfigError("workers must be positive");
    m->manifest.workers = workers;
  });
}

pf2es_status pf2es_manifest_set_seed_base(pf2es_manifest* m, uint64_t seed_base) {
  return guarded([&] {
    require(m != nullptr, "null manifest");
    m->manifest.seed_base = seed_base;
  });
}

pf2es_status pf2es_manifest_set_sweep(pf2es_manifest* m, const char* parameter, const double* values, int count) {
  return guarded([&] {
    require(m != nullptr && parameter != nullptr, "null argument");
    if (count <= 0) throw pf2es::ConfigError("sweep value list is empty");
    require(values != nullptr, "values is null");
    pf2es::report::Sweep s;
    s.parameter = pf2es::report::sweep_parameter_from_string(parameter);
    s.values.assign(values, values + count);
    m->manifest.sweep = s;
  });
}

pf2es_status pf2es_manifest_output_dir(const pf2es_manifest* m, char** dir_out) {
  return guarded([&] {
    require(m != nullptr && dir_out != nullptr, "null argument");
    *dir_out = dup(m->manifest.output_dir);
  });
}

pf2es_status pf2es_manifest_num_runs(const pf2es_manifest* m, int* count) {
  return guarded([&] {
    require(m != nullptr && count != nullptr, "null argument");
    *count = static_cast<int>(m->manifest.resolved_runs().size());
  });
}

pf2es_status pf2es_manifest_run(const pf2es_manifest* m, pf2es_log_fn log, void* user, int* failed) {
  return guarded([&] {
    require(m != nullptr, "null manifest");
    const auto runs = m->manifest.resolved_runs();
    pf2es::report::LogSink sink;
    if (log != nullptr) sink = [log, user](const std::string& line) { log(line.c_str(), user); };
    const auto summary = pf2es::report::run_all(runs, m->manifest.output_dir, m->manifest.workers, sink);
    if (failed != nullptr) *failed = summary.failed;
  });
}

void pf2es_manifest_free(pf2es_manifest* m) { delete m; }

pf2es_status pf2es_aggregate(const char* records_dir, const char* out_dir, char** warnings_json) {
  return guarded([&] {
    require(records_dir != nullptr && out_dir != nullptr, "null argument");
    const auto result = pf2es::report::aggregate(pf2es::report::load_records(records_dir));
    pf2es::report::write_aggregate(result, out_dir);
    if (warnings_json != nullptr) *warnings_json = dup(nlohmann::json(result.warnings).dump());
  });
}

pf2es_status pf2es_surrogate_fit(const double* inputs, const double* outputs, int n, int dim, int num_objectives,
                                 int num_constraints, const double* lower, const double* upper, uint64_t seed,
                                 pf2es_surrogate** out) {
  return guarded([&] {
    require(inputs != nullptr && outputs != nullptr && lower != nullptr && upper != nullptr && out != nullptr,
            "null argument");
    require(n > 0 && dim > 0 && num_objectives > 0 && num_constraints >= 0, "bad sizes");
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const int outs = num_objectives + num_constraints;
    pf2es::Dataset data;
    data.inputs = Eigen::Map<const RowMajor>(inputs, n, dim);
    data.outputs = Eigen::Map<const RowMajor>(outputs, n, outs);
    const pf2es::Bounds bounds(Eigen::Map<const pf2es::Vector>(lower, dim), Eigen::Map<const pf2es::Vector>(upper, dim));
    pf2es::gp::HyperpriorConfig prior;
    prior.seed = seed;
    *out = new pf2es_surrogate{
        pf2es::gp::IndependentGPSurrogate::fit_map(data, bounds, num_objectives, num_constraints, prior)};
  });
}

pf2es_status pf2es_surrogate_predict(const pf2es_surrogate* s, const double* x, double* mean, double* variance) {
  return guarded([&] {
    require(s != nullptr && x != nullptr && mean != nullptr && variance != nullptr, "null argument");
    pf2es::Vector m, v;
    s->model.predict(Eigen::Map<const pf2es::Vector>(x, s->model.dim()), m, v);
    for (int k = 0; k < s->model.num_outputs(); ++k) {
      mean[k] = m[k];
      variance[k] = v[k];
    }
  });
}

void pf2es_surrogate_free(pf2es_surrogate* s) { delete s; }

}  // extern "C"
