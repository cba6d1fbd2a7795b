#include "report/manifest.hpp"

#include "benchmarks/benchmarks.hpp"
#include "bo/record.hpp"
#include "core/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <tuple>

namespace pf2es::report {

using nlohmann::json;

namespace {

template <class T>
bool parse_number(const std::string& s, T& out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

// Plain scalars become bool/int/double where they parse fully; quoted ones stay strings.
json scalar_json(const YAML::Node& n) {
  const std::string s = n.Scalar();
  if (n.Tag() == "!") return s;
  if (s == "true" || s == "True") return true;
  if (s == "false" || s == "False") return false;
  if (s == "~" || s == "null") return nullptr;
  long long i = 0;
  if (parse_number(s, i)) return i;
  double d = 0.0;
  if (parse_number(s, d)) return d;
  return s;
}

json to_json(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Null: return nullptr;
    case YAML::NodeType::Scalar: return scalar_json(n);
    case YAML::NodeType::Sequence: {
      json a = json::array();
      for (const auto& e : n) a.push_back(to_json(e));
      return a;
    }
    case YAML::NodeType::Map: {
      json o = json::object();
      for (const auto& kv : n) {
        const auto key = kv.first.as<std::string>();
        if (o.contains(key)) throw ConfigError("manifest: duplicate key '" + key + "'");
        o[key] = to_json(kv.second);
      }
      return o;
    }
    default: return nullptr;
  }
}

void merge_into(json& base, const json& over) {
  for (const auto& [k, v] : over.items()) {
    if (v.is_object() && base.contains(k) && base[k].is_object())
      merge_into(base[k], v);
    else
      base[k] = v;
  }
}

json as_list(const json& v) { return v.is_array() ? v : json::array({v}); }

std::vector<std::uint64_t> seeds_of(const json& v) {
  std::vector<std::uint64_t> out;
  if (v.is_number_integer()) {
    const auto n = v.get<long long>();
    if (n < 1) throw ConfigError("manifest: seed count must be positive");
    for (long long i = 0; i < n; ++i) out.push_back(static_cast<std::uint64_t>(i));
    return out;
  }
  if (!v.is_array() || v.empty()) throw ConfigError("manifest: 'seeds' must be a count or a non-empty list");
  for (const auto& s : v) {
    if (!s.is_number_integer() || s.get<long long>() < 0)
      throw ConfigError("manifest: seeds must be non-negative integers");
    out.push_back(s.get<std::uint64_t>());
  }
  return out;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

Sweep sweep_of(const json& j) {
  if (!j.is_object()) throw ConfigError("manifest: 'sweep' must be a mapping");
  for (const auto& [k, _] : j.items())
    if (k != "parameter" && k != "values") throw ConfigError("manifest: unknown sweep key '" + k + "'");
  if (!j.contains("parameter") || !j["parameter"].is_string())
    throw ConfigError("manifest: sweep needs a 'parameter' string");
  Sweep s;
  s.parameter = sweep_parameter_from_string(j["parameter"].get<std::string>());
  if (!j.contains("values") || !j["values"].is_array()) throw ConfigError("manifest: sweep needs a 'values' list");
  for (const auto& v : j["values"]) {
    if (!v.is_number()) throw ConfigError("manifest: sweep values must be numbers");
    s.values.push_back(v.get<double>());
  }
  if (s.values.empty()) throw ConfigError("manifest: sweep value list is empty");
  return s;
}

}  // namespace

SweepParameter sweep_parameter_from_string(const std::string& name) {
  if (name == "c") return SweepParameter::c;
  if (name == "n_mc") return SweepParameter::n_mc;
  throw ConfigError("unknown sweep parameter: " + name + " (expected c or n_mc)");
}

std::string to_string(SweepParameter p) { return p == SweepParameter::c ? "c" : "n_mc"; }

std::vector<bo::RunConfig> expand_sweep(const std::vector<bo::RunConfig>& base, const Sweep& sweep) {
  if (sweep.values.empty()) throw ConfigError("sweep: value list is empty");
  std::vector<bo::RunConfig> out;
  for (const auto& cfg : base) {
    for (double v : sweep.values) {
      bo::RunConfig c = cfg;
      if (sweep.parameter == SweepParameter::c) {
        if (!(v >= 0.0)) throw ConfigError("sweep: c must be non-negative");
        c.epsilon.c = v;
      } else {
        if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError("sweep: n_mc values must be positive integers");
        c.n_mc = static_cast<int>(v);
      }
      const std::string tag = to_string(sweep.parameter) + "=" + format_value(v);
      c.label = c.label.empty() ? tag : c.label + "," + tag;
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<bo::RunConfig> Manifest::resolved_runs() const {
  std::vector<bo::RunConfig> runs_out = sweep ? expand_sweep(runs, *sweep) : runs;
  std::set<std::tuple<std::string, std::string, int, std::string, std::uint64_t>> seen;
  for (auto& c : runs_out) {
    benchmarks::get_problem(c.problem);
    c.validate();
    if (!seen.emplace(c.problem, bo::to_string(c.acquisition), c.q, c.label, c.seed).second)
      throw ConfigError("manifest: seed " + std::to_string(c.seed) + " repeats for " + c.problem + "/" +
                        bo::to_string(c.acquisition) + "/q=" + std::to_string(c.q));
    c.seed += seed_base;
  }
  return runs_out;
}

Manifest parse_manifest(const std::string& text) {
  json root;
  try {
    root = to_json(YAML::Load(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("manifest: top level must be a mapping");
  for (const auto& [k, _] : root.items()) {
    static const std::set<std::string> allowed = {"schema", "output_dir", "workers", "seed_base",
                                                  "defaults", "runs", "sweep"};
    if (!allowed.count(k)) throw ConfigError("manifest: unknown key '" + k + "'");
  }
  if (!root.contains("schema") || root["schema"] != kManifestSchema)
    throw ConfigError(std::string("manifest: 'schema' must be ") + kManifestSchema);

  Manifest m;
  try {
    if (root.contains("output_dir")) m.output_dir = root["output_dir"].get<std::string>();
    if (root.contains("workers")) m.workers = root["workers"].get<int>();
    if (root.contains("seed_base")) m.seed_base = root["seed_base"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  if (m.workers < 1) throw ConfigError("manifest: workers must be positive");

  json defaults = root.value("defaults", json::object());
  if (!defaults.is_object()) throw ConfigError("manifest: 'defaults' must be a mapping");
  if (!root.contains("runs") || !root["runs"].is_array() || root["runs"].empty())
    throw ConfigError("manifest: 'runs' must be a non-empty list");

  int index = 0;
  for (const auto& entry : root["runs"]) {
    const std::string where = "manifest: runs[" + std::to_string(index++) + "]";
    if (!entry.is_object()) throw ConfigError(where + " must be a mapping");
    json base = defaults;
    json e = entry;
    if (!e.contains("seeds")) throw ConfigError(where + " needs 'seeds'");
    const auto seeds = seeds_of(e["seeds"]);
    e.erase("seeds");
    if (e.contains("seed")) throw ConfigError(where + ": use 'seeds', not 'seed'");
    const json acqs = as_list(e.value("acquisition", json("pf2es")));
    const json qs = as_list(e.value("q", json(1)));
    e.erase("acquisition");
    e.erase("q");
    merge_into(base, e);
    for (const auto& a : acqs) {
      for (const auto& q : qs) {
        for (auto s : seeds) {
          json c = base;
          c["acquisition"] = a;
          c["q"] = q;
          c["seed"] = s;
          try {
            m.runs.push_back(bo::config_from_json(c.dump()));
          } catch (const ConfigError& err) {
            throw ConfigError(where + ": " + err.what());
          }
        }
      }
    }
  }
  if (root.contains("sweep")) m.sweep = sweep_of(root["sweep"]);
  return m;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot read manifest " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

}  // namespace pf2es::report
