#include "bo/record.hpp"

#include "core/errors.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <limits>
#include <sstream>

namespace pf2es::bo {

using nlohmann::json;

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double num_of(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(num(m(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

Matrix matrix_of(const json& j, Eigen::Index cols) {
  Matrix m(static_cast<Eigen::Index>(j.size()), cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const auto& r = j.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(r.size()) != cols) throw ConfigError("record: ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = num_of(r.at(static_cast<std::size_t>(c)));
  }
  return m;
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

Vector vector_of(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = num_of(j.at(static_cast<std::size_t>(i)));
  return v;
}

json doubles_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::vector<double> doubles_of(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(num_of(x));
  return v;
}

// Rejects keys outside `allowed` so typos in hand-written configs surface.
void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

json nsga_json(const moo::NSGA2Config& c) {
  return {{"population", c.population},
          {"generations", c.generations},
          {"crossover_probability", c.crossover_probability},
          {"crossover_eta", c.crossover_eta},
          {"mutation_eta", c.mutation_eta},
          {"mutation_probability", c.mutation_probability},
          {"seed", c.seed}};
}

moo::NSGA2Config nsga_of(const json& j) {
  check_keys(j, {"population", "generations", "crossover_probability", "crossover_eta", "mutation_eta",
                 "mutation_probability", "seed"}, "nsga");
  moo::NSGA2Config c;
  c.population = j.value("population", c.population);
  c.generations = j.value("generations", c.generations);
  c.crossover_probability = j.value("crossover_probability", c.crossover_probability);
  c.crossover_eta = j.value("crossover_eta", c.crossover_eta);
  c.mutation_eta = j.value("mutation_eta", c.mutation_eta);
  c.mutation_probability = j.value("mutation_probability", c.mutation_probability);
  c.seed = j.value("seed", c.seed);
  return c;
}

json config_json(const RunConfig& c) {
  json prior = {{"lengthscale_log_mean", c.prior.lengthscale_log_mean},
                {"lengthscale_log_sd", c.prior.lengthscale_log_sd},
                {"variance_log_mean", c.prior.variance_log_mean},
                {"variance_log_sd", c.prior.variance_log_sd},
                {"min_lengthscale", c.prior.min_lengthscale},
                {"max_lengthscale", c.prior.max_lengthscale},
                {"min_variance", c.prior.min_variance},
                {"max_variance", c.prior.max_variance},
                {"noise_variance", c.prior.noise_variance},
                {"max_jitter", c.prior.max_jitter},
                {"restarts", c.prior.restarts},
                {"max_iterations", c.prior.max_iterations},
                {"seed", c.prior.seed}};
  return {{"problem", c.problem},
          {"acquisition", to_string(c.acquisition)},
          {"q", c.q},
          {"iterations", c.iterations},
          {"initial_points", c.initial_points},
          {"num_frontiers", c.num_frontiers},
          {"n_features", c.n_features},
          {"epsilon",
           {{"mode", c.epsilon.mode == partition::EpsilonMode::heuristic ? "heuristic" : "lower_bound"},
            {"c", c.epsilon.c}}},
          {"tau", c.tau},
          {"n_mc", c.n_mc},
          {"seed", c.seed},
          {"recommendation",
           {{"initial_confidence", c.recommendation.initial_confidence},
            {"confidence_step", c.recommendation.confidence_step},
            {"slack_fraction", c.recommendation.slack_fraction}}},
          {"frontier_nsga", nsga_json(c.frontier_nsga)},
          {"recommendation_nsga", nsga_json(c.recommendation_nsga)},
          {"optimizer",
           {{"n_random", c.optimizer.n_random},
            {"n_starts", c.optimizer.n_starts},
            {"max_iterations", c.optimizer.max_iterations},
            {"gradient_tolerance", c.optimizer.gradient_tolerance},
            {"seed", c.optimizer.seed}}},
          {"prior", prior},
          {"calibration_samples", c.calibration_samples},
          {"calibration_interval", c.calibration_interval},
          {"record_timings", c.record_timings},
          {"label", c.label}};
}

RunConfig config_of(const json& j) {
  check_keys(j, {"problem", "acquisition", "q", "iterations", "initial_points", "num_frontiers", "n_features",
                 "epsilon", "tau", "n_mc", "seed", "recommendation", "frontier_nsga", "recommendation_nsga",
                 "optimizer", "prior", "calibration_samples", "calibration_interval", "record_timings", "label"},
             "config");
  RunConfig c;
  c.problem = j.at("problem").get<std::string>();
  c.acquisition = acquisition_from_string(j.value("acquisition", std::string("pf2es")));
  c.q = j.value("q", c.q);
  c.iterations = j.value("iterations", c.iterations);
  c.initial_points = j.value("initial_points", c.initial_points);
  c.num_frontiers = j.value("num_frontiers", c.num_frontiers);
  c.n_features = j.value("n_features", c.n_features);
  if (j.contains("epsilon")) {
    const auto& e = j.at("epsilon");
    check_keys(e, {"mode", "c"}, "epsilon");
    const std::string mode = e.value("mode", std::string("heuristic"));
    if (mode == "heuristic")
      c.epsilon.mode = partition::EpsilonMode::heuristic;
    else if (mode == "lower_bound")
      c.epsilon.mode = partition::EpsilonMode::lower_bound;
    else
      throw ConfigError("unknown epsilon mode: " + mode);
    c.epsilon.c = e.value("c", c.epsilon.c);
  }
  c.tau = j.value("tau", c.tau);
  c.n_mc = j.value("n_mc", c.n_mc);
  c.seed = j.value("seed", c.seed);
  if (j.contains("recommendation")) {
    const auto& r = j.at("recommendation");
    check_keys(r, {"initial_confidence", "confidence_step", "slack_fraction"}, "recommendation");
    c.recommendation.initial_confidence = r.value("initial_confidence", c.recommendation.initial_confidence);
    c.recommendation.confidence_step = r.value("confidence_step", c.recommendation.confidence_step);
    c.recommendation.slack_fraction = r.value("slack_fraction", c.recommendation.slack_fraction);
  }
  if (j.contains("frontier_nsga")) c.frontier_nsga = nsga_of(j.at("frontier_nsga"));
  if (j.contains("recommendation_nsga")) c.recommendation_nsga = nsga_of(j.at("recommendation_nsga"));
  if (j.contains("optimizer")) {
    const auto& o = j.at("optimizer");
    check_keys(o, {"n_random", "n_starts", "max_iterations", "gradient_tolerance", "seed"}, "optimizer");
    c.optimizer.n_random = o.value("n_random", c.optimizer.n_random);
    c.optimizer.n_starts = o.value("n_starts", c.optimizer.n_starts);
    c.optimizer.max_iterations = o.value("max_iterations", c.optimizer.max_iterations);
    c.optimizer.gradient_tolerance = o.value("gradient_tolerance", c.optimizer.gradient_tolerance);
    c.optimizer.seed = o.value("seed", c.optimizer.seed);
  }
  if (j.contains("prior")) {
    const auto& p = j.at("prior");
    check_keys(p, {"lengthscale_log_mean", "lengthscale_log_sd", "variance_log_mean", "variance_log_sd",
                   "min_lengthscale", "max_lengthscale", "min_variance", "max_variance", "noise_variance",
                   "max_jitter", "restarts", "max_iterations", "seed"},
               "prior");
    auto& d = c.prior;
    d.lengthscale_log_mean = p.value("lengthscale_log_mean", d.lengthscale_log_mean);
    d.lengthscale_log_sd = p.value("lengthscale_log_sd", d.lengthscale_log_sd);
    d.variance_log_mean = p.value("variance_log_mean", d.variance_log_mean);
    d.variance_log_sd = p.value("variance_log_sd", d.variance_log_sd);
    d.min_lengthscale = p.value("min_lengthscale", d.min_lengthscale);
    d.max_lengthscale = p.value("max_lengthscale", d.max_lengthscale);
    d.min_variance = p.value("min_variance", d.min_variance);
    d.max_variance = p.value("max_variance", d.max_variance);
    d.noise_variance = p.value("noise_variance", d.noise_variance);
    d.max_jitter = p.value("max_jitter", d.max_jitter);
    d.restarts = p.value("restarts", d.restarts);
    d.max_iterations = p.value("max_iterations", d.max_iterations);
    d.seed = p.value("seed", d.seed);
  }
  c.calibration_samples = j.value("calibration_samples", c.calibration_samples);
  c.calibration_interval = j.value("calibration_interval", c.calibration_interval);
  c.record_timings = j.value("record_timings", c.record_timings);
  c.label = j.value("label", c.label);
  return c;
}

json hyper_json(const gp::GPHyperparameters& h) {
  return {{"signal_variance", h.signal_variance},
          {"lengthscales", vector_json(h.lengthscales)},
          {"noise_variance", h.noise_variance}};
}

gp::GPHyperparameters hyper_of(const json& j) {
  gp::GPHyperparameters h;
  h.signal_variance = j.at("signal_variance").get<double>();
  h.lengthscales = vector_of(j.at("lengthscales"));
  h.noise_variance = j.at("noise_variance").get<double>();
  return h;
}

}  // namespace

Matrix BORunRecord::all_inputs() const {
  Eigen::Index n = initial_inputs.rows();
  for (const auto& it : iterations) n += it.queries.rows();
  Matrix out(n, dim);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < initial_inputs.rows(); ++i) out.row(r++) = initial_inputs.row(i);
  for (const auto& it : iterations)
    for (Eigen::Index i = 0; i < it.queries.rows(); ++i) out.row(r++) = it.queries.row(i);
  return out;
}

Matrix BORunRecord::all_outputs() const {
  Eigen::Index n = initial_outputs.rows();
  for (const auto& it : iterations) n += it.observations.rows();
  Matrix out(n, num_objectives + num_constraints);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < initial_outputs.rows(); ++i) out.row(r++) = initial_outputs.row(i);
  for (const auto& it : iterations)
    for (Eigen::Index i = 0; i < it.observations.rows(); ++i) out.row(r++) = it.observations.row(i);
  return out;
}

std::string config_to_json(const RunConfig& config) { return config_json(config).dump(1); }

RunConfig config_from_json(const std::string& text) {
  try {
    return config_of(json::parse(text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::string record_to_json(const BORunRecord& r, int indent) {
  json j;
  j["schema"] = r.schema;
  j["config"] = config_json(r.config);
  j["dim"] = r.dim;
  j["num_objectives"] = r.num_objectives;
  j["num_constraints"] = r.num_constraints;
  j["initial_inputs"] = matrix_json(r.initial_inputs);
  j["initial_outputs"] = matrix_json(r.initial_outputs);
  j["aborted"] = r.aborted;
  j["abort_reason"] = r.abort_reason;
  j["used_feasibility_fallback"] = r.used_feasibility_fallback;
  json its = json::array();
  for (const auto& it : r.iterations) {
    json e;
    e["iteration"] = it.iteration;
    e["queries"] = matrix_json(it.queries);
    e["observations"] = matrix_json(it.observations);
    e["acquisition_value"] = num(it.acquisition_value);
    e["optimizer_warning"] = it.optimizer_warning;
    e["empty_frontiers"] = it.empty_frontiers;
    e["seed"] = it.seed;
    json hs = json::array();
    for (const auto& h : it.hyperparameters) hs.push_back(hyper_json(h));
    e["hyperparameters"] = hs;
    e["recommended_inputs"] = matrix_json(it.recommended_inputs);
    e["recommended_outputs"] = matrix_json(it.recommended_outputs);
    e["recommendation_confidence"] = num(it.recommendation_confidence);
    e["confidence_levels"] = doubles_json(it.confidence_levels);
    e["recommendation_empty"] = it.recommendation_empty;
    e["log_hv_difference"] = num(it.log_hv_difference);
    if (it.has_calibration) {
      e["calibration"] = {{"median", num(it.calibration_median)},
                          {"p10", num(it.calibration_p10)},
                          {"p90", num(it.calibration_p90)},
                          {"values", doubles_json(it.calibration_values)}};
    }
    if (it.timing) {
      const auto& t = *it.timing;
      e["timing"] = {{"fit", t.fit},
                     {"frontiers", t.frontiers},
                     {"acquisition", t.acquisition},
                     {"recommendation", t.recommendation},
                     {"calibration", t.calibration},
                     {"total", t.total}};
    }
    its.push_back(std::move(e));
  }
  j["iterations"] = its;
  return j.dump(indent);
}

BORunRecord record_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    BORunRecord r;
    r.schema = j.at("schema").get<std::string>();
    if (r.schema != kRecordSchema) throw ConfigError("record: unsupported schema " + r.schema);
    r.config = config_of(j.at("config"));
    r.dim = j.at("dim").get<int>();
    r.num_objectives = j.at("num_objectives").get<int>();
    r.num_constraints = j.at("num_constraints").get<int>();
    const int outs = r.num_objectives + r.num_constraints;
    r.initial_inputs = matrix_of(j.at("initial_inputs"), r.dim);
    r.initial_outputs = matrix_of(j.at("initial_outputs"), outs);
    r.aborted = j.at("aborted").get<bool>();
    r.abort_reason = j.at("abort_reason").get<std::string>();
    r.used_feasibility_fallback = j.at("used_feasibility_fallback").get<bool>();
    for (const auto& e : j.at("iterations")) {
      IterationRecord it;
      it.iteration = e.at("iteration").get<int>();
      it.queries = matrix_of(e.at("queries"), r.dim);
      it.observations = matrix_of(e.at("observations"), outs);
      it.acquisition_value = num_of(e.at("acquisition_value"));
      it.optimizer_warning = e.at("optimizer_warning").get<bool>();
      it.empty_frontiers = e.at("empty_frontiers").get<int>();
      it.seed = e.at("seed").get<std::uint64_t>();
      for (const auto& h : e.at("hyperparameters")) it.hyperparameters.push_back(hyper_of(h));
      it.recommended_inputs = matrix_of(e.at("recommended_inputs"), r.dim);
      it.recommended_outputs = matrix_of(e.at("recommended_outputs"), outs);
      it.recommendation_confidence = num_of(e.at("recommendation_confidence"));
      it.confidence_levels = doubles_of(e.at("confidence_levels"));
      it.recommendation_empty = e.at("recommendation_empty").get<bool>();
      it.log_hv_difference = num_of(e.at("log_hv_difference"));
      if (e.contains("calibration")) {
        const auto& c = e.at("calibration");
        it.has_calibration = true;
        it.calibration_median = num_of(c.at("median"));
        it.calibration_p10 = num_of(c.at("p10"));
        it.calibration_p90 = num_of(c.at("p90"));
        it.calibration_values = doubles_of(c.at("values"));
      }
      if (e.contains("timing")) {
        const auto& t = e.at("timing");
        it.timing = Timing{t.at("fit").get<double>(),         t.at("frontiers").get<double>(),
                           t.at("acquisition").get<double>(), t.at("recommendation").get<double>(),
                           t.at("calibration").get<double>(), t.at("total").get<double>()};
      }
      r.iterations.push_back(std::move(it));
    }
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("record: ") + e.what());
  }
}

namespace {

std::string fmt(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string record_to_csv(const BORunRecord& r, bool header) {
  std::ostringstream os;
  if (header) os << kCsvHeader << '\n';
  // Sweep tags ride along in the acquisition column: "pf2es[c=0.04]".
  const std::string acq = to_string(r.config.acquisition) + (r.config.label.empty() ? "" : "[" + r.config.label + "]");
  const std::string prefix = r.config.problem + "," + (acq.find(',') == std::string::npos ? acq : "\"" + acq + "\"") + "," +
                             std::to_string(r.config.q) + "," + std::to_string(r.config.seed) + ",";
  for (const auto& it : r.iterations) {
    const std::string row = prefix + std::to_string(it.iteration) + ",";
    os << row << "log_hv_difference," << fmt(it.log_hv_difference) << '\n';
    os << row << "recommendation_confidence," << fmt(it.recommendation_confidence) << '\n';
    os << row << "recommended_points," << it.recommended_inputs.rows() << '\n';
    if (it.has_calibration) {
      os << row << "calibration_median," << fmt(it.calibration_median) << '\n';
      os << row << "calibration_p10," << fmt(it.calibration_p10) << '\n';
      os << row << "calibration_p90," << fmt(it.calibration_p90) << '\n';
    }
  }
  return os.str();
}

BORunRecord strip_timings(BORunRecord record) {
  for (auto& it : record.iterations) it.timing.reset();
  return record;
}

}  // namespace pf2es::bo
