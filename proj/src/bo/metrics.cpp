#include "bo/metrics.hpp"

#include "core/errors.hpp"
#include "core/stats.hpp"
#include "moo/frontier_sampling.hpp"
#include "moo/hypervolume.hpp"

#include <cmath>

namespace pf2es::bo {

Recommendation recommend_out_of_sample(const gp::IndependentGPSurrogate& surrogate, const RecommendationConfig& rec,
                                       const moo::NSGA2Config& nsga) {
  rec.validate();
  const int m = surrogate.num_objectives();
  const int c = surrogate.num_constraints();
  const auto& h = surrogate.data().outputs;
  Recommendation out;
  out.slack = Vector::Zero(c);
  for (int j = 0; j < c; ++j)
    out.slack[j] = rec.slack_fraction * (h.col(m + j).maxCoeff() - h.col(m + j).minCoeff());

  moo::NSGA2Config cfg = nsga;
  if (c > 0 && cfg.seed_points.rows() == 0) cfg.seed_points = surrogate.data().inputs;
  double level = rec.initial_confidence;
  while (true) {
    out.tried.push_back(level);
    const double conf = level;
    const moo::BatchFunction fn = [&](const Matrix& xs) {
      Matrix y(xs.rows(), m + c);
      Vector mean, var;
      for (Eigen::Index i = 0; i < xs.rows(); ++i) {
        surrogate.predict(xs.row(i).transpose(), mean, var);
        y.row(i).head(m) = mean.head(m).transpose();
        for (int j = 0; j < c; ++j) {
          const double sd = std::sqrt(std::max(var[m + j], 0.0));
          const double p = sd > 0.0 ? 1.0 - normal_cdf((out.slack[j] - mean[m + j]) / sd)
                                    : (mean[m + j] >= out.slack[j] ? 1.0 : 0.0);
          y(i, m + j) = p - conf;
        }
      }
      return y;
    };
    const auto front = moo::nsga2(fn, surrogate.bounds(), m, c, cfg);
    if (!front.empty()) {
      out.inputs = front.inputs;
      out.confidence = level;
      out.predicted.resize(front.size(), m + c);
      for (Eigen::Index i = 0; i < front.size(); ++i)
        out.predicted.row(i) = surrogate.predict_mean(front.inputs.row(i).transpose()).transpose();
      return out;
    }
    level -= rec.confidence_step;
    // Guard against accumulated rounding leaving a tiny positive level.
    if (level <= 1e-9) break;
  }
  out.inputs.resize(0, surrogate.dim());
  out.predicted.resize(0, m + c);
  out.confidence = 0.0;
  out.empty = true;
  return out;
}

double log_hv_difference_of_outputs(const Matrix& outputs, const benchmarks::BenchmarkProblem& problem) {
  const int m = problem.spec.num_objectives;
  std::vector<Eigen::Index> feasible;
  for (Eigen::Index i = 0; i < outputs.rows(); ++i)
    if (is_feasible(outputs.row(i).tail(problem.spec.num_constraints).transpose())) feasible.push_back(i);
  Matrix f(static_cast<Eigen::Index>(feasible.size()), m);
  for (std::size_t t = 0; t < feasible.size(); ++t)
    f.row(static_cast<Eigen::Index>(t)) = outputs.row(feasible[t]).head(m);
  const double hv = moo::hypervolume(f, problem.regret_reference_max());
  return std::log10(std::max(problem.ideal_hypervolume - hv, 1e-12));
}

double log_hv_difference(const Matrix& inputs, const benchmarks::BenchmarkProblem& problem) {
  Matrix y(inputs.rows(), problem.spec.num_outputs());
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) y.row(i) = problem.spec.evaluate(inputs.row(i).transpose()).transpose();
  return log_hv_difference_of_outputs(y, problem);
}

CalibrationSummary uncertainty_calibration(const gp::IndependentGPSurrogate& surrogate, const Vector& ref,
                                           int n_samples, int n_features, const moo::NSGA2Config& nsga,
                                           std::uint64_t seed) {
  if (n_samples < 1) throw ConfigError("calibration: n_samples must be positive");
  const auto fronts = moo::sample_pareto_frontiers(surrogate, n_samples, n_features, nsga, seed);
  CalibrationSummary s;
  for (const auto& f : fronts) s.values.push_back(f.empty() ? 0.0 : moo::hypervolume(f.objectives, ref));
  s.median = median(s.values);
  s.p10 = percentile(s.values, 10.0);
  s.p90 = percentile(s.values, 90.0);
  return s;
}

}  // namespace pf2es::bo
