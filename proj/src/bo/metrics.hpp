#pragma once

#include "benchmarks/benchmarks.hpp"
#include "bo/config.hpp"
#include "gp/surrogate.hpp"
#include "moo/nsga2.hpp"

#include <cstdint>
#include <vector>

namespace pf2es::bo {

struct Recommendation {
  Matrix inputs;               // n x d
  Matrix predicted;            // n x (M+C) posterior means
  double confidence = 0.0;     // C_Fea level that produced the result
  std::vector<double> tried;   // every C_Fea level attempted, in order
  Vector slack;                // eta per constraint
  bool empty = false;
};

/// Out-of-sample recommendation: NSGA-II on the posterior means subject to
/// P(g_j >= eta_j) >= C_Fea for every constraint, backing C_Fea off until
/// the result is non-empty or C_Fea drops to zero.
Recommendation recommend_out_of_sample(const gp::IndependentGPSurrogate& surrogate, const RecommendationConfig& rec,
                                       const moo::NSGA2Config& nsga);

/// log10(ideal HV - HV) of the true, feasible outputs at `inputs`, floored at
/// 1e-12 before the log.
double log_hv_difference(const Matrix& inputs, const benchmarks::BenchmarkProblem& problem);

/// Same, from already evaluated true outputs (n x (M+C)).
double log_hv_difference_of_outputs(const Matrix& outputs, const benchmarks::BenchmarkProblem& problem);

struct CalibrationSummary {
  double median = 0.0;
  double p10 = 0.0;
  double p90 = 0.0;
  std::vector<double> values;
};

/// Hypervolume-indicator distribution of sampled frontiers w.r.t. `ref`
/// (maximization frame). Empty frontiers contribute zero.
CalibrationSummary uncertainty_calibration(const gp::IndependentGPSurrogate& surrogate, const Vector& ref,
                                           int n_samples, int n_features, const moo::NSGA2Config& nsga,
                                           std::uint64_t seed);

}  // namespace pf2es::bo
