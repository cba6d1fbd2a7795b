#pragma once

#include "gp/surrogate.hpp"
#include "moo/nsga2.hpp"
#include "partition/partition.hpp"

#include <cstdint>
#include <vector>

namespace pf2es::acquisition {

inline constexpr double kLogFloor = 1e-12;

/// Everything the acquisition functions need for one BO iteration: one box
/// partition per (shifted) frontier sample and a fixed set of normal base
/// samples for the batch estimator.
struct AcquisitionState {
  std::vector<partition::BoxPartition> partitions;
  partition::EpsilonConfig epsilon;
  double tau = 1e-3;
  int n_mc = 128;
  int q = 1;
  int num_objectives = 0;
  int num_constraints = 0;
  Matrix base_samples;  // n_mc x (q * (M+C)); column k*q + l drives output k, batch element l
  /// Number of frontier samples that were empty and fell back to the
  /// feasibility-only partition.
  int empty_frontiers = 0;
};

struct StateOptions {
  partition::EpsilonConfig epsilon;
  double tau = 1e-3;
  int n_mc = 128;
  int q = 1;
  std::uint64_t seed = 0;
};

/// Shifts and decomposes each frontier. Empty frontiers become the
/// feasibility-only partition.
AcquisitionState build_state(const std::vector<moo::ParetoFrontierSample>& frontiers, int num_objectives,
                             int num_constraints, const StateOptions& options);

/// Same, from ready-made partitions.
AcquisitionState build_state(std::vector<partition::BoxPartition> partitions, int num_objectives,
                             int num_constraints, const StateOptions& options);

/// -mean_f log(1 - P_f), the inner term floored at kLogFloor.
double pf2es_from_probabilities(const std::vector<double>& probabilities);

/// Sequential acquisition at one design point (original units).
double pf2es(const AcquisitionState& state, const gp::IndependentGPSurrogate& surrogate,
             const Eigen::Ref<const Vector>& x);
double pf2es_with_gradient(const AcquisitionState& state, const gp::IndependentGPSurrogate& surrogate,
                           const Eigen::Ref<const Vector>& x, Vector& grad);

/// Batch acquisition. `batch` is (q x d). The hard variant replaces the
/// sigmoid relaxation by exact box indicators.
double qpf2es(const AcquisitionState& state, const gp::IndependentGPSurrogate& surrogate, const Matrix& batch,
              bool hard = false);
double qpf2es_with_gradient(const AcquisitionState& state, const gp::IndependentGPSurrogate& surrogate,
                            const Matrix& batch, Matrix& grad);

/// Probability of landing in the objective boxes of `partition` (constraints
/// ignored), and the probability of feasibility.
double mopi(const partition::BoxPartition& partition, const gp::IndependentGPSurrogate& surrogate,
            const Eigen::Ref<const Vector>& x);
double pof(const gp::IndependentGPSurrogate& surrogate, const Eigen::Ref<const Vector>& x);

/// mopi * pof, with gradient.
double mopi_pof_with_gradient(const partition::BoxPartition& partition, const gp::IndependentGPSurrogate& surrogate,
                              const Eigen::Ref<const Vector>& x, Vector* grad);

}  // namespace pf2es::acquisition
