#pragma once

#include "core/types.hpp"
#include "gp/gaussian_process.hpp"

#include <vector>

namespace pf2es::gp {

/// Posterior moments over a set of query points. `mean` and `variance` are
/// (points x outputs). For joint queries `covariance`/`cholesky` hold one
/// (q x q) matrix per output.
struct PosteriorMoments {
  Matrix mean;
  Matrix variance;
  std::vector<Matrix> covariance;
  std::vector<Matrix> cholesky;
};

/// Marginal moments at one point plus gradients with respect to the design
/// point in original units; rows of `dmean`/`dvariance` index outputs.
struct MarginalGradient {
  Vector mean;
  Vector variance;
  Matrix dmean;
  Matrix dvariance;
};

/// Joint moments at a q-batch with gradients. For output k:
///   dmean[k](l, i)        = d mean_l / d x_{l,i}
///   dcholesky[k][l*d + i] = d chol(cov) / d x_{l,i}
struct JointGradient {
  std::vector<Vector> mean;
  std::vector<Matrix> cholesky;
  std::vector<Matrix> dmean;
  std::vector<std::vector<Matrix>> dcholesky;
};

/// One MAP-fitted GP per output (objectives first, then constraints),
/// modelled independently. Immutable once built.
class IndependentGPSurrogate {
 public:
  IndependentGPSurrogate() = default;

  /// Fits every output by MAP. Requires at least two observations.
  static IndependentGPSurrogate fit_map(const Dataset& data, const Bounds& bounds, int num_objectives,
                                        int num_constraints, const HyperpriorConfig& prior = {});

  /// Builds from fixed hyperparameters and standardizations (no optimization).
  static IndependentGPSurrogate from_hyperparameters(const Dataset& data, const Bounds& bounds, int num_objectives,
                                                     int num_constraints, std::vector<GPHyperparameters> hyper,
                                                     std::vector<Standardization> standardization,
                                                     double max_jitter = 1e-2);

  /// Same hyperparameters and standardization, conditioned on new data.
  IndependentGPSurrogate condition_on(const Dataset& data) const;

  int num_objectives() const { return num_objectives_; }
  int num_constraints() const { return num_constraints_; }
  int num_outputs() const { return num_objectives_ + num_constraints_; }
  int dim() const { return static_cast<int>(bounds_.dim()); }
  const Bounds& bounds() const { return bounds_; }
  const Dataset& data() const { return data_; }
  const std::vector<GaussianProcess>& models() const { return models_; }
  const std::vector<Standardization>& standardization() const { return standardization_; }
  double max_jitter() const { return max_jitter_; }

  Vector to_unit(const Eigen::Ref<const Vector>& x) const;
  Matrix to_unit_rows(const Matrix& xs) const;

  /// Marginal mean and variance of every output at x.
  void predict(const Eigen::Ref<const Vector>& x, Vector& mean, Vector& variance) const;

  /// Posterior mean of every output at x.
  Vector predict_mean(const Eigen::Ref<const Vector>& x) const;

  MarginalGradient predict_with_gradient(const Eigen::Ref<const Vector>& x) const;

  /// Exact conditionals; with joint=true also the per-output batch covariance
  /// and its Cholesky factor (jitter escalated on failure, NumericalError if
  /// that is not enough).
  PosteriorMoments posterior(const Matrix& points, bool joint) const;

  JointGradient joint_with_gradient(const Matrix& points) const;

 private:
  Bounds bounds_;
  int num_objectives_ = 0;
  int num_constraints_ = 0;
  Dataset data_;
  std::vector<GaussianProcess> models_;
  std::vector<Standardization> standardization_;
  double max_jitter_ = 1e-2;
};

/// Cholesky factor of a PSD covariance with jitter escalation (starting at
/// zero, then 1e-15 x10 up to 1e-2 in units of the mean diagonal).
Matrix robust_cholesky(const Matrix& covariance, double* jitter_used = nullptr);

}  // namespace pf2es::gp
