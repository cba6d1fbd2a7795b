#pragma once

#include "core/types.hpp"
#include "gp/matern52.hpp"

#include <Eigen/Cholesky>

#include <cstdint>

namespace pf2es::gp {

/// Kernel hyperparameters of one output, in internal units: inputs scaled to
/// the unit cube, outputs standardized to zero mean and unit variance.
struct GPHyperparameters {
  double signal_variance = 1.0;
  Vector lengthscales;
  double noise_variance = 1e-6;
};

/// Affine output transform y_std = (y - offset) / scale.
struct Standardization {
  double offset = 0.0;
  double scale = 1.0;

  static Standardization from(const Eigen::Ref<const Vector>& y);
};

/// Log-normal hyperpriors and optimizer settings for MAP fitting. The defaults
/// are implementation constants and are written into run records.
struct HyperpriorConfig {
  double lengthscale_log_mean = -0.6931471805599453;  // log 0.5
  double lengthscale_log_sd = 1.0;
  double variance_log_mean = 0.0;
  double variance_log_sd = 1.0;
  double min_lengthscale = 1e-2;
  double max_lengthscale = 1e2;
  double min_variance = 1e-2;
  double max_variance = 1e2;
  double noise_variance = 1e-6;
  double max_jitter = 1e-2;
  int restarts = 5;
  int max_iterations = 200;
  std::uint64_t seed = 0;
};

/// Log marginal likelihood of standardized targets under a Matérn-5/2 GP.
/// When `grad` is non-null it receives the derivative with respect to
/// [log signal_variance, log lengthscale_1..d]. Returns -inf if the Gram
/// matrix cannot be factorized even with `max_jitter`.
double log_marginal_likelihood(const Matrix& inputs, const Vector& targets, const GPHyperparameters& hyper,
                               double max_jitter, Vector* grad = nullptr);

/// Exact single-output GP posterior. Inputs are unit-cube coordinates, targets
/// are standardized; all predictions are returned in standardized units.
class GaussianProcess {
 public:
  GaussianProcess() = default;

  /// Factorizes K + (noise + jitter) I, escalating jitter x10 from the noise
  /// level up to max_jitter. Throws FitError on failure.
  GaussianProcess(Matrix inputs, Vector targets, GPHyperparameters hyper, int output_index, double max_jitter);

  const Matrix& inputs() const { return inputs_; }
  const Vector& targets() const { return targets_; }
  const GPHyperparameters& hyper() const { return hyper_; }
  const Matern52& kernel() const { return kernel_; }
  const Vector& alpha() const { return alpha_; }
  double diagonal_noise() const { return diagonal_noise_; }
  const Eigen::LLT<Matrix>& factor() const { return llt_; }

  Vector cross_covariance(const Eigen::Ref<const Vector>& x) const;

  void predict(const Eigen::Ref<const Vector>& x, double& mean, double& variance) const;

  /// Mean/variance with their gradients with respect to the unit-cube point.
  void predict_with_gradient(const Eigen::Ref<const Vector>& x, double& mean, double& variance, Vector& dmean,
                             Vector& dvariance) const;

  /// Joint posterior over q points (rows of xs).
  void predict_joint(const Matrix& xs, Vector& mean, Matrix& covariance) const;

  /// As predict_joint, plus dmean(l, i) = d mean_l / d x_{l,i} and
  /// dcov[l * d + i] = d covariance / d x_{l,i}.
  void predict_joint_with_gradient(const Matrix& xs, Vector& mean, Matrix& covariance, Matrix& dmean,
                                   std::vector<Matrix>& dcov) const;

 private:
  Matrix inputs_;
  Vector targets_;
  GPHyperparameters hyper_;
  Matern52 kernel_;
  Eigen::LLT<Matrix> llt_;
  Vector alpha_;
  double diagonal_noise_ = 0.0;
};

/// Multi-restart MAP estimate of one output's hyperparameters.
GPHyperparameters fit_hyperparameters(const Matrix& inputs, const Vector& targets, const HyperpriorConfig& prior,
                                      int output_index);

}  // namespace pf2es::gp
