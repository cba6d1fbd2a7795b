#include "gp/gaussian_process.hpp"

#include "core/errors.hpp"
#include "core/random.hpp"
#include "optim/bounded_lbfgs.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace pf2es::gp {

Standardization Standardization::from(const Eigen::Ref<const Vector>& y) {
  Standardization s;
  if (y.size() == 0) return s;
  s.offset = y.mean();
  const double var = y.size() > 1 ? (y.array() - s.offset).square().sum() / static_cast<double>(y.size()) : 0.0;
  const double sd = std::sqrt(var);
  s.scale = sd > 1e-12 * std::max(1.0, std::abs(s.offset)) ? sd : 1.0;
  return s;
}

namespace {

// Factorizes K + diag I with x10 escalation. Returns the diagonal actually
// used, or a negative value on failure.
double factorize(const Matrix& k, double noise, double max_jitter, Eigen::LLT<Matrix>& llt) {
  const auto n = k.rows();
  double jitter = 0.0;
  while (true) {
    Matrix a = k;
    a.diagonal().array() += noise + jitter;
    llt.compute(a);
    if (llt.info() == Eigen::Success) return noise + jitter;
    jitter = jitter == 0.0 ? std::max(noise, 1e-12) * 10.0 : jitter * 10.0;
    if (jitter > max_jitter * (1.0 + 1e-12)) return -1.0;
    (void)n;
  }
}

}  // namespace

double log_marginal_likelihood(const Matrix& inputs, const Vector& targets, const GPHyperparameters& hyper,
                               double max_jitter, Vector* grad) {
  const Matern52 kernel{hyper.signal_variance, hyper.lengthscales};
  const Matrix k = kernel.gram(inputs, inputs);
  Eigen::LLT<Matrix> llt;
  if (factorize(k, hyper.noise_variance, max_jitter, llt) < 0.0) return -std::numeric_limits<double>::infinity();
  const Vector alpha = llt.solve(targets);
  const auto n = static_cast<double>(targets.size());
  const Matrix l = llt.matrixL();
  const double logdet_half = l.diagonal().array().log().sum();
  const double value = -0.5 * targets.dot(alpha) - logdet_half - 0.5 * n * std::log(2.0 * std::numbers::pi);

  if (grad != nullptr) {
    const auto d = inputs.cols();
    grad->setZero(d + 1);
    const Matrix kinv = llt.solve(Matrix::Identity(inputs.rows(), inputs.rows()));
    const Matrix w = alpha * alpha.transpose() - kinv;
    (*grad)[0] = 0.5 * (w.array() * k.array()).sum();
    for (Eigen::Index a = 0; a < inputs.rows(); ++a) {
      for (Eigen::Index b = 0; b < a; ++b) {
        const Vector delta = inputs.row(a) - inputs.row(b);
        const double r = kernel.scaled_distance(inputs.row(a).transpose(), inputs.row(b).transpose());
        const double factor = kernel.derivative_factor(r);
        // Symmetric pair counted twice, times the 1/2 of the trace formula.
        const Eigen::ArrayXd dk = factor * (delta.array() / hyper.lengthscales.array()).square();
        grad->tail(d) += (w(a, b) * dk).matrix();
      }
    }
  }
  return value;
}

GaussianProcess::GaussianProcess(Matrix inputs, Vector targets, GPHyperparameters hyper, int output_index,
                                 double max_jitter)
    : inputs_(std::move(inputs)), targets_(std::move(targets)), hyper_(std::move(hyper)) {
  if (inputs_.rows() != targets_.size()) throw ContractError("gaussian process: inputs/targets size mismatch");
  kernel_ = Matern52{hyper_.signal_variance, hyper_.lengthscales};
  const Matrix k = kernel_.gram(inputs_, inputs_);
  diagonal_noise_ = factorize(k, hyper_.noise_variance, max_jitter, llt_);
  if (diagonal_noise_ < 0.0) throw FitError(output_index, "Cholesky factorization failed after jitter escalation");
  alpha_ = llt_.solve(targets_);
}

Vector GaussianProcess::cross_covariance(const Eigen::Ref<const Vector>& x) const {
  Vector k(inputs_.rows());
  for (Eigen::Index a = 0; a < inputs_.rows(); ++a) k[a] = kernel_(x, inputs_.row(a).transpose());
  return k;
}

void GaussianProcess::predict(const Eigen::Ref<const Vector>& x, double& mean, double& variance) const {
  const Vector k = cross_covariance(x);
  mean = k.dot(alpha_);
  const Vector v = llt_.matrixL().solve(k);
  variance = std::max(hyper_.signal_variance - v.squaredNorm(), 0.0);
}

void GaussianProcess::predict_with_gradient(const Eigen::Ref<const Vector>& x, double& mean, double& variance,
                                            Vector& dmean, Vector& dvariance) const {
  const auto n = inputs_.rows();
  const auto d = inputs_.cols();
  Vector k(n);
  Matrix jac(n, d);
  for (Eigen::Index a = 0; a < n; ++a) {
    const Vector xa = inputs_.row(a).transpose();
    const double r = kernel_.scaled_distance(x, xa);
    k[a] = kernel_.value_at(r);
    jac.row(a) = (-kernel_.derivative_factor(r) * ((x - xa).array() / hyper_.lengthscales.array().square())).matrix().transpose();
  }
  mean = k.dot(alpha_);
  dmean = jac.transpose() * alpha_;
  const Vector v = llt_.matrixL().solve(k);
  const double raw = hyper_.signal_variance - v.squaredNorm();
  if (raw > 0.0) {
    variance = raw;
    const Vector kinv_k = llt_.matrixU().solve(v);
    dvariance = -2.0 * jac.transpose() * kinv_k;
  } else {
    variance = 0.0;
    dvariance = Vector::Zero(d);
  }
}

void GaussianProcess::predict_joint(const Matrix& xs, Vector& mean, Matrix& covariance) const {
  const Matrix kxq = kernel_.gram(inputs_, xs);
  mean = kxq.transpose() * alpha_;
  const Matrix v = llt_.matrixL().solve(kxq);
  covariance = kernel_.gram(xs, xs) - v.transpose() * v;
  covariance = 0.5 * (covariance + covariance.transpose()).eval();
}

void GaussianProcess::predict_joint_with_gradient(const Matrix& xs, Vector& mean, Matrix& covariance, Matrix& dmean,
                                                  std::vector<Matrix>& dcov) const {
  const auto q = xs.rows();
  const auto d = xs.cols();
  const auto n = inputs_.rows();
  const Matrix kxq = kernel_.gram(inputs_, xs);
  mean = kxq.transpose() * alpha_;
  const Matrix v = llt_.matrixL().solve(kxq);
  const Matrix kq = kernel_.gram(xs, xs);
  covariance = kq - v.transpose() * v;
  covariance = 0.5 * (covariance + covariance.transpose()).eval();
  const Matrix b = llt_.matrixU().solve(v);  // K^{-1} k(X, xs)

  dmean.resize(q, d);
  dcov.assign(static_cast<std::size_t>(q * d), Matrix::Zero(q, q));
  for (Eigen::Index l = 0; l < q; ++l) {
    const Vector xl = xs.row(l).transpose();
    Matrix jac(n, d);
    for (Eigen::Index a = 0; a < n; ++a) jac.row(a) = kernel_.gradient_x(xl, inputs_.row(a).transpose()).transpose();
    dmean.row(l) = (jac.transpose() * alpha_).transpose();
    const Matrix proj = jac.transpose() * b;  // (d x q): dk_l^T K^{-1} k_b
    for (Eigen::Index i = 0; i < d; ++i) {
      Matrix& dc = dcov[static_cast<std::size_t>(l * d + i)];
      for (Eigen::Index bb = 0; bb < q; ++bb) {
        if (bb == l) {
          dc(l, l) = -2.0 * proj(i, l);
        } else {
          const double dk = kernel_.gradient_x(xl, xs.row(bb).transpose())[i];
          dc(l, bb) = dk - proj(i, bb);
          dc(bb, l) = dc(l, bb);
        }
      }
    }
  }
}

GPHyperparameters fit_hyperparameters(const Matrix& inputs, const Vector& targets, const HyperpriorConfig& prior,
                                      int output_index) {
  const auto d = inputs.cols();
  const auto np = d + 1;
  Vector lo(np), hi(np), mu(np), sd(np);
  lo[0] = std::log(prior.min_variance);
  hi[0] = std::log(prior.max_variance);
  mu[0] = prior.variance_log_mean;
  sd[0] = prior.variance_log_sd;
  for (Eigen::Index i = 1; i < np; ++i) {
    lo[i] = std::log(prior.min_lengthscale);
    hi[i] = std::log(prior.max_lengthscale);
    mu[i] = prior.lengthscale_log_mean;
    sd[i] = prior.lengthscale_log_sd;
  }

  auto unpack = [&](const Vector& p) {
    GPHyperparameters h;
    h.signal_variance = std::exp(p[0]);
    h.lengthscales = p.tail(d).array().exp();
    h.noise_variance = prior.noise_variance;
    return h;
  };
  const optim::ValueAndGradient objective = [&](const Vector& p, Vector& g) {
    Vector lml_grad;
    const double lml = log_marginal_likelihood(inputs, targets, unpack(p), prior.max_jitter, &lml_grad);
    if (!std::isfinite(lml)) {
      g.setZero(np);
      return std::numeric_limits<double>::infinity();
    }
    const Vector z = ((p - mu).array() / sd.array()).matrix();
    g = -(lml_grad - (z.array() / sd.array()).matrix());
    return -(lml - 0.5 * z.squaredNorm());
  };

  Rng rng(mix_seed(prior.seed, static_cast<std::uint64_t>(output_index), 0x6770));
  std::normal_distribution<double> normal;
  optim::LbfgsOptions opts;
  opts.max_iterations = prior.max_iterations;
  opts.gradient_tolerance = 1e-6;

  double best = std::numeric_limits<double>::infinity();
  Vector best_p;
  for (int r = 0; r < std::max(1, prior.restarts); ++r) {
    Vector p0 = mu;
    if (r > 0) {
      for (Eigen::Index i = 0; i < np; ++i) p0[i] = mu[i] + sd[i] * normal(rng);
    }
    p0 = p0.cwiseMax(lo).cwiseMin(hi);
    const auto res = optim::minimize_bounded(objective, p0, lo, hi, opts);
    if (!res.failed && std::isfinite(res.value) && res.value < best) {
      best = res.value;
      best_p = res.x;
    }
  }
  if (best_p.size() == 0) throw FitError(output_index, "no restart produced a finite marginal likelihood");
  return unpack(best_p);
}

}  // namespace pf2es::gp
