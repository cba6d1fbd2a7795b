#include "gp/surrogate.hpp"

#include "core/errors.hpp"

#include <Eigen/Cholesky>

namespace pf2es::gp {

Matrix robust_cholesky(const Matrix& covariance, double* jitter_used) {
  const auto q = covariance.rows();
  const double scale = std::max(covariance.diagonal().cwiseAbs().mean(), 1e-300);
  double jitter = 0.0;
  while (true) {
    Matrix a = covariance;
    a.diagonal().array() += jitter * scale;
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() == Eigen::Success) {
      if (jitter_used != nullptr) *jitter_used = jitter * scale;
      return llt.matrixL();
    }
    jitter = jitter == 0.0 ? 1e-15 : jitter * 10.0;
    if (jitter > 1e-2 * (1.0 + 1e-9)) break;
  }
  throw NumericalError("joint posterior covariance of size " + std::to_string(q) +
                       " is not positive definite after jitter escalation");
}

IndependentGPSurrogate IndependentGPSurrogate::fit_map(const Dataset& data, const Bounds& bounds, int num_objectives,
                                                       int num_constraints, const HyperpriorConfig& prior) {
  if (num_objectives < 1 || num_constraints < 0) throw ContractError("surrogate: bad output counts");
  data.validate(bounds, num_objectives + num_constraints);
  if (data.size() < 2) throw ContractError("surrogate: at least two observations are required");

  IndependentGPSurrogate s;
  s.bounds_ = bounds;
  s.num_objectives_ = num_objectives;
  s.num_constraints_ = num_constraints;
  s.data_ = data;
  s.max_jitter_ = prior.max_jitter;
  const Matrix unit = s.to_unit_rows(data.inputs);
  for (int k = 0; k < s.num_outputs(); ++k) {
    const Vector y = data.outputs.col(k);
    const auto st = Standardization::from(y);
    const Vector t = ((y.array() - st.offset) / st.scale).matrix();
    auto hyper = fit_hyperparameters(unit, t, prior, k);
    s.standardization_.push_back(st);
    s.models_.emplace_back(unit, t, std::move(hyper), k, prior.max_jitter);
  }
  return s;
}

IndependentGPSurrogate IndependentGPSurrogate::from_hyperparameters(const Dataset& data, const Bounds& bounds,
                                                                    int num_objectives, int num_constraints,
                                                                    std::vector<GPHyperparameters> hyper,
                                                                    std::vector<Standardization> standardization,
                                                                    double max_jitter) {
  const int outputs = num_objectives + num_constraints;
  if (static_cast<int>(hyper.size()) != outputs || static_cast<int>(standardization.size()) != outputs)
    throw ContractError("surrogate: one hyperparameter set and standardization per output required");
  data.validate(bounds, outputs);
  IndependentGPSurrogate s;
  s.bounds_ = bounds;
  s.num_objectives_ = num_objectives;
  s.num_constraints_ = num_constraints;
  s.data_ = data;
  s.max_jitter_ = max_jitter;
  s.standardization_ = std::move(standardization);
  const Matrix unit = s.to_unit_rows(data.inputs);
  for (int k = 0; k < outputs; ++k) {
    const auto& st = s.standardization_[k];
    const Vector t = ((data.outputs.col(k).array() - st.offset) / st.scale).matrix();
    s.models_.emplace_back(unit, t, hyper[k], k, max_jitter);
  }
  return s;
}

IndependentGPSurrogate IndependentGPSurrogate::condition_on(const Dataset& data) const {
  std::vector<GPHyperparameters> hyper;
  for (const auto& m : models_) hyper.push_back(m.hyper());
  return from_hyperparameters(data, bounds_, num_objectives_, num_constraints_, std::move(hyper), standardization_,
                              max_jitter_);
}

Vector IndependentGPSurrogate::to_unit(const Eigen::Ref<const Vector>& x) const {
  return ((x - bounds_.lower).array() / bounds_.range().array()).matrix();
}

Matrix IndependentGPSurrogate::to_unit_rows(const Matrix& xs) const {
  Matrix u = xs.rowwise() - bounds_.lower.transpose();
  return u.array().rowwise() / bounds_.range().transpose().array();
}

void IndependentGPSurrogate::predict(const Eigen::Ref<const Vector>& x, Vector& mean, Vector& variance) const {
  const Vector u = to_unit(x);
  mean.resize(num_outputs());
  variance.resize(num_outputs());
  for (int k = 0; k < num_outputs(); ++k) {
    double m = 0.0;
    double v = 0.0;
    models_[k].predict(u, m, v);
    const auto& st = standardization_[k];
    mean[k] = st.offset + st.scale * m;
    variance[k] = st.scale * st.scale * v;
  }
}

Vector IndependentGPSurrogate::predict_mean(const Eigen::Ref<const Vector>& x) const {
  const Vector u = to_unit(x);
  Vector mean(num_outputs());
  for (int k = 0; k < num_outputs(); ++k) {
    const auto& st = standardization_[k];
    mean[k] = st.offset + st.scale * models_[k].cross_covariance(u).dot(models_[k].alpha());
  }
  return mean;
}

MarginalGradient IndependentGPSurrogate::predict_with_gradient(const Eigen::Ref<const Vector>& x) const {
  const Vector u = to_unit(x);
  const Eigen::ArrayXd inv_range = bounds_.range().array().inverse();
  MarginalGradient g;
  g.mean.resize(num_outputs());
  g.variance.resize(num_outputs());
  g.dmean.resize(num_outputs(), dim());
  g.dvariance.resize(num_outputs(), dim());
  for (int k = 0; k < num_outputs(); ++k) {
    double m = 0.0;
    double v = 0.0;
    Vector dm;
    Vector dv;
    models_[k].predict_with_gradient(u, m, v, dm, dv);
    const double s = standardization_[k].scale;
    g.mean[k] = standardization_[k].offset + s * m;
    g.variance[k] = s * s * v;
    g.dmean.row(k) = (s * dm.array() * inv_range).matrix().transpose();
    g.dvariance.row(k) = (s * s * dv.array() * inv_range).matrix().transpose();
  }
  return g;
}

PosteriorMoments IndependentGPSurrogate::posterior(const Matrix& points, bool joint) const {
  if (points.cols() != dim()) throw ContractError("posterior: query points have wrong dimension");
  const Matrix unit = to_unit_rows(points);
  PosteriorMoments pm;
  pm.mean.resize(points.rows(), num_outputs());
  pm.variance.resize(points.rows(), num_outputs());
  for (int k = 0; k < num_outputs(); ++k) {
    const auto& st = standardization_[k];
    if (joint) {
      Vector m;
      Matrix c;
      models_[k].predict_joint(unit, m, c);
      c *= st.scale * st.scale;
      pm.mean.col(k) = (st.offset + st.scale * m.array()).matrix();
      pm.variance.col(k) = c.diagonal().cwiseMax(0.0);
      pm.cholesky.push_back(robust_cholesky(c));
      pm.covariance.push_back(std::move(c));
    } else {
      for (Eigen::Index r = 0; r < points.rows(); ++r) {
        double m = 0.0;
        double v = 0.0;
        models_[k].predict(unit.row(r).transpose(), m, v);
        pm.mean(r, k) = st.offset + st.scale * m;
        pm.variance(r, k) = st.scale * st.scale * v;
      }
    }
  }
  return pm;
}

namespace {

// Forward-mode derivative of the Cholesky factor: dL = L Phi(L^{-1} dS L^{-T}),
// where Phi keeps the strict lower triangle and halves the diagonal.
Matrix cholesky_derivative(const Matrix& l, const Matrix& ds) {
  const auto lv = l.triangularView<Eigen::Lower>();
  Matrix tmp = lv.solve(ds);
  tmp = lv.solve(tmp.transpose()).transpose();
  Matrix phi = tmp.triangularView<Eigen::StrictlyLower>();
  phi.diagonal() = 0.5 * tmp.diagonal();
  return l * phi;
}

}  // namespace

JointGradient IndependentGPSurrogate::joint_with_gradient(const Matrix& points) const {
  if (points.cols() != dim()) throw ContractError("joint_with_gradient: query points have wrong dimension");
  const Matrix unit = to_unit_rows(points);
  const Eigen::ArrayXd inv_range = bounds_.range().array().inverse();
  const auto q = points.rows();
  const auto d = points.cols();
  JointGradient jg;
  for (int k = 0; k < num_outputs(); ++k) {
    const double s = standardization_[k].scale;
    Vector m;
    Matrix c;
    Matrix dm;
    std::vector<Matrix> dc;
    models_[k].predict_joint_with_gradient(unit, m, c, dm, dc);
    c *= s * s;
    const Matrix l = robust_cholesky(c);
    jg.mean.push_back((standardization_[k].offset + s * m.array()).matrix());
    jg.cholesky.push_back(l);
    Matrix dmean = s * dm;
    for (Eigen::Index i = 0; i < d; ++i) dmean.col(i) *= inv_range[i];
    jg.dmean.push_back(std::move(dmean));
    std::vector<Matrix> dl;
    dl.reserve(static_cast<std::size_t>(q * d));
    for (Eigen::Index li = 0; li < q; ++li) {
      for (Eigen::Index i = 0; i < d; ++i) {
        const Matrix ds = dc[static_cast<std::size_t>(li * d + i)] * (s * s * inv_range[i]);
        dl.push_back(cholesky_derivative(l, ds));
      }
    }
    jg.dcholesky.push_back(std::move(dl));
  }
  return jg;
}

}  // namespace pf2es::gp
