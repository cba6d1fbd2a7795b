#include "gp/trajectory.hpp"

#include "core/errors.hpp"
#include "core/random.hpp"
#include "gp/vector_math.hpp"

#include <cmath>
#include <numbers>

namespace pf2es::gp {

namespace {

// Prior feature expansion of one output at a batch of unit-cube points.
Vector prior_path(const TrajectorySample::OutputPath& p, const Matrix& unit) {
  Matrix z = unit * p.frequencies.transpose();
  z.rowwise() += p.phases.transpose();
  cos_inplace(z.data(), static_cast<long>(z.size()));
  return z * p.weights;
}

}  // namespace

Matrix TrajectorySample::evaluate_batch(const Matrix& xs) const {
  Matrix unit = xs.rowwise() - bounds_.lower.transpose();
  unit = unit.array().rowwise() / bounds_.range().transpose().array();
  Matrix out(xs.rows(), num_outputs());
  for (int k = 0; k < num_outputs(); ++k) {
    const auto& p = paths_[k];
    const Vector f = prior_path(p, unit) + p.kernel.gram(unit, train_unit_) * p.update;
    out.col(k) = (p.offset + p.scale * f.array()).matrix();
  }
  return out;
}

Vector TrajectorySample::evaluate(const Eigen::Ref<const Vector>& x) const {
  Matrix row = x.transpose();
  return evaluate_batch(row).row(0).transpose();
}

TrajectorySample sample_trajectory(const IndependentGPSurrogate& surrogate, int n_features, std::uint64_t seed) {
  if (n_features < 64) throw ContractError("sample_trajectory: n_features must be at least 64");
  Rng rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
  // Matérn-nu spectral density is a multivariate Student-t with 2 nu dof.
  std::chi_squared_distribution<double> chi2(5.0);

  const auto d = surrogate.dim();
  const Matrix train_unit = surrogate.to_unit_rows(surrogate.data().inputs);
  std::vector<TrajectorySample::OutputPath> paths;
  for (int k = 0; k < surrogate.num_outputs(); ++k) {
    const auto& model = surrogate.models()[k];
    const auto& hyper = model.hyper();
    TrajectorySample::OutputPath p;
    p.frequencies.resize(n_features, d);
    p.phases.resize(n_features);
    p.weights.resize(n_features);
    const double amplitude = std::sqrt(2.0 * hyper.signal_variance / n_features);
    for (int j = 0; j < n_features; ++j) {
      const double t_scale = std::sqrt(5.0 / chi2(rng));
      for (Eigen::Index i = 0; i < d; ++i) p.frequencies(j, i) = normal(rng) * t_scale / hyper.lengthscales[i];
      p.phases[j] = uniform(rng);
      p.weights[j] = amplitude * normal(rng);
    }
    Vector residual = model.targets() - prior_path(p, train_unit);
    const double noise_sd = std::sqrt(model.diagonal_noise());
    for (Eigen::Index a = 0; a < residual.size(); ++a) residual[a] -= noise_sd * normal(rng);
    p.update = model.factor().solve(residual);
    p.kernel = model.kernel();
    p.offset = surrogate.standardization()[k].offset;
    p.scale = surrogate.standardization()[k].scale;
    paths.push_back(std::move(p));
  }
  return TrajectorySample(surrogate.bounds(), train_unit, std::move(paths), seed);
}

}  // namespace pf2es::gp
