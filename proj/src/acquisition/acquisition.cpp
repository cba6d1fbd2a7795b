#include "acquisition/acquisition.hpp"

#include "acquisition/qmc.hpp"
#include "core/errors.hpp"
#include "core/stats.hpp"

#include <algorithm>
#include <cmath>

namespace pf2es::acquisition {

using partition::Box;
using partition::BoxPartition;

AcquisitionState build_state(std::vector<BoxPartition> partitions, int num_objectives, int num_constraints,
                             const StateOptions& options) {
  if (partitions.empty()) throw ContractError("acquisition: at least one frontier sample is required");
  if (!(options.tau > 0.0)) throw ConfigError("acquisition: tau must be positive");
  if (options.n_mc < 1) throw ConfigError("acquisition: n_mc must be positive");
  if (options.q < 1) throw ConfigError("acquisition: q must be positive");
  AcquisitionState s;
  s.partitions = std::move(partitions);
  s.epsilon = options.epsilon;
  s.tau = options.tau;
  s.n_mc = options.n_mc;
  s.q = options.q;
  s.num_objectives = num_objectives;
  s.num_constraints = num_constraints;
  for (const auto& p : s.partitions) s.empty_frontiers += p.feasibility_only ? 1 : 0;
  s.base_samples = normal_base_samples(options.n_mc, options.q * (num_objectives + num_constraints), options.seed);
  return s;
}

AcquisitionState build_state(const std::vector<moo::ParetoFrontierSample>& frontiers, int num_objectives,
                             int num_constraints, const StateOptions& options) {
  std::vector<BoxPartition> parts;
  parts.reserve(frontiers.size());
  for (const auto& f : frontiers) {
    if (f.empty()) {
      parts.push_back(partition::feasibility_partition(num_objectives, num_constraints));
    } else {
      const auto shifted = partition::shift_frontier(f, options.epsilon);
      parts.push_back(partition::decompose_non_dominated(shifted.objectives, num_objectives, num_constraints));
    }
  }
  return build_state(std::move(parts), num_objectives, num_constraints, options);
}

double pf2es_from_probabilities(const std::vector<double>& probabilities) {
  double acc = 0.0;
  for (double p : probabilities) acc -= std::log(std::max(1.0 - p, kLogFloor));
  return acc / static_cast<double>(probabilities.size());
}

namespace {

// Derivatives of P(lo < h < up) for h ~ N(mean, sd^2).
void interval_gradient(double lo, double up, double mean, double sd, double sentinel, double& dmean, double& dsd) {
  dmean = 0.0;
  dsd = 0.0;
  if (sd <= 0.0) return;
  if (up < sentinel) {
    const double z = (up - mean) / sd;
    const double phi = normal_pdf(z);
    dmean -= phi / sd;
    dsd -= phi * z / sd;
  }
  if (lo > -sentinel) {
    const double z = (lo - mean) / sd;
    const double phi = normal_pdf(z);
    dmean += phi / sd;
    dsd += phi * z / sd;
  }
}

// Gradient of non_dominated_probability with respect to means and sds.
void non_dominated_gradient(const BoxPartition& part, const Vector& mean, const Vector& sd, Vector& dmean,
                            Vector& dsd) {
  const int m = part.num_objectives;
  const auto n = mean.size();
  dmean = Vector::Zero(n);
  dsd = Vector::Zero(n);
  double total = 0.0;
  Vector dt_m = Vector::Zero(m);
  Vector dt_s = Vector::Zero(m);
  std::vector<double> iv(m), gm(m), gs(m);
  for (const Box& b : part.boxes) {
    for (int k = 0; k < m; ++k) {
      iv[k] = partition::interval_probability(b.lower[k], b.upper[k], mean[k], sd[k], part.sentinel);
      interval_gradient(b.lower[k], b.upper[k], mean[k], sd[k], part.sentinel, gm[k], gs[k]);
    }
    double prod = 1.0;
    for (int k = 0; k < m; ++k) prod *= iv[k];
    total += prod;
    for (int k = 0; k < m; ++k) {
      double others = 1.0;
      for (int j = 0; j < m; ++j)
        if (j != k) others *= iv[j];
      dt_m[k] += others * gm[k];
      dt_s[k] += others * gs[k];
    }
  }
  const auto c = n - m;
  std::vector<double> sv(c), sgm(c), sgs(c);
  double slab = 1.0;
  for (Eigen::Index j = 0; j < c; ++j) {
    sv[j] = partition::interval_probability(0.0, partition::kSentinel, mean[m + j], sd[m + j], partition::kSentinel);
    interval_gradient(0.0, partition::kSentinel, mean[m + j], sd[m + j], partition::kSentinel, sgm[j], sgs[j]);
    slab *= sv[j];
  }
  for (int k = 0; k < m; ++k) {
    dmean[k] = dt_m[k] * slab;
    dsd[k] = dt_s[k] * slab;
  }
  for (Eigen::Index j = 0; j < c; ++j) {
    double others = total;
    for (Eigen::Index t = 0; t < c; ++t)
      if (t != j) others *= sv[t];
    dmean[m + j] = others * sgm[j];
    dsd[m + j] = others * sgs[j];
  }
}

Vector sd_of(const Vector& variance) { return variance.cwiseMax(0.0).cwiseSqrt(); }

// Chain rule from (mean, sd) to x.
Vector to_x_gradient(const gp::MarginalGradient& g, const Vector& sd, const Vector& dmean, const Vector& dsd) {
  Vector grad = g.dmean.transpose() * dmean;
  for (Eigen::Index k = 0; k < sd.size(); ++k)
    if (sd[k] > 1e-150) grad += g.dvariance.row(k).transpose() * (dsd[k] / (2.0 * sd[k]));
  return grad;
}

}  // namespace

double pf2es(const AcquisitionState& state, const gp::IndependentGPSurrogate& surrogate,
             const Eigen::Ref<const Vector>& x) {
  Vector mean, var;
  surrogate.predict(x, mean, var);
  const Vector sd = sd_of(var);
  std::vector<double> probs;
  probs.reserve(state.partitions.size());
  for (const auto& p : state.partitions) probs.push_back(partition::non_dominated_probability(p, mean, sd));
  return pf2es_from_probabilities(probs);
}

double pf2es_with_gradient(const AcquisitionState& state, const gp::IndependentGPSurrogate& surrogate,
                           const Eigen::Ref<const Vector>& x, Vector& grad) {
  const auto g = surrogate.predict_with_gradient(x);
  const Vector sd = sd_of(g.variance);
  const double f = static_cast<double>(state.partitions.size());
  double value = 0.0;
  Vector dm_total = Vector::Zero(g.mean.size());
  Vector ds_total = Vector::Zero(g.mean.size());
  for (const auto& p : state.partitions) {
    const double prob = partition::non_dominated_probability(p, g.mean, sd);
    const double rest = 1.0 - prob;
    value -= std::log(std::max(rest, kLogFloor));
    if (rest > kLogFloor) {
      Vector dm, ds;
      non_dominated_gradient(p, g.mean, sd, dm, ds);
      dm_total += dm / rest;
      ds_total += ds / rest;
    }
  }
  grad = to_x_gradient(g, sd, dm_total, ds_total) / f;
  return value / f;
}

double mopi(const BoxPartition& part, const gp::IndependentGPSurrogate& surrogate, const Eigen::Ref<const Vector>& x) {
  Vector mean, var;
  surrogate.predict(x, mean, var);
  const Vector sd = sd_of(var);
  double total = 0.0;
  for (const Box& b : part.boxes) {
    double p = 1.0;
    for (int k = 0; k < part.num_objectives; ++k)
      p *= partition::interval_probability(b.lower[k], b.upper[k], mean[k], sd[k], part.sentinel);
    total += p;
  }
  return total;
}

double pof(const gp::IndependentGPSurrogate& surrogate, const Eigen::Ref<const Vector>& x) {
  Vector mean, var;
  surrogate.predict(x, mean, var);
  return partition::feasibility_probability(mean, sd_of(var), surrogate.num_objectives());
}

double mopi_pof_with_gradient(const BoxPartition& part, const gp::IndependentGPSurrogate& surrogate,
                              const Eigen::Ref<const Vector>& x, Vector* grad) {
  if (grad == nullptr) {
    Vector mean, var;
    surrogate.predict(x, mean, var);
    return partition::non_dominated_probability(part, mean, sd_of(var));
  }
  const auto g = surrogate.predict_with_gradient(x);
  const Vector sd = sd_of(g.variance);
  Vector dm, ds;
  non_dominated_gradient(part, g.mean, sd, dm, ds);
  *grad = to_x_gradient(g, sd, dm, ds);
  return partition::non_dominated_probability(part, g.mean, sd);
}

namespace {

struct Attained {
  double value = 0.0;
  int element = -1;
  int box = -1;
};

inline double soft_factor(double h, double lo, double up, double tau, double sentinel) {
  double v = 1.0;
  if (lo > -sentinel) v *= sigmoid((h - lo) / tau);
  if (up < sentinel) v *= sigmoid((up - h) / tau);
  return v;
}

inline double hard_factor(double h, double lo, double up, double sentinel) {
  const bool above = lo <= -sentinel || h > lo;
  const bool below = up >= sentinel || h < up;
  return (above && below) ? 1.0 : 0.0;
}

// d log(soft_factor) / dh
inline double soft_log_derivative(double h, double lo, double up, double tau, double sentinel) {
  double v = 0.0;
  if (lo > -sentinel) v += (1.0 - sigmoid((h - lo) / tau)) / tau;
  if (up < sentinel) v -= (1.0 - sigmoid((up - h) / tau)) / tau;
  return v;
}

// Draw h (q x K) for base-sample row s.
void draw(const AcquisitionState& st, const std::vector<Vector>& mean, const std::vector<Matrix>& chol, int s,
          Matrix& h) {
  const int q = st.q;
  const auto k_out = static_cast<int>(mean.size());
  h.resize(q, k_out);
  for (int k = 0; k < k_out; ++k) {
    const auto lambda = st.base_samples.row(s).segment(k * q, q).transpose();
    h.col(k) = mean[k] + chol[k].triangularView<Eigen::Lower>() * lambda;
  }
}

Attained best_membership(const BoxPartition& part, const Matrix& h, double tau, bool hard) {
  const int m = part.num_objectives;
  const auto k_out = h.cols();
  const double sen = part.sentinel;
  Attained best;
  for (Eigen::Index l = 0; l < h.rows(); ++l) {
    double slab = 1.0;
    for (Eigen::Index j = m; j < k_out; ++j)
      slab *= hard ? hard_factor(h(l, j), 0.0, sen, sen) : soft_factor(h(l, j), 0.0, sen, tau, sen);
    if (slab <= best.value) continue;
    for (std::size_t b = 0; b < part.boxes.size(); ++b) {
      const Box& box = part.boxes[b];
      double v = slab;
      for (int k = 0; k < m && v > best.value; ++k)
        v *= hard ? hard_factor(h(l, k), box.lower[k], box.upper[k], sen)
                  : soft_factor(h(l, k), box.lower[k], box.upper[k], tau, sen);
      if (v > best.value) {
        best.value = v;
        best.element = static_cast<int>(l);
        best.box = static_cast<int>(b);
      }
    }
  }
  best.value = std::min(best.value, 1.0);
  return best;
}

void check_batch(const AcquisitionState& st, const gp::IndependentGPSurrogate& surrogate, const Matrix& batch) {
  if (batch.rows() != st.q) throw ContractError("qpf2es: batch size does not match the acquisition state");
  if (batch.cols() != surrogate.dim()) throw ContractError("qpf2es: batch has wrong dimension");
  if (surrogate.num_outputs() != st.num_objectives + st.num_constraints)
    throw ContractError("qpf2es: surrogate outputs do not match the acquisition state");
}

}  // namespace

double qpf2es(const AcquisitionState& state, const gp::IndependentGPSurrogate& surrogate, const Matrix& batch,
              bool hard) {
  check_batch(state, surrogate, batch);
  const auto pm = surrogate.posterior(batch, true);
  std::vector<Vector> mean;
  for (int k = 0; k < surrogate.num_outputs(); ++k) mean.emplace_back(pm.mean.col(k));
  std::vector<double> z(state.partitions.size(), 0.0);
  Matrix h;
  for (int s = 0; s < state.n_mc; ++s) {
    draw(state, mean, pm.cholesky, s, h);
    for (std::size_t f = 0; f < state.partitions.size(); ++f)
      z[f] += best_membership(state.partitions[f], h, state.tau, hard).value;
  }
  for (auto& v : z) v /= state.n_mc;
  return pf2es_from_probabilities(z);
}

double qpf2es_with_gradient(const AcquisitionState& state, const gp::IndependentGPSurrogate& surrogate,
                            const Matrix& batch, Matrix& grad) {
  check_batch(state, surrogate, batch);
  const auto jg = surrogate.joint_with_gradient(batch);
  const int q = state.q;
  const auto d = batch.cols();
  const int k_out = surrogate.num_outputs();
  const int m = state.num_objectives;
  const std::size_t nf = state.partitions.size();

  std::vector<double> z(nf, 0.0);
  std::vector<std::vector<Attained>> hits(state.n_mc, std::vector<Attained>(nf));
  std::vector<Matrix> draws(state.n_mc);
  for (int s = 0; s < state.n_mc; ++s) {
    draw(state, jg.mean, jg.cholesky, s, draws[s]);
    for (std::size_t f = 0; f < nf; ++f) {
      hits[s][f] = best_membership(state.partitions[f], draws[s], state.tau, false);
      z[f] += hits[s][f].value;
    }
  }
  for (auto& v : z) v /= state.n_mc;

  grad = Matrix::Zero(q, d);
  for (std::size_t f = 0; f < nf; ++f) {
    const double rest = 1.0 - z[f];
    if (rest <= kLogFloor) continue;
    const double weight = 1.0 / (static_cast<double>(nf) * state.n_mc * rest);
    const auto& part = state.partitions[f];
    for (int s = 0; s < state.n_mc; ++s) {
      const Attained& a = hits[s][f];
      if (a.element < 0 || a.value <= 0.0 || a.value >= 1.0) continue;
      const Box& box = part.boxes[a.box];
      const int l = a.element;
      for (int k = 0; k < k_out; ++k) {
        const double lo = k < m ? box.lower[k] : 0.0;
        const double up = k < m ? box.upper[k] : part.sentinel;
        const double dh = weight * a.value * soft_log_derivative(draws[s](l, k), lo, up, state.tau, part.sentinel);
        if (dh == 0.0) continue;
        const auto lambda = state.base_samples.row(s).segment(k * q, q).transpose();
        for (Eigen::Index i = 0; i < d; ++i) grad(l, i) += dh * jg.dmean[k](l, i);
        for (int lp = 0; lp < q; ++lp)
          for (Eigen::Index i = 0; i < d; ++i)
            grad(lp, i) += dh * jg.dcholesky[k][static_cast<std::size_t>(lp * d + i)].row(l).dot(lambda);
      }
    }
  }
  return pf2es_from_probabilities(z);
}

}  // namespace pf2es::acquisition
