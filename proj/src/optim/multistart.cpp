#include "optim/multistart.hpp"

#include "core/errors.hpp"
#include "core/random.hpp"
#include "optim/bounded_lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace pf2es::optim {

int OptimizerConfig::starts_for(int q, int d) const {
  const int s = n_starts >= 0 ? n_starts : std::min(10 * q * d, 100);
  return std::min(s, n_random);
}

OptimizerResult multistart_maximize(const AcquisitionObjective& acq, const Bounds& bounds, int q,
                                    const OptimizerConfig& config) {
  if (q < 1) throw ContractError("multistart: q must be positive");
  if (config.n_random < 1) throw ConfigError("multistart: n_random must be positive");
  if (config.n_starts > config.n_random) throw ConfigError("multistart: n_starts exceeds n_random");
  const auto d = bounds.dim();
  const auto n = static_cast<Eigen::Index>(q) * d;
  Vector lower(n), upper(n);
  for (int l = 0; l < q; ++l) {
    lower.segment(l * d, d) = bounds.lower;
    upper.segment(l * d, d) = bounds.upper;
  }

  Rng rng(config.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix cand(config.n_random, n);
  std::vector<double> vals(config.n_random);
  for (int r = 0; r < config.n_random; ++r) {
    for (Eigen::Index j = 0; j < n; ++j) cand(r, j) = lower[j] + u(rng) * (upper[j] - lower[j]);
    const double v = acq(cand.row(r).transpose(), nullptr);
    vals[r] = std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
  }
  std::vector<int> order(config.n_random);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] > vals[b]; });

  OptimizerResult res;
  res.starts = config.starts_for(q, static_cast<int>(d));
  res.best_random_value = vals[order.front()];
  Vector best = cand.row(order.front()).transpose();
  double best_value = res.best_random_value;
  bool any_ok = false;

  LbfgsOptions opts;
  opts.max_iterations = config.max_iterations;
  opts.gradient_tolerance = config.gradient_tolerance;
  const ValueAndGradient neg = [&](const Vector& z, Vector& g) {
    Vector grad;
    const double v = acq(z, &grad);
    g = -grad;
    return -v;
  };
  for (int s = 0; s < res.starts; ++s) {
    const Vector x0 = cand.row(order[s]).transpose();
    const auto r = minimize_bounded(neg, x0, lower, upper, opts);
    if (r.failed || !std::isfinite(r.value)) continue;
    any_ok = true;
    // Re-evaluate the value alone so the comparison matches value-only calls.
    const Vector x = r.x.cwiseMax(lower).cwiseMin(upper);
    const double v = acq(x, nullptr);
    if (v > best_value) {
      best_value = v;
      best = x;
    }
  }
  res.warning = !any_ok && res.starts > 0;
  res.value = best_value;
  res.batch.resize(q, d);
  for (int l = 0; l < q; ++l) res.batch.row(l) = best.segment(l * d, d).transpose();
  return res;
}

}  // namespace pf2es::optim
