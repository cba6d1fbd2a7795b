#include "moo/nsga2.hpp"

#include "core/errors.hpp"
#include "core/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace pf2es::moo {

void NSGA2Config::validate() const {
  if (population < 4 || population % 2 != 0) throw ConfigError("nsga2: population must be even and at least 4");
  if (generations < 0) throw ConfigError("nsga2: generations must be non-negative");
  if (crossover_probability < 0 || crossover_probability > 1) throw ConfigError("nsga2: bad crossover probability");
  if (crossover_eta < 0 || mutation_eta < 0) throw ConfigError("nsga2: distribution indices must be non-negative");
  if (mutation_probability > 1) throw ConfigError("nsga2: bad mutation probability");
}

namespace {

struct Population {
  Matrix x;
  Matrix f;            // objectives
  Matrix g;            // constraints
  Vector violation;    // sum of max(0, -g)
  std::vector<int> rank;
  std::vector<double> crowding;
};

// a constrained-dominates b
bool c_dominates(const Population& p, int a, int b) {
  const double va = p.violation[a];
  const double vb = p.violation[b];
  if (va == 0.0 && vb > 0.0) return true;
  if (va > 0.0 && vb == 0.0) return false;
  if (va > 0.0 && vb > 0.0) return va < vb;
  bool strict = false;
  for (Eigen::Index k = 0; k < p.f.cols(); ++k) {
    if (p.f(a, k) < p.f(b, k)) return false;
    if (p.f(a, k) > p.f(b, k)) strict = true;
  }
  return strict;
}

std::vector<std::vector<int>> sort_fronts(Population& p) {
  const int n = static_cast<int>(p.x.rows());
  std::vector<std::vector<int>> dominated_by_me(n);
  std::vector<int> count(n, 0);
  std::vector<std::vector<int>> fronts(1);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (c_dominates(p, i, j)) {
        dominated_by_me[i].push_back(j);
        ++count[j];
      } else if (c_dominates(p, j, i)) {
        dominated_by_me[j].push_back(i);
        ++count[i];
      }
    }
  }
  p.rank.assign(n, 0);
  for (int i = 0; i < n; ++i)
    if (count[i] == 0) fronts[0].push_back(i);
  std::size_t r = 0;
  while (r < fronts.size() && !fronts[r].empty()) {
    std::vector<int> next;
    for (int i : fronts[r]) {
      p.rank[i] = static_cast<int>(r);
      for (int j : dominated_by_me[i])
        if (--count[j] == 0) next.push_back(j);
    }
    std::sort(next.begin(), next.end());
    if (next.empty()) break;
    fronts.push_back(std::move(next));
    ++r;
  }
  return fronts;
}

void assign_crowding(Population& p, const std::vector<int>& front) {
  const double inf = std::numeric_limits<double>::infinity();
  for (int i : front) p.crowding[i] = 0.0;
  if (front.size() <= 2) {
    for (int i : front) p.crowding[i] = inf;
    return;
  }
  std::vector<int> order(front);
  for (Eigen::Index k = 0; k < p.f.cols(); ++k) {
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return p.f(a, k) < p.f(b, k); });
    const double lo = p.f(order.front(), k);
    const double hi = p.f(order.back(), k);
    p.crowding[order.front()] = inf;
    p.crowding[order.back()] = inf;
    if (hi - lo <= 0.0) continue;
    for (std::size_t t = 1; t + 1 < order.size(); ++t)
      p.crowding[order[t]] += (p.f(order[t + 1], k) - p.f(order[t - 1], k)) / (hi - lo);
  }
}

void evaluate(const BatchFunction& fn, int m, int c, Population& p) {
  const Matrix out = fn(p.x);
  if (out.rows() != p.x.rows() || out.cols() != m + c)
    throw ContractError("nsga2: evaluator returned the wrong shape");
  p.f = out.leftCols(m);
  p.g = out.rightCols(c);
  p.violation = Vector::Zero(p.x.rows());
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    double v = 0.0;
    for (int j = 0; j < c; ++j) {
      const double g = out(i, m + j);
      if (!(g >= 0.0)) v += std::isfinite(g) ? -g : std::numeric_limits<double>::max();
    }
    p.violation[i] = v;
  }
  for (Eigen::Index i = 0; i < p.f.rows(); ++i)
    for (int k = 0; k < m; ++k)
      if (std::isnan(p.f(i, k))) p.f(i, k) = -std::numeric_limits<double>::infinity();
}

bool better(const Population& p, int a, int b) {
  if (p.rank[a] != p.rank[b]) return p.rank[a] < p.rank[b];
  return p.crowding[a] > p.crowding[b];
}

// Simulated binary crossover for one coordinate pair, bounded variant.
void sbx(double& c1, double& c2, double lo, double hi, double eta, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double p1 = c1;
  const double p2 = c2;
  if (std::abs(p1 - p2) <= 1e-14) return;
  const double y1 = std::min(p1, p2);
  const double y2 = std::max(p1, p2);
  const double r = u(rng);
  auto betaq = [&](double beta) {
    const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
    if (r <= 1.0 / alpha) return std::pow(r * alpha, 1.0 / (eta + 1.0));
    return std::pow(1.0 / (2.0 - r * alpha), 1.0 / (eta + 1.0));
  };
  const double bq1 = betaq(1.0 + 2.0 * (y1 - lo) / (y2 - y1));
  const double bq2 = betaq(1.0 + 2.0 * (hi - y2) / (y2 - y1));
  double a = std::clamp(0.5 * ((y1 + y2) - bq1 * (y2 - y1)), lo, hi);
  double b = std::clamp(0.5 * ((y1 + y2) + bq2 * (y2 - y1)), lo, hi);
  if (u(rng) < 0.5) std::swap(a, b);
  c1 = a;
  c2 = b;
}

double polynomial_mutation(double y, double lo, double hi, double eta, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double span = hi - lo;
  const double d1 = (y - lo) / span;
  const double d2 = (hi - y) / span;
  const double r = u(rng);
  const double mpow = 1.0 / (eta + 1.0);
  double dq;
  if (r < 0.5) {
    const double v = 2.0 * r + (1.0 - 2.0 * r) * std::pow(1.0 - d1, eta + 1.0);
    dq = std::pow(v, mpow) - 1.0;
  } else {
    const double v = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * std::pow(1.0 - d2, eta + 1.0);
    dq = 1.0 - std::pow(v, mpow);
  }
  return std::clamp(y + dq * span, lo, hi);
}

Population select(const Population& merged, std::vector<std::vector<int>>& fronts, int n) {
  std::vector<int> chosen;
  Population tmp = merged;
  tmp.crowding.assign(merged.x.rows(), 0.0);
  for (auto& front : fronts) {
    assign_crowding(tmp, front);
    if (static_cast<int>(chosen.size() + front.size()) <= n) {
      chosen.insert(chosen.end(), front.begin(), front.end());
    } else {
      std::vector<int> order(front);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return tmp.crowding[a] > tmp.crowding[b]; });
      order.resize(n - chosen.size());
      chosen.insert(chosen.end(), order.begin(), order.end());
    }
    if (static_cast<int>(chosen.size()) == n) break;
  }
  Population out;
  out.x.resize(n, merged.x.cols());
  out.f.resize(n, merged.f.cols());
  out.g.resize(n, merged.g.cols());
  out.violation.resize(n);
  for (int i = 0; i < n; ++i) {
    out.x.row(i) = merged.x.row(chosen[i]);
    out.f.row(i) = merged.f.row(chosen[i]);
    out.g.row(i) = merged.g.row(chosen[i]);
    out.violation[i] = merged.violation[chosen[i]];
  }
  return out;
}

}  // namespace

ParetoFrontierSample nsga2(const BatchFunction& fn, const Bounds& bounds, int num_objectives, int num_constraints,
                           const NSGA2Config& config) {
  config.validate();
  if (num_objectives < 1 || num_constraints < 0) throw ContractError("nsga2: bad output counts");
  const int n = config.population;
  const auto d = bounds.dim();
  const double pm = config.mutation_probability < 0 ? 1.0 / static_cast<double>(d) : config.mutation_probability;
  Rng rng(config.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, n - 1);

  Population pop;
  pop.x.resize(n, d);
  const int injected = std::min<int>(n, static_cast<int>(config.seed_points.rows()));
  if (injected > 0 && config.seed_points.cols() != d) throw ContractError("nsga2: seed points have wrong dimension");
  for (int i = 0; i < n; ++i) {
    if (i < injected) {
      pop.x.row(i) = bounds.clip(config.seed_points.row(i).transpose()).transpose();
    } else {
      for (Eigen::Index j = 0; j < d; ++j) pop.x(i, j) = bounds.lower[j] + u(rng) * (bounds.range()[j]);
    }
  }
  evaluate(fn, num_objectives, num_constraints, pop);
  auto fronts = sort_fronts(pop);
  pop.crowding.assign(n, 0.0);
  for (const auto& fr : fronts) assign_crowding(pop, fr);

  for (int gen = 0; gen < config.generations; ++gen) {
    Population child;
    child.x.resize(n, d);
    auto tournament = [&]() {
      const int a = pick(rng);
      const int b = pick(rng);
      return better(pop, a, b) ? a : (better(pop, b, a) ? b : (u(rng) < 0.5 ? a : b));
    };
    for (int i = 0; i < n; i += 2) {
      const int pa = tournament();
      const int pb = tournament();
      Vector c1 = pop.x.row(pa).transpose();
      Vector c2 = pop.x.row(pb).transpose();
      if (u(rng) <= config.crossover_probability) {
        for (Eigen::Index j = 0; j < d; ++j)
          if (u(rng) <= 0.5) sbx(c1[j], c2[j], bounds.lower[j], bounds.upper[j], config.crossover_eta, rng);
      }
      for (Eigen::Index j = 0; j < d; ++j) {
        if (u(rng) < pm) c1[j] = polynomial_mutation(c1[j], bounds.lower[j], bounds.upper[j], config.mutation_eta, rng);
        if (u(rng) < pm) c2[j] = polynomial_mutation(c2[j], bounds.lower[j], bounds.upper[j], config.mutation_eta, rng);
      }
      child.x.row(i) = c1.transpose();
      child.x.row(i + 1) = c2.transpose();
    }
    evaluate(fn, num_objectives, num_constraints, child);

    Population merged;
    merged.x.resize(2 * n, d);
    merged.x << pop.x, child.x;
    merged.f.resize(2 * n, num_objectives);
    merged.f << pop.f, child.f;
    merged.g.resize(2 * n, num_constraints);
    merged.g << pop.g, child.g;
    merged.violation.resize(2 * n);
    merged.violation << pop.violation, child.violation;
    auto mf = sort_fronts(merged);
    pop = select(merged, mf, n);
    fronts = sort_fronts(pop);
    pop.crowding.assign(n, 0.0);
    for (const auto& fr : fronts) assign_crowding(pop, fr);
  }

  // Feasible non-dominated members, first occurrence of each objective vector.
  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    if (pop.violation[i] > 0.0) continue;
    bool dominated = false;
    bool duplicate = false;
    for (int j = 0; j < n && !dominated; ++j) {
      if (j == i || pop.violation[j] > 0.0) continue;
      bool ge = true;
      bool gt = false;
      for (int k = 0; k < num_objectives; ++k) {
        ge = ge && pop.f(j, k) >= pop.f(i, k);
        gt = gt || pop.f(j, k) > pop.f(i, k);
      }
      if (ge && gt) dominated = true;
    }
    if (dominated) continue;
    for (int t : keep) duplicate = duplicate || (pop.f.row(t).array() == pop.f.row(i).array()).all();
    if (!duplicate) keep.push_back(i);
  }
  ParetoFrontierSample out;
  const auto count = static_cast<Eigen::Index>(keep.size());
  out.inputs.resize(count, d);
  out.objectives.resize(count, num_objectives);
  out.constraints.resize(count, num_constraints);
  for (Eigen::Index t = 0; t < count; ++t) {
    out.inputs.row(t) = pop.x.row(keep[t]);
    out.objectives.row(t) = pop.f.row(keep[t]);
    out.constraints.row(t) = pop.g.row(keep[t]);
  }
  return out;
}

}  // namespace pf2es::moo
