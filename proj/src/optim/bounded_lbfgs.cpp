#include "optim/bounded_lbfgs.hpp"

#include <cmath>
#include <deque>

namespace pf2es::optim {

namespace {

struct Pair {
  Vector s;
  Vector y;
  double rho;
};

Vector projected_gradient(const Vector& x, const Vector& g, const Vector& lo, const Vector& hi) {
  Vector pg = g;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if ((x[i] <= lo[i] && g[i] > 0) || (x[i] >= hi[i] && g[i] < 0)) pg[i] = 0.0;
  }
  return pg;
}

// Two-loop recursion restricted to the free variables (mask == 1).
Vector lbfgs_direction(const Vector& g, const std::deque<Pair>& mem, const Eigen::ArrayXd& mask) {
  Vector q = (g.array() * mask).matrix();
  std::vector<double> a(mem.size());
  for (int i = static_cast<int>(mem.size()) - 1; i >= 0; --i) {
    a[i] = mem[i].rho * mem[i].s.dot(q);
    q -= a[i] * (mem[i].y.array() * mask).matrix();
  }
  if (!mem.empty()) {
    const auto& last = mem.back();
    const double gamma = last.s.dot(last.y) / last.y.squaredNorm();
    q *= gamma;
  }
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const double b = mem[i].rho * mem[i].y.dot(q);
    q += (a[i] - b) * (mem[i].s.array() * mask).matrix();
  }
  return -(q.array() * mask).matrix();
}

}  // namespace

LbfgsResult minimize_bounded(const ValueAndGradient& f, Vector x0, const Vector& lower, const Vector& upper,
                             const LbfgsOptions& options) {
  LbfgsResult result;
  Vector x = x0.cwiseMax(lower).cwiseMin(upper);
  Vector g(x.size());
  double fx = f(x, g);
  result.x = x;
  result.value = fx;
  if (!std::isfinite(fx) || !g.allFinite()) {
    result.failed = true;
    return result;
  }

  std::deque<Pair> memory;
  bool any_step = false;
  for (int it = 0; it < options.max_iterations; ++it) {
    result.iterations = it;
    const Vector pg = projected_gradient(x, g, lower, upper);
    if (pg.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance) {
      result.converged = true;
      break;
    }
    const Eigen::ArrayXd mask = (pg.array() != 0.0).cast<double>();

    Vector d = lbfgs_direction(g, memory, mask);
    if (!(g.dot(d) < 0.0) || !d.allFinite()) {
      memory.clear();
      d = -pg;
    }

    double alpha = memory.empty() ? std::min(1.0, 1.0 / pg.norm()) : 1.0;
    bool accepted = false;
    Vector xn(x.size());
    Vector gn(x.size());
    double fn = fx;
    for (int bt = 0; bt < options.max_backtracks; ++bt) {
      xn = (x + alpha * d).cwiseMax(lower).cwiseMin(upper);
      fn = f(xn, gn);
      if (std::isfinite(fn) && gn.allFinite() && fn <= fx + 1e-4 * g.dot(xn - x)) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (!memory.empty()) {
        memory.clear();
        continue;
      }
      break;
    }
    any_step = true;

    const Vector s = xn - x;
    const Vector y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-10 * s.norm() * y.norm()) {
      memory.push_back({s, y, 1.0 / sy});
      if (static_cast<int>(memory.size()) > options.memory) memory.pop_front();
    }
    const double change = std::abs(fx - fn);
    x = xn;
    g = gn;
    fx = fn;
    result.iterations = it + 1;
    if (s.lpNorm<Eigen::Infinity>() == 0.0 || change <= 1e-15 * std::max(1.0, std::abs(fx))) {
      result.converged = true;
      break;
    }
  }
  result.x = x;
  result.value = fx;
  result.failed = !any_step && !result.converged;
  return result;
}

}  // namespace pf2es::optim
