#include <doctest.h>

#include "benchmarks/benchmarks.hpp"
#include "core/dominance.hpp"
#include "core/errors.hpp"
#include "core/random.hpp"
#include "gp/surrogate.hpp"
#include "moo/frontier_sampling.hpp"
#include "moo/hypervolume.hpp"
#include "moo/nsga2.hpp"

#include <random>

using namespace pf2es;
using namespace pf2es::moo;

namespace {

BatchFunction rowwise(const Evaluator& f) {
  return [f](const Matrix& xs) {
    Matrix out;
    for (Eigen::Index i = 0; i < xs.rows(); ++i) {
      const Vector y = f(xs.row(i).transpose());
      if (i == 0) out.resize(xs.rows(), y.size());
      out.row(i) = y.transpose();
    }
    return out;
  };
}

BatchFunction problem_fn(const std::string& name) { return rowwise(benchmarks::get_problem(name).spec.evaluator); }

Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

void check_mutually_non_dominated(const Matrix& f) {
  for (Eigen::Index i = 0; i < f.rows(); ++i)
    for (Eigen::Index j = 0; j < f.rows(); ++j)
      if (i != j) CHECK_FALSE(dominates(f.row(i).transpose(), f.row(j).transpose()));
}

}  // namespace

TEST_CASE("hypervolume examples") {
  CHECK(hypervolume(rows({{1, 1}}), Vector::Zero(2)) == doctest::Approx(1.0));
  CHECK(hypervolume(rows({{2, 1}, {1, 2}}), Vector::Zero(2)) == doctest::Approx(3.0));
  CHECK(hypervolume(rows({{3, 3}, {1, 1}}), Vector::Zero(2)) == doctest::Approx(9.0));
  CHECK(hypervolume(rows({{-1, 5}}), Vector::Zero(2)) == 0.0);
  CHECK(hypervolume(Matrix(0, 2), Vector::Zero(2)) == 0.0);
  CHECK(hypervolume(rows({{2}, {3}}), Vector::Zero(1)) == doctest::Approx(3.0));
  CHECK(hypervolume(rows({{1, 1, 1}}), Vector::Zero(3)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(hypervolume(Matrix::Ones(1, 4), Vector::Zero(4)), UnsupportedDimensionError);
}

TEST_CASE("hypervolume is monotone and permutation invariant") {
  Rng rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 2 + rep % 2;
    Matrix pts(8, m);
    for (auto& v : pts.reshaped()) v = u(rng);
    const double hv = hypervolume(pts, Vector::Zero(m));
    Matrix shuffled = pts;
    std::vector<int> perm(8);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < 8; ++i) shuffled.row(i) = pts.row(perm[i]);
    CHECK(hypervolume(shuffled, Vector::Zero(m)) == doctest::Approx(hv).epsilon(1e-12));
    Matrix more(9, m);
    more << pts, Matrix::NullaryExpr(1, m, [&]() { return u(rng); });
    CHECK(hypervolume(more, Vector::Zero(m)) >= hv - 1e-15);
  }
}

TEST_CASE("three-objective hypervolume matches Monte Carlo volume") {
  Rng rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 1 + rep;
    Matrix pts(n, 3);
    for (auto& v : pts.reshaped()) v = u(rng);
    const double hv = hypervolume(pts, Vector::Zero(3));
    const int samples = 200000;
    int hits = 0;
    for (int s = 0; s < samples; ++s) {
      const double a = u(rng), b = u(rng), c = u(rng);
      for (int i = 0; i < n; ++i)
        if (pts(i, 0) >= a && pts(i, 1) >= b && pts(i, 2) >= c) {
          ++hits;
          break;
        }
    }
    const double p = static_cast<double>(hits) / samples;
    const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / samples);
    CHECK(std::abs(hv - p) <= 3 * se + 1e-12);
  }
}

TEST_CASE("nsga2 single objective finds the analytic maximizer") {
  const BatchFunction fn = [](const Matrix& xs) {
    return Matrix((-(xs.col(0).array() - 0.3).square()).matrix());
  };
  NSGA2Config cfg;
  cfg.seed = 1;
  cfg.generations = 100;
  const auto f = nsga2(fn, Bounds(Vector::Zero(1), Vector::Ones(1)), 1, 0, cfg);
  REQUIRE(f.size() >= 1);
  for (Eigen::Index i = 0; i < f.size(); ++i) CHECK(std::abs(f.inputs(i, 0) - 0.3) <= 1e-2);
}

TEST_CASE("nsga2 on ZDT1 approaches the ideal hypervolume") {
  const auto& p = benchmarks::get_problem("ZDT1");
  NSGA2Config cfg;
  cfg.population = 100;
  cfg.generations = 200;
  cfg.seed = 2;
  const auto f = nsga2(problem_fn("ZDT1"), p.spec.bounds, 2, 0, cfg);
  check_mutually_non_dominated(f.objectives);
  const double hv = hypervolume(f.objectives, p.regret_reference_max());
  CHECK(std::abs(hv - 5.90453) <= 0.02 * 5.90453);
}

TEST_CASE("nsga2 returns an empty frontier when nothing is feasible") {
  const BatchFunction fn = [](const Matrix& xs) {
    Matrix out(xs.rows(), 3);
    out.col(0) = xs.col(0);
    out.col(1) = -xs.col(0);
    out.col(2).setConstant(-1.0);
    return out;
  };
  NSGA2Config cfg;
  cfg.generations = 10;
  const auto f = nsga2(fn, Bounds(Vector::Zero(1), Vector::Ones(1)), 2, 1, cfg);
  CHECK(f.empty());
  CHECK(f.objectives.cols() == 2);
  CHECK(f.constraints.cols() == 1);
}

TEST_CASE("nsga2 output is feasible, non-dominated and deterministic") {
  const auto& p = benchmarks::get_problem("Constr-Ex");
  NSGA2Config cfg;
  cfg.generations = 60;
  cfg.seed = 9;
  const auto a = nsga2(problem_fn("Constr-Ex"), p.spec.bounds, 2, 2, cfg);
  const auto b = nsga2(problem_fn("Constr-Ex"), p.spec.bounds, 2, 2, cfg);
  REQUIRE(a.size() > 0);
  check_mutually_non_dominated(a.objectives);
  CHECK((a.constraints.array() >= 0).all());
  CHECK(a.objectives == b.objectives);
  CHECK(a.inputs == b.inputs);
}

TEST_CASE("nsga2 config validation") {
  NSGA2Config cfg;
  cfg.population = 5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.population = 2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("sampled frontiers on a dense VLMOP2 surrogate") {
  const auto& p = benchmarks::get_problem("VLMOP2");
  Rng rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  Dataset data;
  for (int i = 0; i < 100; ++i) {
    const Vector x = (Vector(2) << u(rng), u(rng)).finished();
    data.append(x, p.spec.evaluate(x));
  }
  const auto s = gp::IndependentGPSurrogate::fit_map(data, p.spec.bounds, 2, 0);
  NSGA2Config cfg;
  const auto fronts = sample_pareto_frontiers(s, 5, 512, cfg, 17);
  REQUIRE(fronts.size() == 5);
  for (const auto& f : fronts) {
    check_mutually_non_dominated(f.objectives);
    const double hv = hypervolume(f.objectives, p.regret_reference_max());
    CHECK(std::abs(hv - 0.77157) <= 0.10 * 0.77157);
  }
  const auto again = sample_pareto_frontiers(s, 5, 512, cfg, 17);
  for (int i = 0; i < 5; ++i) CHECK(again[i].objectives == fronts[i].objectives);
}
