#include <doctest.h>

#include "benchmarks/benchmarks.hpp"
#include "bo/config.hpp"
#include "bo/loop.hpp"
#include "bo/metrics.hpp"
#include "bo/record.hpp"
#include "core/errors.hpp"
#include "core/random.hpp"
#include "moo/hypervolume.hpp"

#include <cmath>
#include <random>

using namespace pf2es;
using namespace pf2es::bo;

namespace {

// Cheap settings so a few iterations finish in seconds.
RunConfig small_config(const std::string& problem, AcquisitionKind kind, int q = 1) {
  RunConfig c;
  c.problem = problem;
  c.acquisition = kind;
  c.q = q;
  c.iterations = 2;
  c.num_frontiers = 2;
  c.n_features = 128;
  c.frontier_nsga.population = 20;
  c.frontier_nsga.generations = 30;
  c.recommendation_nsga.population = 20;
  c.recommendation_nsga.generations = 30;
  c.optimizer.n_random = 200;
  c.optimizer.n_starts = 3;
  c.optimizer.max_iterations = 30;
  c.calibration_samples = 3;
  c.record_timings = false;
  c.seed = 11;
  return c;
}

Dataset uniform_data(const benchmarks::BenchmarkProblem& p, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dataset data;
  Vector x(p.spec.dim());
  for (int i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = p.spec.bounds.lower[j] + u(rng) * p.spec.bounds.range()[j];
    data.append(x, p.spec.evaluate(x));
  }
  return data;
}

gp::IndependentGPSurrogate fit(const benchmarks::BenchmarkProblem& p, const Dataset& data) {
  return gp::IndependentGPSurrogate::fit_map(data, p.spec.bounds, p.spec.num_objectives, p.spec.num_constraints, {});
}

}  // namespace

TEST_CASE("acquisition names round-trip") {
  for (auto k : {AcquisitionKind::pf2es, AcquisitionKind::qpf2es, AcquisitionKind::mopi, AcquisitionKind::random,
                 AcquisitionKind::pf2es_kb})
    CHECK(acquisition_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(acquisition_from_string("ehvi"), ConfigError);
}

TEST_CASE("run config validation") {
  auto c = small_config("VLMOP2", AcquisitionKind::pf2es);
  CHECK_NOTHROW(c.validate());
  auto bad = c;
  bad.q = 2;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.acquisition = AcquisitionKind::mopi;
  bad.q = 3;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.tau = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.iterations = -1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.epsilon.c = -0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.recommendation.initial_confidence = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK(c.initial_design_size(5) == 11);
}

TEST_CASE("zero budget evaluates only the initial design") {
  auto c = small_config("ZDT1", AcquisitionKind::random);
  c.iterations = 0;
  const auto rec = run_bo(c);
  CHECK(rec.initial_inputs.rows() == 11);
  CHECK(rec.all_inputs().rows() == 11);
  REQUIRE(rec.iterations.size() == 1);
  CHECK(rec.iterations[0].iteration == 0);
  CHECK(rec.iterations[0].queries.rows() == 0);
  CHECK(std::isfinite(rec.iterations[0].log_hv_difference));
}

TEST_CASE("random search run stays in bounds and grows the data") {
  auto c = small_config("VLMOP2", AcquisitionKind::random, 3);
  c.iterations = 3;
  const auto rec = run_bo(c);
  CHECK_FALSE(rec.aborted);
  REQUIRE(rec.iterations.size() == 4);
  CHECK(rec.all_inputs().rows() == 5 + 9);
  CHECK(rec.all_outputs().cols() == 2);
  const auto& b = benchmarks::get_problem("VLMOP2").spec.bounds;
  for (std::size_t t = 1; t < rec.iterations.size(); ++t) {
    const auto& qx = rec.iterations[t].queries;
    REQUIRE(qx.rows() == 3);
    for (Eigen::Index i = 0; i < qx.rows(); ++i) {
      CHECK((qx.row(i).transpose().array() >= b.lower.array()).all());
      CHECK((qx.row(i).transpose().array() <= b.upper.array()).all());
    }
  }
  // Calibration is summarized on every record for problems with a reference.
  for (const auto& it : rec.iterations) {
    CHECK(it.has_calibration);
    CHECK(it.calibration_values.size() == 3);
    CHECK(it.calibration_p10 <= it.calibration_median);
    CHECK(it.calibration_median <= it.calibration_p90);
  }
}

TEST_CASE("runs are bit-identical under repetition") {
  for (auto kind : {AcquisitionKind::pf2es, AcquisitionKind::qpf2es, AcquisitionKind::mopi}) {
    auto c = small_config("C-BraninCurrin", kind, kind == AcquisitionKind::qpf2es ? 2 : 1);
    const auto a = record_to_json(run_bo(c));
    const auto b = record_to_json(run_bo(c));
    CHECK(a == b);
    c.seed = 12;
    CHECK(record_to_json(run_bo(c)) != a);
  }
}

TEST_CASE("record JSON round-trips unchanged") {
  auto c = small_config("Constr-Ex", AcquisitionKind::qpf2es, 2);
  c.record_timings = true;
  const auto rec = run_bo(c);
  REQUIRE(rec.iterations[0].timing.has_value());
  const auto text = record_to_json(rec);
  const auto back = record_from_json(text);
  CHECK(record_to_json(back) == text);
  CHECK(back.schema == std::string(kRecordSchema));
  CHECK(back.all_inputs() == rec.all_inputs());
  CHECK(back.iterations.back().log_hv_difference == rec.iterations.back().log_hv_difference);
  CHECK_FALSE(strip_timings(back).iterations[0].timing.has_value());
  CHECK(config_to_json(config_from_json(config_to_json(c))) == config_to_json(c));
  CHECK_THROWS(record_from_json("{\"schema\": \"other/1\"}"));
  CHECK_THROWS(record_from_json("not json"));
}

TEST_CASE("CSV export has one row per iteration and metric") {
  auto c = small_config("VLMOP2", AcquisitionKind::random);
  const auto csv = record_to_csv(run_bo(c));
  CHECK(csv.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(csv.find("VLMOP2,random,1,11,0,log_hv_difference,") != std::string::npos);
  CHECK(csv.find("VLMOP2,random,1,11,2,calibration_median,") != std::string::npos);
  const auto no_header = record_to_csv(run_bo(c), false);
  CHECK(no_header.find("problem,") == std::string::npos);
}

TEST_CASE("Kriging Believer with q = 1 matches the sequential choice") {
  const auto& p = benchmarks::get_problem("VLMOP2");
  const auto s = fit(p, uniform_data(p, 8, 3));
  auto seq = small_config("VLMOP2", AcquisitionKind::pf2es);
  auto kb = small_config("VLMOP2", AcquisitionKind::pf2es_kb);
  const auto a = select_batch(seq, s, 99);
  const auto b = select_batch(kb, s, 99);
  CHECK(a.batch == b.batch);
  CHECK(a.value == b.value);
  CHECK(b.fantasies.empty());
}

TEST_CASE("Kriging Believer fantasizes the posterior mean") {
  const auto& p = benchmarks::get_problem("C-BraninCurrin");
  const auto s = fit(p, uniform_data(p, 10, 4));
  auto kb = small_config("C-BraninCurrin", AcquisitionKind::pf2es_kb, 3);
  const auto r = select_batch(kb, s, 5);
  REQUIRE(r.batch.rows() == 3);
  REQUIRE(r.fantasies.size() == 2);
  CHECK(r.fantasies[0].size() == 11);
  CHECK(r.fantasies[1].size() == 12);
  const Vector x0 = r.batch.row(0).transpose();
  const Vector belief = r.fantasies[0].outputs.row(10).transpose();
  CHECK((belief - s.predict_mean(x0)).cwiseAbs().maxCoeff() < 1e-9);
  // Conditioning keeps hyperparameters and shrinks variance at the fantasy.
  const auto s1 = s.condition_on(r.fantasies[0]);
  Vector m0, v0, m1, v1;
  s.predict(x0, m0, v0);
  s1.predict(x0, m1, v1);
  CHECK((v1.array() < v0.array()).all());
  CHECK(s1.models()[0].hyper().lengthscales == s.models()[0].hyper().lengthscales);
}

TEST_CASE("recommendation without constraints uses the first level") {
  const auto& p = benchmarks::get_problem("VLMOP2");
  const auto s = fit(p, uniform_data(p, 30, 6));
  moo::NSGA2Config nsga;
  nsga.seed = 1;
  const auto r = recommend_out_of_sample(s, {}, nsga);
  CHECK_FALSE(r.empty);
  CHECK(r.tried == std::vector<double>{0.95});
  CHECK(r.confidence == 0.95);
  CHECK(r.slack.size() == 0);
  CHECK(r.inputs.rows() == r.predicted.rows());
  CHECK(r.inputs.rows() > 10);
}

TEST_CASE("recommendation backs off and reports an empty result") {
  // One input, one objective-like output and a constraint that never
  // exceeds zero, so no level can be met.
  ProblemSpec spec;
  spec.name = "never-feasible";
  spec.bounds = Bounds(Vector::Zero(1), Vector::Ones(1));
  spec.num_objectives = 2;
  spec.num_constraints = 1;
  Dataset data;
  for (int i = 0; i < 9; ++i) {
    Vector x(1), y(3);
    x[0] = i / 8.0;
    y << -x[0], x[0] * x[0] - 1.0, -0.5 + 0.5 * x[0];
    data.append(x, y);
  }
  const auto s = gp::IndependentGPSurrogate::fit_map(data, spec.bounds, 2, 1, {});
  moo::NSGA2Config nsga;
  nsga.population = 20;
  nsga.generations = 20;
  const auto r = recommend_out_of_sample(s, {}, nsga);
  CHECK(r.empty);
  CHECK(r.inputs.rows() == 0);
  CHECK(r.slack[0] == doctest::Approx(0.005 * 0.5));
  REQUIRE(r.tried.size() == 19);
  CHECK(r.tried.front() == 0.95);
  CHECK(r.tried.back() == doctest::Approx(0.05));
  for (std::size_t i = 1; i < r.tried.size(); ++i) CHECK(r.tried[i] < r.tried[i - 1]);
}

TEST_CASE("recommendation on a well-explored constrained problem is near ideal") {
  const auto& p = benchmarks::get_problem("Constr-Ex");
  const auto s = fit(p, uniform_data(p, 150, 8));
  moo::NSGA2Config nsga;
  nsga.seed = 3;
  const auto r = recommend_out_of_sample(s, {}, nsga);
  REQUIRE_FALSE(r.empty);
  CHECK(r.slack.size() == 2);
  const double diff = std::pow(10.0, log_hv_difference(r.inputs, p));
  CHECK(diff < 0.1 * p.ideal_hypervolume);
}

TEST_CASE("log hypervolume difference") {
  const auto& p = benchmarks::get_problem("VLMOP2");
  CHECK(log_hv_difference(Matrix(0, 2), p) == doctest::Approx(std::log10(0.77157)));
  // Infeasible recommendations count for nothing.
  const auto& c = benchmarks::get_problem("Constr-Ex");
  Matrix bad(1, 2);
  bad << 0.1, 5.0;  // violates 9 x1 + x2 >= 6
  CHECK(log_hv_difference(bad, c) == doctest::Approx(std::log10(5.30186)));
  Matrix outs(1, 2);
  outs << 0.0, 0.0;  // dominates the whole box, clamps at the floor
  CHECK(log_hv_difference_of_outputs(outs, p) == doctest::Approx(-12.0));
}

TEST_CASE("calibration narrows when the surrogate is well informed") {
  const auto& p = benchmarks::get_problem("VLMOP2");
  moo::NSGA2Config nsga;
  nsga.population = 30;
  nsga.generations = 60;
  const Vector ref = *p.calibration_reference_max();
  const auto wide = uncertainty_calibration(fit(p, uniform_data(p, 5, 9)), ref, 10, 256, nsga, 1);
  const auto tight = uncertainty_calibration(fit(p, uniform_data(p, 120, 9)), ref, 10, 256, nsga, 1);
  CHECK(wide.values.size() == 10);
  CHECK(tight.p90 - tight.p10 < 0.25 * (wide.p90 - wide.p10));
  // Densely explored: every sample is close to the true indicator.
  CHECK(tight.p90 - tight.p10 < 0.1);
  CHECK_THROWS_AS(uncertainty_calibration(fit(p, uniform_data(p, 5, 9)), ref, 0, 256, nsga, 1), ConfigError);
}
