#include <doctest.h>

#include "benchmarks/benchmarks.hpp"
#include "core/errors.hpp"
#include "core/random.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <random>

using namespace pf2es;
using namespace pf2es::benchmarks;

TEST_CASE("registry lists every problem with consistent dimensions") {
  const std::vector<std::string> expected = {"VLMOP2", "BraninCurrin", "ZDT1",     "ZDT2", "FourBarTruss",
                                             "C-BraninCurrin", "Constr-Ex", "SRN", "C2-DTLZ2", "DiscBrake"};
  CHECK(problem_names() == expected);
  const std::map<std::string, std::array<int, 3>> shape = {
      {"VLMOP2", {2, 2, 0}},    {"BraninCurrin", {2, 2, 0}}, {"ZDT1", {5, 2, 0}},      {"ZDT2", {5, 2, 0}},
      {"FourBarTruss", {4, 2, 0}}, {"C-BraninCurrin", {2, 2, 1}}, {"Constr-Ex", {2, 2, 2}}, {"SRN", {2, 2, 2}},
      {"C2-DTLZ2", {4, 2, 1}},  {"DiscBrake", {4, 2, 4}}};
  for (const auto& name : problem_names()) {
    const auto& p = get_problem(name);
    const auto s = shape.at(name);
    CHECK(p.spec.dim() == s[0]);
    CHECK(p.spec.num_objectives == s[1]);
    CHECK(p.spec.num_constraints == s[2]);
    CHECK(p.regret_reference.size() == 2);
    CHECK(p.regret_reference_max().isApprox(-p.regret_reference));
    const Vector mid = 0.5 * (p.spec.bounds.lower + p.spec.bounds.upper);
    CHECK(evaluate_benchmark(name, mid).objectives.size() == s[1]);
  }
  CHECK_THROWS_AS(get_problem("Kursawe"), RegistryError);
}

TEST_CASE("published ideal hypervolumes are stored verbatim") {
  CHECK(get_problem("VLMOP2").ideal_hypervolume == 0.77157);
  CHECK(get_problem("ZDT1").ideal_hypervolume == 5.90453);
  CHECK(get_problem("ZDT2").ideal_hypervolume == 5.57236);
  CHECK(get_problem("Constr-Ex").ideal_hypervolume == 5.30186);
  CHECK(get_problem("SRN").ideal_hypervolume == 46205.0);
  CHECK(get_problem("VLMOP2").regret_reference[0] == 1.2);
  CHECK(get_problem("VLMOP2").calibration_reference->isApprox(Vector::Constant(2, 3.0)));
}

TEST_CASE("VLMOP2 first objective vanishes at its optimum") {
  Vector x(2);
  x << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const auto y = evaluate_benchmark("VLMOP2", x);
  CHECK(y.objectives[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(y.objectives[1] == doctest::Approx(-(1.0 - std::exp(-4.0))));
}

TEST_CASE("benchmarks match independently computed golden values") {
  std::ifstream in(PF2ES_GOLDEN_DIR "/benchmarks_golden.json");
  REQUIRE(in.good());
  const auto golden = nlohmann::json::parse(in);
  for (const auto& name : problem_names()) {
    REQUIRE(golden.contains(name));
    const auto& p = get_problem(name);
    CHECK(golden[name].size() == 20);
    for (const auto& c : golden[name]) {
      const auto xs = c["x"].get<std::vector<double>>();
      const auto ys = c["y"].get<std::vector<double>>();
      REQUIRE(static_cast<int>(ys.size()) == p.spec.num_outputs());
      const Vector y = p.spec.evaluate(Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size())));
      for (std::size_t k = 0; k < ys.size(); ++k) {
        INFO(name << " output " << k);
        CHECK(y[static_cast<Eigen::Index>(k)] ==
              doctest::Approx(ys[k]).epsilon(1e-10).scale(1.0));
      }
    }
  }
}

TEST_CASE("constrained problems have a feasible region of plausible size") {
  // Fraction of 1e5 uniform inputs satisfying every constraint.
  const std::map<std::string, std::pair<double, double>> expected = {
      {"C-BraninCurrin", {0.6, 0.8}}, {"Constr-Ex", {0.3, 0.7}}, {"SRN", {0.05, 0.5}},
      {"C2-DTLZ2", {0.01, 0.6}},       {"DiscBrake", {0.05, 0.95}}};
  Rng rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& [name, range] : expected) {
    const auto& p = get_problem(name);
    int feasible = 0;
    const int n = 100000;
    Vector x(p.spec.dim());
    for (int i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = p.spec.bounds.lower[j] + u(rng) * p.spec.bounds.range()[j];
      const Vector y = p.spec.evaluate(x);
      feasible += (y.tail(p.spec.num_constraints).array() >= 0.0).all() ? 1 : 0;
    }
    const double frac = static_cast<double>(feasible) / n;
    INFO(name << " feasible fraction " << frac);
    CHECK(frac > range.first);
    CHECK(frac < range.second);
  }
}
