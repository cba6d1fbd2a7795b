#include "benchmarks/benchmarks.hpp"

#include "core/errors.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace pf2es::benchmarks {

namespace {

using std::numbers::pi;

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Source formulations minimize; every objective is negated on return.

Vector vlmop2(const Eigen::Ref<const Vector>& x) {
  const double s = 1.0 / std::sqrt(2.0);
  const double a = (x.array() - s).square().sum();
  const double b = (x.array() + s).square().sum();
  return vec({-(1.0 - std::exp(-a)), -(1.0 - std::exp(-b))});
}

double branin(const Eigen::Ref<const Vector>& x) {
  const double x1 = 15.0 * x[0] - 5.0;
  const double x2 = 15.0 * x[1];
  const double t = x2 - 5.1 / (4.0 * pi * pi) * x1 * x1 + 5.0 / pi * x1 - 6.0;
  return t * t + 10.0 * (1.0 - 1.0 / (8.0 * pi)) * std::cos(x1) + 10.0;
}

double currin(const Eigen::Ref<const Vector>& x) {
  const double a = x[0];
  const double b = x[1];
  const double lead = b > 0.0 ? 1.0 - std::exp(-1.0 / (2.0 * b)) : 1.0;
  return lead * (2300.0 * a * a * a + 1900.0 * a * a + 2092.0 * a + 60.0) /
         (100.0 * a * a * a + 500.0 * a * a + 4.0 * a + 20.0);
}

Vector branin_currin(const Eigen::Ref<const Vector>& x) { return vec({-branin(x), -currin(x)}); }

Vector c_branin_currin(const Eigen::Ref<const Vector>& x) {
  const double x1 = 15.0 * x[0] - 5.0;
  const double x2 = 15.0 * x[1];
  const double g = 50.0 - ((x1 - 2.5) * (x1 - 2.5) + (x2 - 7.5) * (x2 - 7.5));
  return vec({-branin(x), -currin(x), g});
}

template <bool Concave>
Vector zdt(const Eigen::Ref<const Vector>& x) {
  const auto d = x.size();
  const double f1 = x[0];
  const double g = 1.0 + 9.0 / static_cast<double>(d - 1) * x.tail(d - 1).sum();
  const double r = f1 / g;
  const double h = Concave ? 1.0 - r * r : 1.0 - std::sqrt(r);
  return vec({-f1, -g * h});
}

Vector four_bar_truss(const Eigen::Ref<const Vector>& x) {
  const double f = 10.0;
  const double e = 2e5;
  const double l = 200.0;
  const double s2 = std::sqrt(2.0);
  const double f1 = l * (2.0 * x[0] + s2 * x[1] + std::sqrt(x[2]) + x[3]);
  const double f2 = f * l / e * (2.0 / x[0] + 2.0 * s2 / x[1] - 2.0 * s2 / x[2] + 2.0 / x[3]);
  return vec({-f1, -f2});
}

Vector constr_ex(const Eigen::Ref<const Vector>& x) {
  return vec({-x[0], -(1.0 + x[1]) / x[0], x[1] + 9.0 * x[0] - 6.0, -x[1] + 9.0 * x[0] - 1.0});
}

Vector srn(const Eigen::Ref<const Vector>& x) {
  const double a = x[0];
  const double b = x[1];
  const double f1 = 2.0 + (a - 2.0) * (a - 2.0) + (b - 1.0) * (b - 1.0);
  const double f2 = 9.0 * a - (b - 1.0) * (b - 1.0);
  return vec({-f1, -f2, 225.0 - a * a - b * b, 3.0 * b - a - 10.0});
}

Vector c2_dtlz2(const Eigen::Ref<const Vector>& x) {
  const int m = 2;
  const double r = 0.2;
  const double g = (x.tail(x.size() - 1).array() - 0.5).square().sum();
  const double f1 = (1.0 + g) * std::cos(x[0] * pi / 2.0);
  const double f2 = (1.0 + g) * std::sin(x[0] * pi / 2.0);
  const double f[2] = {f1, f2};
  double near_axis = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    double v = (f[i] - 1.0) * (f[i] - 1.0);
    for (int j = 0; j < m; ++j)
      if (j != i) v += f[j] * f[j] - r * r;
    near_axis = std::min(near_axis, v);
  }
  double centre = 0.0;
  for (int i = 0; i < m; ++i) centre += (f[i] - 1.0 / std::sqrt(double(m))) * (f[i] - 1.0 / std::sqrt(double(m))) - r * r;
  return vec({-f1, -f2, -std::min(near_axis, centre)});
}

Vector disc_brake(const Eigen::Ref<const Vector>& x) {
  const double ri = x[0];
  const double ro = x[1];
  const double force = x[2];
  const double faces = x[3];
  const double sq = ro * ro - ri * ri;
  const double cu = ro * ro * ro - ri * ri * ri;
  const double f1 = 4.9e-5 * sq * (faces - 1.0);
  const double f2 = 9.82e6 * sq / (force * faces * cu);
  return vec({-f1, -f2, (ro - ri) - 20.0, 0.4 - force / (3.14 * sq), 1.0 - 2.22e-3 * force * cu / (sq * sq),
              2.66e-2 * force * faces * cu / sq - 900.0});
}

BenchmarkProblem make(const std::string& name, Vector lo, Vector hi, int m, int c, Evaluator fn, Vector regret_ref,
                      double ideal, std::optional<Vector> calib) {
  BenchmarkProblem p;
  p.spec.name = name;
  p.spec.bounds = Bounds(std::move(lo), std::move(hi));
  p.spec.num_objectives = m;
  p.spec.num_constraints = c;
  p.spec.evaluator = std::move(fn);
  p.regret_reference = std::move(regret_ref);
  p.ideal_hypervolume = ideal;
  p.calibration_reference = std::move(calib);
  return p;
}

struct Registry {
  std::vector<std::string> names;
  std::map<std::string, BenchmarkProblem> problems;

  void add(BenchmarkProblem p) {
    names.push_back(p.spec.name);
    problems.emplace(p.spec.name, std::move(p));
  }

  Registry() {
    const double s2 = std::sqrt(2.0);
    add(make("VLMOP2", Vector::Constant(2, -2.0), Vector::Constant(2, 2.0), 2, 0, vlmop2, vec({1.2, 1.2}), 0.77157,
             vec({3.0, 3.0})));
    add(make("BraninCurrin", Vector::Zero(2), Vector::Ones(2), 2, 0, branin_currin, vec({18.0, 6.0}), 60.0,
             vec({2000.0, 50.0})));
    add(make("ZDT1", Vector::Zero(5), Vector::Ones(5), 2, 0, zdt<false>, vec({2.5, 2.5}), 5.90453,
             vec({15.0, 15.0})));
    add(make("ZDT2", Vector::Zero(5), Vector::Ones(5), 2, 0, zdt<true>, vec({2.5, 2.5}), 5.57236,
             vec({15.0, 15.0})));
    add(make("FourBarTruss", vec({1.0, s2, s2, 1.0}), vec({3.0, 3.0, 3.0, 3.0}), 2, 0, four_bar_truss,
             vec({3400.0, 0.05}), 81.9590, std::nullopt));
    add(make("C-BraninCurrin", Vector::Zero(2), Vector::Ones(2), 2, 1, c_branin_currin, vec({80.0, 12.0}), 606.752,
             vec({2000.0, 100.0})));
    add(make("Constr-Ex", vec({0.1, 0.0}), vec({1.0, 5.0}), 2, 2, constr_ex, vec({1.1, 10.0}), 5.30186,
             vec({2.0, 50.0})));
    add(make("SRN", Vector::Constant(2, -20.0), Vector::Constant(2, 20.0), 2, 2, srn, vec({250.0, 50.0}), 46205.0,
             vec({1500.0, 500.0})));
    add(make("C2-DTLZ2", Vector::Zero(4), Vector::Ones(4), 2, 1, c2_dtlz2, vec({2.5, 2.5}), 5.43594,
             vec({10.0, 250.0})));
    add(make("DiscBrake", vec({55.0, 75.0, 1000.0, 2.0}), vec({80.0, 110.0, 3000.0, 20.0}), 2, 4, disc_brake,
             vec({8.0, 4.0}), 17.6882, std::nullopt));
  }
};

const Registry& registry() {
  static const Registry r;
  return r;
}

}  // namespace

const std::vector<std::string>& problem_names() { return registry().names; }

const BenchmarkProblem& get_problem(const std::string& name) {
  const auto& r = registry();
  const auto it = r.problems.find(name);
  if (it == r.problems.end()) throw RegistryError("unknown problem: " + name);
  return it->second;
}

OutputVector evaluate_benchmark(const std::string& name, const Eigen::Ref<const Vector>& x) {
  const auto& p = get_problem(name);
  return split_output(p.spec.evaluate(x), p.spec.num_objectives);
}

}  // namespace pf2es::benchmarks
