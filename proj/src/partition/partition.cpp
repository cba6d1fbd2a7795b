#include "partition/partition.hpp"

#include "core/dominance.hpp"
#include "core/errors.hpp"
#include "core/stats.hpp"

#include <algorithm>

namespace pf2es::partition {

void EpsilonConfig::validate() const {
  if (!(c >= 0.0)) throw ConfigError("epsilon: c must be non-negative");
}

Vector frontier_epsilon(const Matrix& objectives, const EpsilonConfig& config) {
  config.validate();
  const auto m = objectives.cols();
  if (objectives.rows() == 0) throw ContractError("shift_frontier: empty frontier");
  Vector eps(m);
  if (config.mode == EpsilonMode::heuristic) {
    for (Eigen::Index k = 0; k < m; ++k)
      eps[k] = config.c * (objectives.col(k).maxCoeff() - objectives.col(k).minCoeff());
    return eps;
  }
  if (m != 2) throw ConfigError("shift_frontier: lower_bound mode requires two objectives");
  if (objectives.rows() < 2) throw ConfigError("shift_frontier: lower_bound mode requires at least two points");
  for (Eigen::Index k = 0; k < m; ++k) {
    std::vector<double> v(objectives.col(k).data(), objectives.col(k).data() + objectives.rows());
    std::sort(v.begin(), v.end());
    double gap = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) gap = std::max(gap, v[i] - v[i - 1]);
    eps[k] = gap;
  }
  return eps;
}

moo::ParetoFrontierSample shift_frontier(const moo::ParetoFrontierSample& frontier, const EpsilonConfig& config) {
  const Vector eps = frontier_epsilon(frontier.objectives, config);
  moo::ParetoFrontierSample out = frontier;
  out.objectives.rowwise() += eps.transpose();
  return out;
}

bool BoxPartition::contains(const Eigen::Ref<const Vector>& point) const {
  for (const auto& b : boxes) {
    bool inside = true;
    for (Eigen::Index k = 0; k < point.size() && inside; ++k) inside = point[k] >= b.lower[k] && point[k] <= b.upper[k];
    if (inside) return true;
  }
  return false;
}

namespace {

struct Rect {
  double lo1, hi1, lo2, hi2;
};

// Staircase cover of {f : no point weakly dominates f} in [lo, hi]^2. `pts` is
// a strict front sorted by descending first coordinate.
std::vector<Rect> staircase(const Matrix& pts, double lo1, double hi1, double lo2, double hi2) {
  std::vector<Rect> out;
  const auto n = pts.rows();
  if (n == 0) {
    out.push_back({lo1, hi1, lo2, hi2});
    return out;
  }
  out.push_back({pts(0, 0), hi1, lo2, hi2});
  for (Eigen::Index i = 0; i + 1 < n; ++i) out.push_back({pts(i + 1, 0), pts(i, 0), pts(i, 1), hi2});
  out.push_back({lo1, pts(n - 1, 0), pts(n - 1, 1), hi2});
  return out;
}

Box make_box(const std::vector<double>& lo, const std::vector<double>& hi, int c, double sentinel) {
  const auto m = static_cast<Eigen::Index>(lo.size());
  Box b{Vector(m + c), Vector(m + c)};
  for (Eigen::Index k = 0; k < m; ++k) {
    b.lower[k] = lo[k];
    b.upper[k] = hi[k];
  }
  for (int j = 0; j < c; ++j) {
    b.lower[m + j] = 0.0;
    b.upper[m + j] = sentinel;
  }
  return b;
}

bool nonempty(double lo, double hi) { return hi > lo; }

}  // namespace

BoxPartition feasibility_partition(int num_objectives, int num_constraints, double sentinel) {
  BoxPartition p;
  p.num_objectives = num_objectives;
  p.num_constraints = num_constraints;
  p.sentinel = sentinel;
  p.feasibility_only = true;
  p.boxes.push_back(make_box(std::vector<double>(num_objectives, -sentinel),
                             std::vector<double>(num_objectives, sentinel), num_constraints, sentinel));
  return p;
}

BoxPartition decompose_non_dominated(const Matrix& frontier, int num_objectives, int num_constraints,
                                     double sentinel, const std::optional<Vector>& objective_lower,
                                     const std::optional<Vector>& objective_upper) {
  const int m = num_objectives;
  if (m < 1) throw ContractError("decompose: need at least one objective");
  if (m > 3) throw UnsupportedDimensionError("decompose: only 1 to 3 objectives are supported");
  if (frontier.rows() > 0 && frontier.cols() != m) throw ContractError("decompose: frontier width mismatch");
  const Vector lo = objective_lower.value_or(Vector::Constant(m, -sentinel));
  const Vector hi = objective_upper.value_or(Vector::Constant(m, sentinel));
  if (lo.size() != m || hi.size() != m) throw ContractError("decompose: bound length mismatch");

  BoxPartition part;
  part.num_objectives = m;
  part.num_constraints = num_constraints;
  part.sentinel = sentinel;
  const Matrix front = frontier.rows() > 0 ? strict_front(frontier) : Matrix(0, m);
  const int c = num_constraints;

  if (m == 1) {
    const double top = front.rows() > 0 ? front(0, 0) : lo[0];
    if (nonempty(top, hi[0])) part.boxes.push_back(make_box({top}, {hi[0]}, c, sentinel));
    return part;
  }
  if (m == 2) {
    for (const auto& r : staircase(front, lo[0], hi[0], lo[1], hi[1]))
      if (nonempty(r.lo1, r.hi1) && nonempty(r.lo2, r.hi2))
        part.boxes.push_back(make_box({r.lo1, r.lo2}, {r.hi1, r.hi2}, c, sentinel));
    return part;
  }
  // M = 3: slabs between consecutive distinct third coordinates, each slab
  // covered by the staircase of the points at or above it.
  std::vector<double> levels;
  for (Eigen::Index i = 0; i < front.rows(); ++i) levels.push_back(front(i, 2));
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  auto emit = [&](const Matrix& pts, double z_lo, double z_hi) {
    if (!nonempty(z_lo, z_hi)) return;
    for (const auto& r : staircase(pts, lo[0], hi[0], lo[1], hi[1]))
      if (nonempty(r.lo1, r.hi1) && nonempty(r.lo2, r.hi2))
        part.boxes.push_back(make_box({r.lo1, r.lo2, z_lo}, {r.hi1, r.hi2, z_hi}, c, sentinel));
  };
  const double top = levels.empty() ? lo[2] : std::min(levels.front(), hi[2]);
  emit(Matrix(0, 2), top, hi[2]);
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const double z_hi = std::min(levels[j], hi[2]);
    const double z_lo = std::max(j + 1 < levels.size() ? levels[j + 1] : lo[2], lo[2]);
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < front.rows(); ++i)
      if (front(i, 2) >= levels[j]) rows.push_back(i);
    Matrix proj(static_cast<Eigen::Index>(rows.size()), 2);
    for (std::size_t t = 0; t < rows.size(); ++t) proj.row(static_cast<Eigen::Index>(t)) = front.row(rows[t]).head(2);
    emit(strict_front(proj), z_lo, z_hi);
  }
  return part;
}

double interval_probability(double lower, double upper, double mean, double sd, double sentinel) {
  if (sd <= 0.0) return (mean >= lower && mean <= upper) ? 1.0 : 0.0;
  const double hi = upper >= sentinel ? 1.0 : normal_cdf((upper - mean) / sd);
  const double lo = lower <= -sentinel ? 0.0 : normal_cdf((lower - mean) / sd);
  return std::max(hi - lo, 0.0);
}

double box_probability(const Box& box, const Vector& mean, const Vector& sd, double sentinel) {
  double p = 1.0;
  for (Eigen::Index k = 0; k < box.lower.size(); ++k)
    p *= interval_probability(box.lower[k], box.upper[k], mean[k], sd[k], sentinel);
  return p;
}

double feasibility_probability(const Vector& mean, const Vector& sd, int num_objectives) {
  double p = 1.0;
  for (Eigen::Index j = num_objectives; j < mean.size(); ++j)
    p *= interval_probability(0.0, kSentinel, mean[j], sd[j], kSentinel);
  return p;
}

double non_dominated_probability(const BoxPartition& partition, const Vector& mean, const Vector& sd) {
  const int m = partition.num_objectives;
  double total = 0.0;
  for (const auto& b : partition.boxes) {
    double p = 1.0;
    for (int k = 0; k < m; ++k)
      p *= interval_probability(b.lower[k], b.upper[k], mean[k], sd[k], partition.sentinel);
    total += p;
  }
  return total * feasibility_probability(mean, sd, m);
}

}  // namespace pf2es::partition
