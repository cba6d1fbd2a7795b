#include "core/dominance.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <numeric>

namespace pf2es {

bool dominates(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  if (a.size() != b.size() || a.size() == 0) throw ContractError("dominates: vectors must have equal non-zero length");
  bool strict = false;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (a[k] < b[k]) return false;
    if (a[k] > b[k]) strict = true;
  }
  return strict;
}

bool weakly_dominates(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  if (a.size() != b.size()) throw ContractError("weakly_dominates: length mismatch");
  return (a.array() >= b.array()).all();
}

std::vector<int> non_dominated_indices(const std::vector<OutputVector>& points) {
  std::vector<int> out;
  if (points.empty()) return out;
  const auto m = points.front().objectives.size();
  const auto c = points.front().constraints.size();
  std::vector<int> feasible;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    if (points[i].objectives.size() != m || points[i].constraints.size() != c)
      throw ContractError("non_dominated_filter: points differ in M or C");
    if (points[i].feasible()) feasible.push_back(i);
  }
  for (int i : feasible) {
    bool dominated = false;
    for (int j : feasible) {
      if (j != i && dominates(points[j].objectives, points[i].objectives)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

std::vector<OutputVector> non_dominated_filter(const std::vector<OutputVector>& points) {
  std::vector<OutputVector> out;
  for (int i : non_dominated_indices(points)) out.push_back(points[i]);
  return out;
}

std::vector<int> non_dominated_rows(const Matrix& objectives) {
  std::vector<int> out;
  const auto n = objectives.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    bool dominated = false;
    for (Eigen::Index j = 0; j < n && !dominated; ++j)
      dominated = j != i && dominates(objectives.row(j).transpose(), objectives.row(i).transpose());
    if (!dominated) out.push_back(static_cast<int>(i));
  }
  return out;
}

Matrix strict_front(const Matrix& objectives) {
  const auto n = objectives.rows();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    for (Eigen::Index k = 0; k < objectives.cols(); ++k) {
      if (objectives(a, k) != objectives(b, k)) return objectives(a, k) > objectives(b, k);
    }
    return a < b;
  });
  std::vector<int> keep;
  for (std::size_t ii = 0; ii < order.size(); ++ii) {
    const int i = order[ii];
    bool drop = false;
    // Anything that weakly dominates row i sorts before it lexicographically.
    for (int j : keep) {
      if (weakly_dominates(objectives.row(j).transpose(), objectives.row(i).transpose())) {
        drop = true;
        break;
      }
    }
    if (!drop) keep.push_back(i);
  }
  Matrix out(static_cast<Eigen::Index>(keep.size()), objectives.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = objectives.row(keep[r]);
  return out;
}

}  // namespace pf2es
