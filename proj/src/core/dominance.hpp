#pragma once

#include "core/types.hpp"

#include <vector>

namespace pf2es {

/// Strict Pareto dominance under maximization: a >= b everywhere and a > b somewhere.
/// Throws ContractError on length mismatch.
bool dominates(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

/// a >= b coordinate-wise.
bool weakly_dominates(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

/// Indices of feasible points not strictly dominated by another feasible point,
/// in input order. Duplicates are all kept.
std::vector<int> non_dominated_indices(const std::vector<OutputVector>& points);

std::vector<OutputVector> non_dominated_filter(const std::vector<OutputVector>& points);

/// Row-wise variant for an objective matrix (all rows assumed feasible).
std::vector<int> non_dominated_rows(const Matrix& objectives);

/// Removes duplicates and every row weakly dominated by another row. Rows are
/// returned sorted lexicographically (descending first coordinate).
Matrix strict_front(const Matrix& objectives);

}  // namespace pf2es
