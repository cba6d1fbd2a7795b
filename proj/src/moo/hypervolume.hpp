#pragma once

#include "core/types.hpp"

namespace pf2es::moo {

/// Exact hypervolume (maximization) of the region dominated by the rows of
/// `points` and bounded below by `ref`. Rows that do not strictly exceed ref
/// in every coordinate add nothing. Supports M = 1, 2, 3; larger M throws
/// UnsupportedDimensionError.
double hypervolume(const Matrix& points, const Vector& ref);

}  // namespace pf2es::moo
