#pragma once

#include "core/types.hpp"

#include <cstdint>
#include <functional>

namespace pf2es::optim {

/// Objective on the flattened q*d batch (row-major: point 0 first). When
/// `grad` is non-null it receives the gradient of the returned value.
using AcquisitionObjective = std::function<double(const Vector& z, Vector* grad)>;

struct OptimizerConfig {
  int n_random = 5000;
  int n_starts = -1;  // negative means min(10 q d, 100)
  int max_iterations = 100;
  double gradient_tolerance = 1e-6;
  std::uint64_t seed = 0;

  int starts_for(int q, int d) const;
};

struct OptimizerResult {
  Matrix batch;  // q x d
  double value = 0.0;
  double best_random_value = 0.0;
  int starts = 0;
  /// Set when every refinement failed and the best random candidate is returned.
  bool warning = false;
};

/// Maximizes `acq` over the q-fold product of `bounds`: evaluates n_random
/// uniform batches, refines the best starts by bounded L-BFGS and returns the
/// best refined batch. Ties go to the lowest start index.
OptimizerResult multistart_maximize(const AcquisitionObjective& acq, const Bounds& bounds, int q,
                                    const OptimizerConfig& config);

}  // namespace pf2es::optim
