#pragma once

#include "core/types.hpp"
#include "gp/surrogate.hpp"

#include <cstdint>
#include <vector>

namespace pf2es::gp {

/// Approximate posterior sample of every output, as a deterministic function
/// of x. Each output is a random-Fourier-feature draw from the Matérn-5/2
/// prior, corrected by a kernel-space update that conditions it on the
/// training data:
///   f(x) = sum_j w_j phi_j(x) + k(x, X) (K + s2n I)^{-1} (y - Phi(X) w - e)
class TrajectorySample {
 public:
  struct OutputPath {
    Matrix frequencies;  // (n_features x d), already divided by the lengthscales
    Vector phases;
    Vector weights;      // prior feature weights times the feature amplitude
    Vector update;       // kernel-space correction coefficients
    Matern52 kernel;
    double offset = 0.0;
    double scale = 1.0;
  };

  TrajectorySample() = default;
  TrajectorySample(Bounds bounds, Matrix train_unit, std::vector<OutputPath> paths, std::uint64_t seed)
      : bounds_(std::move(bounds)), train_unit_(std::move(train_unit)), paths_(std::move(paths)), seed_(seed) {}

  int num_outputs() const { return static_cast<int>(paths_.size()); }
  int num_features() const { return paths_.empty() ? 0 : static_cast<int>(paths_.front().phases.size()); }
  std::uint64_t seed() const { return seed_; }

  Vector evaluate(const Eigen::Ref<const Vector>& x) const;

  /// Row-wise evaluation: (n x d) points -> (n x outputs).
  Matrix evaluate_batch(const Matrix& xs) const;

 private:
  Bounds bounds_;
  Matrix train_unit_;
  std::vector<OutputPath> paths_;
  std::uint64_t seed_ = 0;
};

/// Draws one trajectory bundle (all outputs) from the surrogate posterior.
/// Requires n_features >= 64.
TrajectorySample sample_trajectory(const IndependentGPSurrogate& surrogate, int n_features, std::uint64_t seed);

}  // namespace pf2es::gp
