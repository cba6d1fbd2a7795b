#pragma once

#include "core/types.hpp"

#include <cstdint>

namespace pf2es::acquisition {

/// Scrambled Halton points in (0,1)^dim (n x dim). Each dimension uses a
/// prime base with independent random digit permutations per digit position,
/// and the residual below the last digit is filled uniformly.
Matrix scrambled_halton(int n, int dim, std::uint64_t seed);

/// Standard-normal base samples: inverse-CDF of scrambled Halton points.
Matrix normal_base_samples(int n, int dim, std::uint64_t seed);

}  // namespace pf2es::acquisition
