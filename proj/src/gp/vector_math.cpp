// Compiled with -ffast-math -fopenmp-simd so the loop maps onto libmvec.
// Keep this file free of anything that relies on NaN/Inf semantics.
#include "gp/vector_math.hpp"

#include <cmath>

namespace pf2es::gp {

void cos_inplace(double* __restrict values, long n) {
#pragma omp simd
  for (long i = 0; i < n; ++i) values[i] = std::cos(values[i]);
}

}  // namespace pf2es::gp
