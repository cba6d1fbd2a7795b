#pragma once

namespace pf2es::gp {

/// out[i] = cos(in[i]) for finite inputs, vectorized through the system
/// vector math library (a few ulp of error).
void cos_inplace(double* values, long n);

}  // namespace pf2es::gp
