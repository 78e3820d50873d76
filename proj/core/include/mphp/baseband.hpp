#pragma once

#include <vector>

#include "mphp/numerics.hpp"

namespace mphp {

/// H_g^H F_g: the reduced-dimension channel seen by group g's baseband.
ComplexMatrix effective_channel(const ComplexMatrix& group_channel, const ComplexMatrix& group_rf);

/// Zero-forcing precoder for an S x N effective channel (S <= N): the
/// columns of Hbar^H (Hbar Hbar^H)^{-1} scaled to unit norm. Throws
/// kNearSingular when Hbar Hbar^H is too ill-conditioned (treated as an
/// outage by callers).
ComplexMatrix zf_precoder(const ComplexMatrix& effective);

/// p_k = P / (K ||F_g w_k||^2) for every column of W_g.
std::vector<double> power_allocation(const ComplexMatrix& group_rf, const ComplexMatrix& baseband,
                                     double total_power, int user_count);

}  // namespace mphp
