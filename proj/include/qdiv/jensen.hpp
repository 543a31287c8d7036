#pragma once

#include "qdiv/generators.hpp"
#include "qdiv/hermitian.hpp"
#include "qdiv/tolerances.hpp"

namespace qdiv {

/// The midpoint state (A + B)/2.
DensityState midpoint(const DensityState& a, const DensityState& b, const Tolerances& tol = {});

/// J_f(A, B) = tr(1/2 (f(A) + f(B)) - f((A + B)/2)). Only f(0) is consulted
/// at the boundary, never f'(0). Symmetric in A and B.
double jensen(const NormalizedGenerator& f, const DensityState& a, const DensityState& b,
              const Tolerances& tol = {});

/// Closed form for pure states with p = tr PQ:
/// -(f((1 + sqrt p)/2) + f((1 - sqrt p)/2)). Throws RangeError unless 0 <= p <= 1 (within tol).
double jensen_rank_one(const NormalizedGenerator& f, double p, double tol = 1e-9);

/// M_f = -2 f(1/2), the largest value J_f takes on states.
double jensen_max_constant(const NormalizedGenerator& f);

/// 1/2 (H_f(A, M) + H_f(B, M)) with M = (A + B)/2.
double jensen_via_bregman(const NormalizedGenerator& f, const DensityState& a, const DensityState& b,
                          const Tolerances& tol = {});

}  // namespace qdiv
