#pragma once

#include "qdiv/extended_real.hpp"
#include "qdiv/generators.hpp"
#include "qdiv/hermitian.hpp"
#include "qdiv/tolerances.hpp"

namespace qdiv {

/// tr((I - supp Y) X), the weight X puts outside the support of Y.
double weight_outside_support(const DensityState& x, const DensityState& y);

/// supp X within supp Y, decided as weight_outside_support(X, Y) < tol.supp.
bool support_contained(const DensityState& x, const DensityState& y, const Tolerances& tol = {});

/// Bregman f-divergence H_f(X, Y) = tr(f(X) - f(Y) - f'(Y)(X - Y)), extended
/// to singular states by the spectral computation rules:
///  - f'(0+) = -inf: +inf unless supp X within supp Y, otherwise the double
///    sum over eigenvalues x of X and nonzero eigenvalues y of Y;
///  - f'(0+) finite: the full double sum with f'(0) the declared limit.
/// Terms whose overlap tr(P_x Q_y) is below tol.num are skipped.
ExtendedReal bregman(const NormalizedGenerator& f, const DensityState& x, const DensityState& y,
                     const Tolerances& tol = {});

/// (1 - tr PQ)(f'(1) - f'(0)) for finite-derivative generators; other
/// generators go through the general rule (0 if P == Q, +inf otherwise).
ExtendedReal bregman_rank_one_pair(const NormalizedGenerator& f, const RankOneProjection& p,
                                   const RankOneProjection& q, const Tolerances& tol = {});

/// C = l f'(l) - f(l) + m f'(m) - f(m) with m = 1 - l.
double rank_two_constant(const NormalizedGenerator& f, double lambda);

/// H_f(R, l P + (1 - l) Q) for orthogonal pure P, Q and pure R in their span:
/// -f'(l) tr RP - f'(1 - l) tr RQ + C. Requires 0 < l < 1/2.
/// R leaving span(P, Q) yields +inf for f'(0+) = -inf and PreconditionError otherwise.
ExtendedReal bregman_rank_one_vs_rank_two(const NormalizedGenerator& f, const RankOneProjection& r, double lambda,
                                          const RankOneProjection& p, const RankOneProjection& q,
                                          const Tolerances& tol = {});

}  // namespace qdiv
