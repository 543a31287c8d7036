#include "qdiv/bregman.hpp"

#include <cstdio>
#include <string>

#include "qdiv/errors.hpp"

namespace qdiv {

ExtendedReal ExtendedReal::finite(double v, double tol) {
  if (std::isnan(v)) throw DomainError("divergence evaluated to NaN");
  if (v < -tol) throw DomainError("divergence evaluated to negative value " + std::to_string(v));
  return ExtendedReal(v < 0.0 ? 0.0 : v);
}

std::string ExtendedReal::to_string(int decimals) const {
  if (is_infinite()) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value_);
  return buf;
}

double deviation(const ExtendedReal& a, const ExtendedReal& b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  return std::abs(a.value() - b.value());
}

std::ostream& operator<<(std::ostream& os, const ExtendedReal& v) { return os << v.to_string(); }

namespace {

void require_same_dim(const DensityState& x, const DensityState& y) {
  if (x.dim() != y.dim())
    throw DimensionMismatch("states have dimensions " + std::to_string(x.dim()) + " and " + std::to_string(y.dim()));
}

}  // namespace

double weight_outside_support(const DensityState& x, const DensityState& y) {
  require_same_dim(x, y);
  const auto& last = y.spectral().clusters.back();
  if (last.eigenvalue != 0.0) return 0.0;
  return std::real((last.basis.adjoint() * x.matrix() * last.basis).trace());
}

bool support_contained(const DensityState& x, const DensityState& y, const Tolerances& tol) {
  return weight_outside_support(x, y) < tol.supp;
}

ExtendedReal bregman(const NormalizedGenerator& f, const DensityState& x, const DensityState& y,
                     const Tolerances& tol) {
  require_same_dim(x, y);
  const bool finite_class = f.has_finite_zero_derivative();
  if (!finite_class && !support_contained(x, y, tol)) return ExtendedReal::infinity();

  double sum = 0.0;
  double scale = 0.0;
  for (const auto& cy : y.spectral().clusters) {
    const double b = cy.eigenvalue;
    if (!finite_class && b == 0.0) continue;
    const double fb = f.value(b);
    const double dfb = f.derivative(b);
    for (const auto& cx : x.spectral().clusters) {
      const double t = overlap(cx, cy);
      if (t < tol.num) continue;
      const double a = cx.eigenvalue;
      const double term = (f.value(a) - fb - dfb * (a - b)) * t;
      sum += term;
      scale += std::abs(term);
    }
  }
  return ExtendedReal::finite(sum, tol.num * std::max(1.0, scale));
}

ExtendedReal bregman_rank_one_pair(const NormalizedGenerator& f, const RankOneProjection& p,
                                   const RankOneProjection& q, const Tolerances& tol) {
  if (!f.has_finite_zero_derivative()) return bregman(f, DensityState(p, tol), DensityState(q, tol), tol);
  const double width = f.derivative(1.0) - f.derivative(0.0);
  return ExtendedReal::finite((1.0 - transition_probability(p, q)) * width, tol.num);
}

double rank_two_constant(const NormalizedGenerator& f, double lambda) {
  const double mu = 1.0 - lambda;
  return lambda * f.derivative(lambda) - f.value(lambda) + mu * f.derivative(mu) - f.value(mu);
}

ExtendedReal bregman_rank_one_vs_rank_two(const NormalizedGenerator& f, const RankOneProjection& r, double lambda,
                                          const RankOneProjection& p, const RankOneProjection& q,
                                          const Tolerances& tol) {
  if (!(lambda > 0.0 && lambda < 0.5)) throw PreconditionError("rank-two weight must lie in (0, 1/2)");
  const double rp = transition_probability(r, p);
  const double rq = transition_probability(r, q);
  if (transition_probability(p, q) >= tol.num) throw PreconditionError("P and Q must be orthogonal");
  if (1.0 - (rp + rq) >= tol.supp) {
    if (!f.has_finite_zero_derivative()) return ExtendedReal::infinity();
    throw PreconditionError("R is not supported in span(P, Q)");
  }
  const double mu = 1.0 - lambda;
  const double value = -f.derivative(lambda) * rp - f.derivative(mu) * rq + rank_two_constant(f, lambda);
  return ExtendedReal::finite(value, tol.num * std::max(1.0, std::abs(f.derivative(lambda))));
}

}  // namespace qdiv
