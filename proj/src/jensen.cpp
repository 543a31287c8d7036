#include "qdiv/jensen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdiv/bregman.hpp"
#include "qdiv/errors.hpp"

namespace qdiv {

DensityState midpoint(const DensityState& a, const DensityState& b, const Tolerances& tol) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("states have dimensions " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  return DensityState((a.matrix() + b.matrix()) / 2.0, tol);
}

double jensen(const NormalizedGenerator& f, const DensityState& a, const DensityState& b, const Tolerances& tol) {
  const DensityState m = midpoint(a, b, tol);
  auto fv = [&f](double x) { return f.value(x); };
  const double ta = trace_function(a.spectral(), fv);
  const double tb = trace_function(b.spectral(), fv);
  const double tm = trace_function(m.spectral(), fv);
  const double value = 0.5 * (ta + tb) - tm;
  const double slack = tol.num * std::max({1.0, std::abs(ta), std::abs(tb), std::abs(tm)});
  if (value < -slack) throw DomainError("Jensen divergence evaluated to " + std::to_string(value));
  return std::max(value, 0.0);
}

double jensen_rank_one(const NormalizedGenerator& f, double p, double tol) {
  if (!(p >= -tol && p <= 1.0 + tol)) throw RangeError("transition probability out of [0, 1]: " + std::to_string(p));
  const double s = std::sqrt(std::clamp(p, 0.0, 1.0));
  return -(f.value(0.5 * (1.0 + s)) + f.value(0.5 * (1.0 - s)));
}

double jensen_max_constant(const NormalizedGenerator& f) { return -2.0 * f.value(0.5); }

double jensen_via_bregman(const NormalizedGenerator& f, const DensityState& a, const DensityState& b,
                          const Tolerances& tol) {
  const DensityState m = midpoint(a, b, tol);
  const ExtendedReal ha = bregman(f, a, m, tol);
  const ExtendedReal hb = bregman(f, b, m, tol);
  if (ha.is_infinite() || hb.is_infinite())
    throw DomainError("Bregman divergence to the midpoint is infinite; support test failed");
  return 0.5 * (ha.value() + hb.value());
}

}  // namespace qdiv
