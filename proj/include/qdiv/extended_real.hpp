#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace qdiv {

/// A divergence value: a finite nonnegative real or +infinity.
class ExtendedReal {
 public:
  /// Values in [-tol, 0) are clamped to 0; anything more negative is a
  /// numerical failure and throws DomainError.
  static ExtendedReal finite(double v, double tol = 1e-9);
  static ExtendedReal infinity() { return ExtendedReal(std::numeric_limits<double>::infinity()); }

  bool is_finite() const { return std::isfinite(value_); }
  bool is_infinite() const { return !is_finite(); }
  /// The finite value, or +inf.
  double value() const { return value_; }

  /// "inf" or the value with `decimals` digits after the point.
  std::string to_string(int decimals = 12) const;

  friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

 private:
  explicit ExtendedReal(double v) : value_(v) {}
  double value_;
};

/// |a - b| with inf - inf == 0 and inf - finite == inf.
double deviation(const ExtendedReal& a, const ExtendedReal& b);

std::ostream& operator<<(std::ostream& os, const ExtendedReal& v);

}  // namespace qdiv
