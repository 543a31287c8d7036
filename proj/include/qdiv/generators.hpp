#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qdiv {

/// How f'(x) behaves as x -> 0+. Declared, never probed: it selects the
/// finite or the support-sensitive branch of the Bregman divergence.
struct ZeroDerivativeClass {
  enum class Kind { FiniteLimit, NegativeInfinity };

  Kind kind = Kind::NegativeInfinity;
  double value = -std::numeric_limits<double>::infinity();

  static ZeroDerivativeClass finite(double v) { return {Kind::FiniteLimit, v}; }
  static ZeroDerivativeClass negative_infinity() { return {}; }

  bool is_finite() const { return kind == Kind::FiniteLimit; }
};

using ScalarFunction = std::function<double(double)>;

/// Strictly convex f on (0, inf) given as (eval, deriv, f(0), zero-derivative
/// class). `matrix_entropy_member` is trusted metadata.
class GeneratorFunction {
 public:
  GeneratorFunction(std::string name, ScalarFunction eval, ScalarFunction deriv, double value_at_zero,
                    ZeroDerivativeClass zero_derivative, bool matrix_entropy_member);

  /// f(x) for x > 0, the declared limit at x == 0. Throws DomainError for x < 0.
  double value(double x) const;
  /// f'(x) for x > 0, the declared limit at x == 0 (possibly -inf).
  double derivative(double x) const;
  double operator()(double x) const { return value(x); }

  const std::string& name() const { return name_; }
  double value_at_zero() const { return value_at_zero_; }
  const ZeroDerivativeClass& zero_derivative() const { return zero_derivative_; }
  bool matrix_entropy_member() const { return matrix_entropy_member_; }

 private:
  std::string name_;
  ScalarFunction eval_;
  ScalarFunction deriv_;
  double value_at_zero_;
  ZeroDerivativeClass zero_derivative_;
  bool matrix_entropy_member_;
};

/// f(x) - f(0) - (f(1) - f(0)) x, so that value(0) == value(1) == 0 exactly.
/// Divergences are unchanged by this affine shift.
class NormalizedGenerator {
 public:
  explicit NormalizedGenerator(GeneratorFunction base);

  double value(double x) const;
  double derivative(double x) const;
  double operator()(double x) const { return value(x); }

  const std::string& name() const { return base_.name(); }
  const ZeroDerivativeClass& zero_derivative() const { return zero_derivative_; }
  bool has_finite_zero_derivative() const { return zero_derivative_.is_finite(); }
  bool matrix_entropy_member() const { return base_.matrix_entropy_member(); }
  const GeneratorFunction& base() const { return base_; }

  /// The normalized function as a plain generator (normalizing it again is a no-op).
  GeneratorFunction as_generator() const;

 private:
  GeneratorFunction base_;
  double offset_;
  double slope_;
  ZeroDerivativeClass zero_derivative_;
};

/// Throws ParameterError when f(0) or f(1) is not finite.
NormalizedGenerator normalize(const GeneratorFunction& f);

GeneratorFunction std_entropy();
/// (x^q - x)/(q - 1); requires q > 1.
GeneratorFunction power(double q);
GeneratorFunction quadratic();

/// Parses a CLI generator name: `xlogx`, `quadratic`, `power:q=<rational>`
/// where the rational is `a/b` or a decimal.
GeneratorFunction catalog(std::string_view name);

/// (f(a) - f(b)) / (a - b); increasing in each argument for strictly convex f.
double difference_quotient(const GeneratorFunction& f, double a, double b);
/// f(a/2 + 1/2) - f(a/2); strictly increasing on [0, 1] for strictly convex f.
double half_shift_gap(const GeneratorFunction& f, double a);

struct GeneratorViolation {
  enum class Kind { Convexity, DerivativeMonotonicity, DerivativeMismatch, ZeroLimit, NonFinite };
  Kind kind;
  double x;
  std::string detail;
};

struct GeneratorReport {
  std::vector<GeneratorViolation> violations;
  bool ok() const { return violations.empty(); }
};

std::string to_string(GeneratorViolation::Kind kind);

/// 200 log-spaced points in [1e-6, 1e2].
std::vector<double> default_validation_grid();

/// Checks strict midpoint convexity between consecutive grid points, strict
/// monotonicity of deriv, agreement of deriv with centered differences of eval,
/// and consistency of the declared finite zero limit. Grid must be nonempty,
/// sorted and positive.
GeneratorReport validate(const GeneratorFunction& f, std::span<const double> grid, double tol_num = 1e-9,
                         double fd_tol = 1e-6);

}  // namespace qdiv
