#include "qdiv/generators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <utility>

#include "qdiv/errors.hpp"

namespace qdiv {

GeneratorFunction::GeneratorFunction(std::string name, ScalarFunction eval, ScalarFunction deriv,
                                     double value_at_zero, ZeroDerivativeClass zero_derivative,
                                     bool matrix_entropy_member)
    : name_(std::move(name)),
      eval_(std::move(eval)),
      deriv_(std::move(deriv)),
      value_at_zero_(value_at_zero),
      zero_derivative_(zero_derivative),
      matrix_entropy_member_(matrix_entropy_member) {
  if (!eval_ || !deriv_) throw ParameterError("generator '" + name_ + "' needs both eval and deriv");
}

double GeneratorFunction::value(double x) const {
  if (x == 0.0) return value_at_zero_;
  if (!(x > 0.0)) throw DomainError("generator '" + name_ + "' evaluated at " + std::to_string(x));
  return eval_(x);
}

double GeneratorFunction::derivative(double x) const {
  if (x == 0.0) return zero_derivative_.value;
  if (!(x > 0.0)) throw DomainError("generator '" + name_ + "' derivative at " + std::to_string(x));
  return deriv_(x);
}

NormalizedGenerator::NormalizedGenerator(GeneratorFunction base)
    : base_(std::move(base)), offset_(base_.value_at_zero()), slope_(base_.value(1.0) - offset_) {
  if (!std::isfinite(offset_) || !std::isfinite(slope_))
    throw ParameterError("generator '" + base_.name() + "' needs finite f(0) and f(1)");
  const auto& z = base_.zero_derivative();
  zero_derivative_ = z.is_finite() ? ZeroDerivativeClass::finite(z.value - slope_) : z;
}

// (f(x) - f(0)) - slope*x; at x = 1 both terms are the same rounded number.
double NormalizedGenerator::value(double x) const { return (base_.value(x) - offset_) - slope_ * x; }

double NormalizedGenerator::derivative(double x) const { return base_.derivative(x) - slope_; }

GeneratorFunction NormalizedGenerator::as_generator() const {
  auto self = *this;
  return GeneratorFunction(
      name(), [self](double x) { return self.value(x); }, [self](double x) { return self.derivative(x); },
      0.0, zero_derivative_, matrix_entropy_member());
}

NormalizedGenerator normalize(const GeneratorFunction& f) { return NormalizedGenerator(f); }

GeneratorFunction std_entropy() {
  return GeneratorFunction(
      "xlogx", [](double x) { return x * std::log(x); }, [](double x) { return std::log(x) + 1.0; }, 0.0,
      ZeroDerivativeClass::negative_infinity(), true);
}

namespace {

GeneratorFunction make_power(double q, std::string name) {
  if (!(q > 1.0) || !std::isfinite(q)) throw ParameterError("power generator needs q > 1, got " + std::to_string(q));
  const double denom = q - 1.0;
  return GeneratorFunction(
      std::move(name), [q, denom](double x) { return (std::pow(x, q) - x) / denom; },
      [q, denom](double x) { return (q * std::pow(x, q - 1.0) - 1.0) / denom; }, 0.0,
      ZeroDerivativeClass::finite(-1.0 / denom), q <= 2.0);
}

double parse_number(std::string_view text) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty())
    throw ParameterError("not a number: '" + std::string(text) + "'");
  return v;
}

double parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_number(text);
  const double num = parse_number(text.substr(0, slash));
  const double den = parse_number(text.substr(slash + 1));
  if (den == 0.0) throw ParameterError("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

std::string format_q(double q) {
  std::ostringstream os;
  os.precision(17);
  os << q;
  return os.str();
}

}  // namespace

GeneratorFunction power(double q) { return make_power(q, "power:q=" + format_q(q)); }

GeneratorFunction quadratic() {
  return GeneratorFunction(
      "quadratic", [](double x) { return x * x - x; }, [](double x) { return 2.0 * x - 1.0; }, 0.0,
      ZeroDerivativeClass::finite(-1.0), true);
}

GeneratorFunction catalog(std::string_view name) {
  if (name == "xlogx") return std_entropy();
  if (name == "quadratic") return quadratic();
  constexpr std::string_view prefix = "power:q=";
  if (name.substr(0, prefix.size()) == prefix)
    return make_power(parse_rational(name.substr(prefix.size())), std::string(name));
  throw ParameterError("unknown generator '" + std::string(name) +
                       "' (expected xlogx, quadratic or power:q=<rational>)");
}

double difference_quotient(const GeneratorFunction& f, double a, double b) {
  if (a == b) throw ParameterError("difference quotient needs a != b");
  return (f.value(a) - f.value(b)) / (a - b);
}

double half_shift_gap(const GeneratorFunction& f, double a) { return f.value(0.5 * a + 0.5) - f.value(0.5 * a); }

std::string to_string(GeneratorViolation::Kind kind) {
  switch (kind) {
    case GeneratorViolation::Kind::Convexity: return "convexity";
    case GeneratorViolation::Kind::DerivativeMonotonicity: return "derivative-monotonicity";
    case GeneratorViolation::Kind::DerivativeMismatch: return "derivative-mismatch";
    case GeneratorViolation::Kind::ZeroLimit: return "zero-limit";
    case GeneratorViolation::Kind::NonFinite: return "non-finite";
  }
  return "unknown";
}

std::vector<double> default_validation_grid() {
  constexpr int n = 200;
  const double lo = std::log(1e-6);
  const double hi = std::log(1e2);
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = std::exp(lo + (hi - lo) * i / (n - 1));
  grid.front() = 1e-6;
  grid.back() = 1e2;
  return grid;
}

GeneratorReport validate(const GeneratorFunction& f, std::span<const double> grid, double tol_num, double fd_tol) {
  if (grid.empty()) throw ParameterError("validation grid is empty");
  if (!std::is_sorted(grid.begin(), grid.end()) || !(grid.front() > 0.0))
    throw ParameterError("validation grid must be sorted and positive");

  GeneratorReport report;
  auto flag = [&](GeneratorViolation::Kind kind, double x, std::string detail) {
    report.violations.push_back({kind, x, std::move(detail)});
  };

  std::vector<double> values(grid.size());
  std::vector<double> derivs(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = f.value(grid[i]);
    derivs[i] = f.derivative(grid[i]);
    if (!std::isfinite(values[i]) || !std::isfinite(derivs[i]))
      flag(GeneratorViolation::Kind::NonFinite, grid[i], "eval or deriv is not finite");
  }

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i];
    const double b = grid[i + 1];
    if (a == b) continue;
    const double mid = f.value(0.5 * (a + b));
    const double chord = 0.5 * (values[i] + values[i + 1]);
    if (!(mid < chord))
      flag(GeneratorViolation::Kind::Convexity, 0.5 * (a + b),
           "f(mid) = " + std::to_string(mid) + " is not below the chord " + std::to_string(chord));
    if (!(derivs[i + 1] > derivs[i]))
      flag(GeneratorViolation::Kind::DerivativeMonotonicity, b, "deriv does not increase past x = " + std::to_string(a));
  }

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const double h = 1e-6 * x;
    const double fd = (f.value(x + h) - f.value(x - h)) / (2.0 * h);
    if (std::abs(fd - derivs[i]) > fd_tol * std::max(1.0, std::abs(derivs[i])))
      flag(GeneratorViolation::Kind::DerivativeMismatch, x,
           "deriv = " + std::to_string(derivs[i]) + ", centered difference = " + std::to_string(fd));
  }

  const auto& z = f.zero_derivative();
  if (z.is_finite()) {
    if (!std::isfinite(z.value)) {
      flag(GeneratorViolation::Kind::ZeroLimit, 0.0, "declared finite limit is not finite");
    } else {
      // deriv increases, so it must stay above its limit at 0 along the grid.
      for (std::size_t i = 0; i < grid.size(); ++i)
        if (derivs[i] < z.value - tol_num * std::max(1.0, std::abs(z.value))) {
          flag(GeneratorViolation::Kind::ZeroLimit, grid[i],
               "deriv = " + std::to_string(derivs[i]) + " lies below the declared limit " + std::to_string(z.value));
          break;
        }
    }
  }
  return report;
}

}  // namespace qdiv
