#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "qdiv/errors.hpp"
#include "qdiv/generators.hpp"

using namespace qdiv;

TEST_CASE("entropy generator") {
  const auto f = std_entropy();
  CHECK(f.value(0.0) == 0.0);
  CHECK(f.value(1.0) == 0.0);
  CHECK(f.derivative(2.0) == doctest::Approx(std::log(2.0) + 1.0));
  CHECK(f.derivative(0.0) == -std::numeric_limits<double>::infinity());
  CHECK_FALSE(f.zero_derivative().is_finite());
  CHECK(f.matrix_entropy_member());
  CHECK_THROWS_AS(f.value(-1.0), DomainError);
}

TEST_CASE("power family") {
  const auto f2 = normalize(power(2.0));
  for (double x : {0.0, 0.3, 1.0, 2.5}) CHECK(f2.value(x) == doctest::Approx(x * x - x));
  CHECK(f2.derivative(0.0) == doctest::Approx(-1.0));
  CHECK(f2.derivative(0.7) == doctest::Approx(0.4));

  const auto f3 = power(3.0);
  CHECK(f3.value(0.5) == doctest::Approx((0.125 - 0.5) / 2.0));
  CHECK(f3.zero_derivative().value == doctest::Approx(-0.5));
  CHECK(f3.zero_derivative().is_finite());
  CHECK_FALSE(f3.matrix_entropy_member());
  CHECK(power(1.5).matrix_entropy_member());

  CHECK_THROWS_AS(power(1.0), ParameterError);
  CHECK_THROWS_AS(power(0.5), ParameterError);
}

TEST_CASE("normalization") {
  const auto e = normalize(std_entropy());
  for (double x : {0.1, 0.5, 3.0}) CHECK(e.value(x) == doctest::Approx(x * std::log(x)));

  const GeneratorFunction square("square", [](double x) { return x * x; }, [](double x) { return 2 * x; }, 0.0,
                                 ZeroDerivativeClass::finite(0.0), true);
  const auto n = normalize(square);
  for (double x : {0.0, 0.25, 1.0, 4.0}) CHECK(n.value(x) == doctest::Approx(x * x - x));
  CHECK(n.zero_derivative().value == doctest::Approx(-1.0));

  const auto q = normalize(quadratic());
  const auto again = normalize(q.as_generator());
  for (double x : {0.0, 0.3, 1.0, 2.0}) CHECK(again.value(x) == q.value(x));

  const GeneratorFunction bad("bad", [](double x) { return 1.0 / x; }, [](double x) { return -1.0 / (x * x); },
                              std::numeric_limits<double>::infinity(), ZeroDerivativeClass::negative_infinity(), false);
  CHECK_THROWS_AS(normalize(bad), ParameterError);
}

TEST_CASE("catalog names") {
  CHECK(catalog("xlogx").name() == "xlogx");
  CHECK(catalog("quadratic").zero_derivative().value == doctest::Approx(-1.0));
  CHECK(catalog("power:q=3/2").value(4.0) == doctest::Approx(power(1.5).value(4.0)));
  CHECK(catalog("power:q=3").value(2.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(catalog("power:q=1"), ParameterError);
  CHECK_THROWS_AS(catalog("power:q=x"), ParameterError);
  CHECK_THROWS_AS(catalog("cube"), ParameterError);
}

TEST_CASE("validation of catalog generators passes") {
  const auto grid = default_validation_grid();
  CHECK(grid.size() == 200);
  for (const auto* name : {"xlogx", "quadratic", "power:q=1.5", "power:q=3"}) {
    const auto r = validate(catalog(name), grid);
    CHECK_MESSAGE(r.ok(), name);
  }
}

TEST_CASE("validation flags a concave function") {
  const GeneratorFunction concave("neg-square", [](double x) { return -x * x; }, [](double x) { return -2 * x; }, 0.0,
                                  ZeroDerivativeClass::finite(0.0), false);
  const auto r = validate(concave, default_validation_grid());
  REQUIRE_FALSE(r.ok());
  bool convexity = false;
  for (const auto& v : r.violations) convexity |= v.kind == GeneratorViolation::Kind::Convexity;
  CHECK(convexity);
}

TEST_CASE("validation flags a derivative that does not match") {
  // Smooth stand-in for |x - 1| paired with the derivative of a different function.
  const GeneratorFunction mismatched(
      "smooth-abs", [](double x) { return std::sqrt((x - 1) * (x - 1) + 0.01); },
      [](double x) { return std::tanh(x); }, std::sqrt(1.01), ZeroDerivativeClass::finite(0.0), false);
  const auto r = validate(mismatched, default_validation_grid());
  bool mismatch = false;
  for (const auto& v : r.violations) mismatch |= v.kind == GeneratorViolation::Kind::DerivativeMismatch;
  CHECK(mismatch);
}

TEST_CASE("validation rejects malformed grids") {
  const std::vector<double> unsorted = {1.0, 0.5};
  const std::vector<double> negative = {-1.0, 0.5};
  CHECK_THROWS_AS(validate(quadratic(), std::vector<double>{}), ParameterError);
  CHECK_THROWS_AS(validate(quadratic(), unsorted), ParameterError);
  CHECK_THROWS_AS(validate(quadratic(), negative), ParameterError);
}

TEST_CASE("difference quotient and half-shift gap are increasing") {
  for (const auto* name : {"xlogx", "quadratic", "power:q=1.5"}) {
    const auto f = catalog(name);
    CHECK(difference_quotient(f, 0.5, 2.0) > difference_quotient(f, 0.2, 2.0));
    CHECK(difference_quotient(f, 3.0, 0.1) > difference_quotient(f, 2.0, 0.1));
    double prev = half_shift_gap(f, 0.0);
    for (int i = 1; i <= 20; ++i) {
      const double cur = half_shift_gap(f, i / 20.0);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}
