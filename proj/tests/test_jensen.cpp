#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "qdiv/errors.hpp"
#include "qdiv/jensen.hpp"
#include "qdiv/random.hpp"

using namespace qdiv;
using Eigen::MatrixXcd;
using test::diag_state;

namespace {

const NormalizedGenerator kEntropy = normalize(std_entropy());
const NormalizedGenerator kQuadratic = normalize(quadratic());
const NormalizedGenerator kPower15 = normalize(power(1.5));
const NormalizedGenerator kPower3 = normalize(power(3.0));

}  // namespace

TEST_CASE("hand-computed values") {
  const auto a = diag_state({1, 0});
  const auto b = diag_state({0, 1});
  CHECK(jensen(kQuadratic, a, b) == doctest::Approx(0.5));
  CHECK(jensen(kEntropy, a, b) == doctest::Approx(std::log(2.0)));
  CHECK(jensen_via_bregman(kEntropy, a, b) == doctest::Approx(std::log(2.0)));
  CHECK(jensen(kEntropy, a, a) == 0.0);
  CHECK(jensen_via_bregman(kQuadratic, a, a) == doctest::Approx(0.0));
}

TEST_CASE("maximum constant") {
  CHECK(jensen_max_constant(kEntropy) == doctest::Approx(std::log(2.0)));
  CHECK(jensen_max_constant(kQuadratic) == doctest::Approx(0.5));
  CHECK(jensen_max_constant(kPower3) == doctest::Approx(0.375));
}

TEST_CASE("pure-state law") {
  CHECK(jensen_rank_one(kEntropy, 1.0) == doctest::Approx(0.0));
  CHECK(jensen_rank_one(kEntropy, 0.0) == doctest::Approx(std::log(2.0)));
  for (const auto* f : {&kEntropy, &kQuadratic, &kPower15, &kPower3})
    CHECK(jensen_rank_one(*f, 0.0) == doctest::Approx(jensen_max_constant(*f)));
  CHECK(jensen_rank_one(kQuadratic, 0.5) == doctest::Approx(0.25));
  CHECK_THROWS_AS(jensen_rank_one(kQuadratic, 1.1), RangeError);
  CHECK_THROWS_AS(jensen_rank_one(kQuadratic, -0.1), RangeError);

  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    const auto p = random_pure(2 + k % 5, rng), q = random_pure(2 + k % 5, rng);
    CHECK(std::abs(jensen(kPower15, DensityState(p), DensityState(q)) -
                   jensen_rank_one(kPower15, transition_probability(p, q))) < 1e-10);
  }
}

TEST_CASE("symmetry, quadratic closed form and the midpoint identity") {
  Rng rng(2);
  for (int k = 0; k < 40; ++k) {
    const auto d = 2 + k % 5;
    const auto a = random_state(d, 1 + k % d, rng);
    const auto b = random_state(d, 1 + (k / 3) % d, rng);
    CHECK(std::abs(jensen(kQuadratic, a, b) - test::hs_square((a.matrix() - b.matrix()) / 2.0)) < 1e-10);
    for (const auto* f : {&kEntropy, &kQuadratic, &kPower15, &kPower3}) {
      const double j = jensen(*f, a, b);
      CHECK(j >= 0.0);
      CHECK(j <= jensen_max_constant(*f) + 1e-12);
      CHECK(std::abs(j - jensen(*f, b, a)) < 1e-12);
      CHECK(std::abs(j - jensen_via_bregman(*f, a, b)) < 1e-9);
    }
  }
}

TEST_CASE("midpoint eigenvalues interlace") {
  // Weyl: the eigenvalues of (A + B)/2 lie between the averaged sorted spectra bounds.
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto a = random_state(4, 4, rng), b = random_state(4, 2, rng);
    const auto m = midpoint(a, b);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> ea(a.matrix()), eb(b.matrix()), em(m.matrix());
    const Eigen::Index n = 4;
    for (Eigen::Index i = 0; i < n; ++i) {
      // ascending order: lambda_i(A + B) >= lambda_i(A) + lambda_0(B)
      CHECK(2 * em.eigenvalues()(i) >= ea.eigenvalues()(i) + eb.eigenvalues()(0) - 1e-12);
      CHECK(2 * em.eigenvalues()(i) <= ea.eigenvalues()(i) + eb.eigenvalues()(n - 1) + 1e-12);
    }
  }
}

TEST_CASE("dimension mismatch") {
  CHECK_THROWS_AS(jensen(kEntropy, diag_state({1, 0}), diag_state({1, 0, 0})), DimensionMismatch);
}
