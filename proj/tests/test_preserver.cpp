#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "qdiv/bregman.hpp"
#include "qdiv/errors.hpp"
#include "qdiv/jensen.hpp"
#include "qdiv/preserver.hpp"
#include "qdiv/random.hpp"

using namespace qdiv;
using Eigen::MatrixXcd;
using test::diag;

namespace {

const NormalizedGenerator kEntropy = normalize(std_entropy());
const NormalizedGenerator kQuadratic = normalize(quadratic());
const NormalizedGenerator kPower15 = normalize(power(1.5));
const NormalizedGenerator kPower3 = normalize(power(3.0));

std::vector<RankOneProjection> images_under(const SymmetryOp& op, Eigen::Index dim) {
  std::vector<RankOneProjection> out;
  for (const auto& p : wigner_probes(dim)) out.push_back(op.apply(p.projection));
  return out;
}

}  // namespace

TEST_CASE("transition from bregman") {
  CHECK(transition_from_bregman(kQuadratic, 0.0) == doctest::Approx(1.0));
  CHECK(transition_from_bregman(kQuadratic, 2.0) == doctest::Approx(0.0));
  CHECK(transition_from_bregman(kQuadratic, 1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(transition_from_bregman(kQuadratic, 2.5), RangeError);
  CHECK_THROWS_AS(transition_from_bregman(kEntropy, 1.0), PreconditionError);
}

TEST_CASE("transition from jensen") {
  CHECK(transition_from_jensen(kQuadratic, 0.0) == doctest::Approx(1.0));
  CHECK(transition_from_jensen(kQuadratic, 0.25) == doctest::Approx(0.5).epsilon(1e-8));
  for (const auto* f : {&kEntropy, &kQuadratic, &kPower15, &kPower3}) {
    CHECK(transition_from_jensen(*f, jensen_max_constant(*f)) == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
    for (double p : {0.1, 0.37, 0.9}) CHECK(std::abs(transition_from_jensen(*f, jensen_rank_one(*f, p)) - p) < 1e-8);
  }
  CHECK_THROWS_AS(transition_from_jensen(kQuadratic, 0.6), RangeError);
}

TEST_CASE("transition from the rank-two closed form") {
  Rng rng(1);
  const auto p = RankOneProjection::basis(2, 0), q = RankOneProjection::basis(2, 1);
  for (int k = 0; k < 20; ++k) {
    const auto r = random_pure(2, rng);
    const double l = 0.05 + 0.4 * rng.uniform();
    const double h = bregman_rank_one_vs_rank_two(kEntropy, r, l, p, q).value();
    CHECK(std::abs(transition_from_rank_two(kEntropy, l, h) - transition_probability(r, p)) < 1e-9);
  }
}

TEST_CASE("rank-two spectrum recovery") {
  CHECK(recover_rank_two_spectrum(kQuadratic, 1.0) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(recover_rank_two_spectrum(kEntropy, std::log(3.0)) == doctest::Approx(0.25).epsilon(1e-9));
  const double near_half = recover_rank_two_spectrum(kEntropy, 1e-6);
  CHECK(near_half < 0.5);
  CHECK(near_half > 0.4999);
  CHECK_THROWS_AS(recover_rank_two_spectrum(kQuadratic, 0.0), RangeError);
  CHECK_THROWS_AS(recover_rank_two_spectrum(kQuadratic, -1.0), RangeError);
  CHECK_THROWS_AS(recover_rank_two_spectrum(kQuadratic, 2.5), RangeError);
  for (double l : {0.011, 0.1, 0.3, 0.489})
    for (const auto* f : {&kEntropy, &kQuadratic, &kPower15})
      CHECK(std::abs(recover_rank_two_spectrum(*f, f->derivative(1 - l) - f->derivative(l)) - l) < 1e-8);
}

TEST_CASE("max divergence functional") {
  const DensityState pure(RankOneProjection::basis(2, 0));
  const DensityState maximally_mixed(MatrixXcd(MatrixXcd::Identity(2, 2) / 2.0));
  CHECK(max_divergence_functional(kQuadratic, pure) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(max_divergence_functional(kQuadratic, maximally_mixed) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK_THROWS_AS(max_divergence_functional(kEntropy, pure), PreconditionError);
  for (const auto* f : {&kQuadratic, &kPower15, &kPower3})
    for (Eigen::Index d = 2; d <= 3; ++d)
      CHECK(max_divergence_functional(*f, DensityState(RankOneProjection::basis(d, 0))) >
            max_divergence_functional(*f, DensityState(MatrixXcd(MatrixXcd::Identity(d, d) / double(d)))));
}

TEST_CASE("purity detection") {
  const double ref = max_divergence_functional(kQuadratic, DensityState(RankOneProjection::basis(2, 0)));
  CHECK(is_pure_by_max(kQuadratic, DensityState(RankOneProjection::basis(2, 1)), ref).pure);
  CHECK_FALSE(is_pure_by_max(kQuadratic, DensityState(MatrixXcd(MatrixXcd::Identity(2, 2) / 2.0)), ref).pure);
  const auto almost = is_pure_by_max(kQuadratic, test::diag_state({0.9, 0.1}), ref);
  CHECK_FALSE(almost.pure);
  CHECK(almost.margin > 1e-3);
}

TEST_CASE("probe set") {
  const auto probes = wigner_probes(3);
  REQUIRE(probes.size() == 6);
  CHECK(probes[0].label == "e1");
  CHECK(probes[3].label == "e1+e2");
  CHECK(probes[5].label == "e1+ie2");
}

TEST_CASE("wigner reconstruction") {
  SUBCASE("identity") {
    const auto w = wigner_reconstruct(images_under(SymmetryOp::identity(3), 3), 3);
    CHECK_FALSE(w.op.antiunitary());
    CHECK(max_abs_entry(w.op.matrix() - MatrixXcd::Identity(3, 3)) < 1e-12);
  }
  SUBCASE("entrywise conjugation") {
    const auto w = wigner_reconstruct(images_under(SymmetryOp(MatrixXcd::Identity(3, 3), true), 3), 3);
    CHECK(w.op.antiunitary());
    CHECK(max_abs_entry(w.op.matrix() - MatrixXcd::Identity(3, 3)) < 1e-12);
  }
  SUBCASE("random unitaries and antiunitaries") {
    Rng rng(7);
    for (Eigen::Index d = 2; d <= 5; ++d)
      for (const bool anti : {false, true}) {
        const SymmetryOp v(random_unitary(d, rng), anti);
        const auto w = wigner_reconstruct(images_under(v, d), d);
        CHECK(w.op.antiunitary() == anti);
        CHECK(w.max_probe_residual < 1e-8);
        CHECK(std::abs(w.op.matrix()(0, 0).imag()) == 0.0);
        for (int k = 0; k < 100; ++k) {
          const MatrixXcd r = random_pure(d, rng).matrix();
          CHECK(max_abs_entry(w.op.apply(r) - v.apply(r)) < 1e-8);
        }
      }
  }
  SUBCASE("corrupted image") {
    Rng rng(8);
    auto images = images_under(SymmetryOp(random_unitary(3, rng), false), 3);
    images[4] = random_pure(3, rng);
    CHECK_THROWS_AS(wigner_reconstruct(images, 3), NotAPreserverError);
  }
  SUBCASE("bad input") {
    CHECK_THROWS_AS(wigner_reconstruct(images_under(SymmetryOp::identity(1), 1), 1), DegenerateInputError);
    auto images = images_under(SymmetryOp::identity(3), 3);
    images.pop_back();
    CHECK_THROWS_AS(wigner_reconstruct(images, 3), ParameterError);
  }
}

TEST_CASE("oracles") {
  const auto t = transpose_oracle(2);
  MatrixXcd m(2, 2);
  m << 0.5, std::complex<double>(0, 0.5), std::complex<double>(0, -0.5), 0.5;
  CHECK(max_abs_entry(t(DensityState(m)).matrix() - m.transpose()) < 1e-15);
  const auto bad = PreserverOracle(2, [](const MatrixXcd& a) { return MatrixXcd(2.0 * a); }, "doubling");
  CHECK_THROWS_AS(bad(DensityState(m)), OracleError);
  CHECK_THROWS_AS(parse_oracle("rotate", 2), ParameterError);
  CHECK(parse_oracle("depolarize:p=0.25", 2).dim() == 2);
  const auto table = PreserverOracle::from_table(2, {{diag({1, 0}), diag({0, 1})}});
  CHECK(max_abs_entry(table(test::diag_state({1, 0})).matrix() - diag({0, 1})) < 1e-15);
  CHECK_THROWS_AS(table(test::diag_state({0, 1})), OracleError);
}

TEST_CASE("transition table") {
  std::vector<RankOneProjection> basis;
  for (int i = 0; i < 3; ++i) basis.push_back(RankOneProjection::basis(3, i));
  Rng rng(9);
  const SymmetryOp v(random_unitary(3, rng), false);
  std::vector<RankOneProjection> rotated;
  for (const auto& b : basis) rotated.push_back(v.apply(b));
  CHECK(transition_table(basis, rotated).completeness_defect() < 1e-12);
}

TEST_CASE("verify_preserver") {
  Rng rng(10);
  SUBCASE("seeded unitary, bregman, entropy") {
    const SymmetryOp v(random_unitary(3, rng), false);
    const auto r = verify_preserver(kEntropy, conjugation_oracle(v), DivergenceKind::Bregman);
    CHECK(r.passed());
    CHECK(r.max_divergence_deviation < 1e-8);
    CHECK(r.max_state_residual < 1e-8);
    CHECK(r.max_transition_deviation < 1e-8);
    CHECK_FALSE(r.reconstruction->antiunitary());
  }
  SUBCASE("transposition, jensen, entropy") {
    const auto r = verify_preserver(kEntropy, transpose_oracle(3), DivergenceKind::Jensen);
    CHECK(r.passed());
    CHECK(r.reconstruction->antiunitary());
  }
  SUBCASE("antiunitary, bregman, quadratic") {
    const SymmetryOp v(random_unitary(4, rng), true);
    const auto r = verify_preserver(kQuadratic, conjugation_oracle(v), DivergenceKind::Bregman);
    CHECK(r.passed());
    CHECK(r.reconstruction->antiunitary());
  }
  SUBCASE("depolarizing map is flagged") {
    const auto r = verify_preserver(kEntropy, depolarizing_oracle(3, 0.5), DivergenceKind::Jensen);
    CHECK_FALSE(r.divergence_preserved());
    CHECK(r.max_divergence_deviation > 1e-3);
    CHECK_FALSE(r.passed());
  }
  SUBCASE("dephasing map is flagged") {
    const auto r = verify_preserver(kQuadratic, dephasing_oracle(3), DivergenceKind::Bregman);
    CHECK_FALSE(r.passed());
  }
}

TEST_CASE("divergence kind names") {
  CHECK(parse_divergence_kind("bregman") == DivergenceKind::Bregman);
  CHECK(to_string(DivergenceKind::Jensen) == "jensen");
  CHECK_THROWS_AS(parse_divergence_kind("kl"), ParameterError);
}
