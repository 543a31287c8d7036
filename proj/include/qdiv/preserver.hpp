#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qdiv/extended_real.hpp"
#include "qdiv/generators.hpp"
#include "qdiv/hermitian.hpp"
#include "qdiv/tolerances.hpp"

namespace qdiv {

struct PreserverOptions {
  double bisect_tol = 1e-10;
  // Allowed disagreement between probe and image transition probabilities.
  double wigner_tol = 1e-8;
  // Allowed max-entry residual of U probe U* against each probe image.
  double reconstruct_tol = 1e-6;
  double pure_margin = 1e-3;
};

/// Budget of the heuristic search behind max_divergence_functional.
struct SearchBudget {
  int random_candidates = 512;
  int refinement_steps = 50;
  std::uint64_t seed = 0x5eed;
};

/// Unitary U with an antiunitary flag; acts as A -> U A U*, or U conj(A) U*
/// when antiunitary.
class SymmetryOp {
 public:
  SymmetryOp(Eigen::MatrixXcd u, bool antiunitary, double tol = 1e-6);

  static SymmetryOp identity(Eigen::Index dim) { return SymmetryOp(Eigen::MatrixXcd::Identity(dim, dim), false); }

  const Eigen::MatrixXcd& matrix() const { return u_; }
  bool antiunitary() const { return antiunitary_; }
  Eigen::Index dim() const { return u_.rows(); }

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& a) const;
  DensityState apply(const DensityState& a, const Tolerances& tol = {}) const;
  RankOneProjection apply(const RankOneProjection& p) const;

 private:
  Eigen::MatrixXcd u_;
  bool antiunitary_;
};

/// A map on states of a fixed dimension, queried through a callback or a
/// lookup table. Outputs are validated as states on every query.
class PreserverOracle {
 public:
  using Map = std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>;

  PreserverOracle(Eigen::Index dim, Map map, std::string description);

  /// Table lookup: an input matches an entry when their max-entry distance is below `match_tol`.
  static PreserverOracle from_table(Eigen::Index dim, std::vector<std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd>> table,
                                    double match_tol = 1e-9);

  /// Throws OracleError when the output is not a state of the same dimension.
  DensityState operator()(const DensityState& in, const Tolerances& tol = {}) const;

  Eigen::Index dim() const { return dim_; }
  const std::string& description() const { return description_; }

 private:
  Eigen::Index dim_;
  Map map_;
  std::string description_;
};

PreserverOracle conjugation_oracle(const SymmetryOp& op);
/// A -> A^T, i.e. the antiunitary conjugation with U = I.
PreserverOracle transpose_oracle(Eigen::Index dim);
/// A -> (1 - weight) A + weight I/d.
PreserverOracle depolarizing_oracle(Eigen::Index dim, double weight = 0.5);
/// A -> diagonal part of A.
PreserverOracle dephasing_oracle(Eigen::Index dim);

/// Parses `identity`, `transpose`, `dephase`, `depolarize[:p=<w>]`,
/// `unitary:seed=<s>` or `antiunitary:seed=<s>`.
PreserverOracle parse_oracle(std::string_view text, Eigen::Index dim);

/// Entry (i, j) = tr(P_i Q_j).
struct TransitionTable {
  Eigen::MatrixXd values;

  /// Max deviation of row and column sums from 1 (meaningful for complete orthonormal families).
  double completeness_defect() const;
};

TransitionTable transition_table(std::span<const RankOneProjection> ps, std::span<const RankOneProjection> qs);

/// Inverts h = (1 - p)(f'(1) - f'(0)) for generators with finite f'(0+).
double transition_from_bregman(const NormalizedGenerator& f, double h, double tol = 1e-9);

/// The unique p in [0, 1] with jensen_rank_one(f, p) == j, by bisection.
double transition_from_jensen(const NormalizedGenerator& f, double j, const PreserverOptions& opts = {},
                              double tol = 1e-9);

/// tr RP from h = H_f(R, l P + (1 - l) Q) for orthogonal pure P, Q and pure R
/// in their span: the rank-two closed form solved for tr RP using tr RP + tr RQ = 1.
double transition_from_rank_two(const NormalizedGenerator& f, double lambda, double h);

/// The unique l in (0, 1/2) with f'(1 - l) - f'(l) == delta, by bisection.
double recover_rank_two_spectrum(const NormalizedGenerator& f, double delta, const PreserverOptions& opts = {});

/// Lower bound on M(X) = max_D H_f(X, D) over pure candidates: eigenvectors of
/// X, `random_candidates` seeded random pure states, then `refinement_steps`
/// of randomized local ascent around the best candidate. Needs finite f'(0+).
double max_divergence_functional(const NormalizedGenerator& f, const DensityState& x, const SearchBudget& budget = {},
                                 const Tolerances& tol = {});

struct PurityVerdict {
  bool pure = false;
  double value = 0.0;      // M(X) found by the search
  double reference = 0.0;  // M of a pure state
  double margin = 0.0;     // reference - value
};

/// X is pure iff |M(X) - reference_pure_value| < opts.pure_margin.
PurityVerdict is_pure_by_max(const NormalizedGenerator& f, const DensityState& x, double reference_pure_value,
                             const SearchBudget& budget = {}, const PreserverOptions& opts = {},
                             const Tolerances& tol = {});

struct Probe {
  std::string label;
  RankOneProjection projection;
};

/// e_1..e_d, (e_1 + e_i)/sqrt2 for i = 2..d, and (e_1 + i e_2)/sqrt2, in that order.
std::vector<Probe> wigner_probes(Eigen::Index dim);

struct WignerResult {
  SymmetryOp op;
  double max_probe_residual;
};

/// Rebuilds the implementing (anti)unitary from the images of wigner_probes(dim),
/// given in the same order. U is returned with U(0, 0) real and nonnegative.
/// Throws NotAPreserverError on inconsistent transition probabilities and
/// DegenerateInputError for dim < 2 or a phase that cannot be fixed.
WignerResult wigner_reconstruct(std::span<const RankOneProjection> images, Eigen::Index dim,
                                const PreserverOptions& opts = {});

enum class DivergenceKind { Bregman, Jensen };

std::string to_string(DivergenceKind kind);
DivergenceKind parse_divergence_kind(std::string_view text);

/// Divergence value of the requested kind (Jensen values are always finite).
ExtendedReal divergence(DivergenceKind kind, const NormalizedGenerator& f, const DensityState& a,
                        const DensityState& b, const Tolerances& tol = {});

struct VerifyOptions {
  int sample_size = 16;
  std::uint64_t seed = 1;
  // Threshold for the divergence, transition and state residual checks.
  double tol = 1e-8;
  // Rank-two weight used by the transition check of f'(0+) = -inf Bregman generators.
  double lambda = 0.25;
  PreserverOptions preserver;
};

struct VerificationReport {
  std::size_t pairs_checked = 0;
  double max_divergence_deviation = 0.0;
  std::string worst_pair;  // "i,j: D(A,B) vs D(phi A, phi B)"
  // Transition probabilities recovered from divergences of probe images.
  std::string transition_route;
  double max_transition_deviation = 0.0;
  std::optional<SymmetryOp> reconstruction;
  std::string reconstruction_error;
  double max_probe_residual = 0.0;
  double max_state_residual = 0.0;
  double tol = 1e-8;

  bool divergence_preserved() const { return max_divergence_deviation < tol; }
  bool reconstructed() const { return reconstruction.has_value(); }
  bool implemented() const { return reconstructed() && max_state_residual < tol; }
  bool passed() const { return divergence_preserved() && implemented(); }
};

/// Samples seeded states, measures |D(phi A, phi B) - D(A, B)| over all pairs,
/// recovers probe transition probabilities from divergence values, rebuilds the
/// symmetry from probe images and measures |phi(A) - U A U*| on the samples.
VerificationReport verify_preserver(const NormalizedGenerator& f, const PreserverOracle& oracle, DivergenceKind kind,
                                    const VerifyOptions& opts = {}, const Tolerances& tol = {});

}  // namespace qdiv
