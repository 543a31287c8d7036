#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include "qdiv/hermitian.hpp"

namespace qdiv {

/// Seeded source of randomness, reproducible across platforms and languages:
///  - engine: 64-bit Mersenne Twister (std::mt19937_64, seeded with the seed);
///  - uniform in [0, 1): (next >> 11) * 2^-53;
///  - normal: Box-Muller, sqrt(-2 ln(1 - u1)) cos(2 pi u2) from two consecutive uniforms;
///  - complex normal: (normal + i normal)/sqrt(2), real part drawn first.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();
  std::complex<double> complex_normal();

  /// An independent child stream for sub-task `index`.
  Rng fork(std::uint64_t index);

 private:
  std::mt19937_64 engine_;
};

/// d x d complex Gaussian matrix, filled column by column.
Eigen::MatrixXcd gaussian_matrix(Eigen::Index dim, Rng& rng);

/// Orthonormalizes the columns of `m` by modified Gram-Schmidt with one
/// reorthogonalization pass. Gaussian input gives a Haar-distributed unitary.
Eigen::MatrixXcd orthonormalize(Eigen::MatrixXcd m);

Eigen::MatrixXcd random_unitary(Eigen::Index dim, Rng& rng);

/// Point of the probability simplex with `rank` nonzero leading entries
/// (normalized exponential variates), the remaining entries zero.
Eigen::VectorXd random_simplex_point(Eigen::Index dim, Eigen::Index rank, Rng& rng);

/// V diag(w) V* with V = random_unitary, w = random_simplex_point (drawn in that order).
DensityState random_state(Eigen::Index dim, Eigen::Index rank, Rng& rng, const Tolerances& tol = {});

/// First column of random_unitary.
RankOneProjection random_pure(Eigen::Index dim, Rng& rng);

/// Mixed state whose largest eigenvalue is at most `max_eigenvalue`.
DensityState random_mixed_state(Eigen::Index dim, double max_eigenvalue, Rng& rng, const Tolerances& tol = {});

}  // namespace qdiv
