#include "qdiv/random.hpp"

#include <cmath>
#include <numbers>

#include "qdiv/errors.hpp"

namespace qdiv {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

Rng Rng::fork(std::uint64_t index) {
  const std::uint64_t base = engine_();
  return Rng(base ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
}

Eigen::MatrixXcd gaussian_matrix(Eigen::Index dim, Rng& rng) {
  Eigen::MatrixXcd g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  return g;
}

Eigen::MatrixXcd orthonormalize(Eigen::MatrixXcd m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index k = 0; k < j; ++k) m.col(j) -= m.col(k).dot(m.col(j)) * m.col(k);
    const double n = m.col(j).norm();
    if (!(n > 0.0)) throw DegenerateInputError("columns are linearly dependent");
    m.col(j) /= n;
  }
  return m;
}

Eigen::MatrixXcd random_unitary(Eigen::Index dim, Rng& rng) {
  if (dim < 1) throw ParameterError("dimension must be >= 1");
  return orthonormalize(gaussian_matrix(dim, rng));
}

Eigen::VectorXd random_simplex_point(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
  if (rank < 1 || rank > dim) throw ParameterError("rank must satisfy 1 <= rank <= dim");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index i = 0; i < rank; ++i) w(i) = -std::log(1.0 - rng.uniform());
  w /= w.sum();
  return w;
}

DensityState random_state(Eigen::Index dim, Eigen::Index rank, Rng& rng, const Tolerances& tol) {
  const Eigen::MatrixXcd v = random_unitary(dim, rng);
  const Eigen::VectorXd w = random_simplex_point(dim, rank, rng);
  const Eigen::MatrixXcd rho = v * w.cast<std::complex<double>>().asDiagonal() * v.adjoint();
  return DensityState(rho, tol);
}

RankOneProjection random_pure(Eigen::Index dim, Rng& rng) {
  const Eigen::MatrixXcd v = random_unitary(dim, rng);
  return RankOneProjection::from_unnormalized(v.col(0));
}

DensityState random_mixed_state(Eigen::Index dim, double max_eigenvalue, Rng& rng, const Tolerances& tol) {
  if (dim < 2) throw ParameterError("mixed states need dim >= 2");
  if (!(max_eigenvalue >= 1.0 / static_cast<double>(dim) && max_eigenvalue < 1.0))
    throw ParameterError("max eigenvalue must lie in [1/dim, 1)");
  const Eigen::MatrixXcd v = random_unitary(dim, rng);
  Eigen::VectorXd w = random_simplex_point(dim, dim, rng);
  // Mix toward the uniform spectrum until the top eigenvalue fits.
  const double top = w.maxCoeff();
  if (top > max_eigenvalue) {
    const double uniform = 1.0 / static_cast<double>(dim);
    const double t = (top - max_eigenvalue) / (top - uniform);
    w = (1.0 - t) * w + t * Eigen::VectorXd::Constant(dim, uniform);
  }
  const Eigen::MatrixXcd rho = v * w.cast<std::complex<double>>().asDiagonal() * v.adjoint();
  return DensityState(rho, tol);
}

}  // namespace qdiv
