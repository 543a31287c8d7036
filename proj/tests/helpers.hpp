#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <complex>
#include <initializer_list>

#include "qdiv/hermitian.hpp"

namespace qdiv::test {

inline Eigen::MatrixXcd diag(std::initializer_list<double> values) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v.asDiagonal();
}

inline DensityState diag_state(std::initializer_list<double> values) { return DensityState(diag(values)); }

// tr(M^2) for Hermitian M.
inline double hs_square(const Eigen::MatrixXcd& m) { return (m.adjoint() * m).trace().real(); }

// tr A(log A - log B) through the Eigen matrix logarithm; full-rank inputs only.
inline double umegaki(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const Eigen::MatrixXcd la = a.log();
  const Eigen::MatrixXcd lb = b.log();
  return (a * (la - lb)).trace().real();
}

// Projection onto the eigenvectors of `b` with eigenvalue above `cut`.
inline Eigen::MatrixXcd support_projection(const Eigen::MatrixXcd& b, double cut) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b);
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(b.rows(), b.cols());
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    if (es.eigenvalues()(i) > cut) s += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return s;
}

}  // namespace qdiv::test
