#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qdiv/errors.hpp"
#include "qdiv/tolerances.hpp"

namespace qdiv {

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

template <typename Derived>
RealOf<Derived> max_abs_entry(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return RealOf<Derived>(0);
  return m.cwiseAbs().maxCoeff();
}

/// Largest entry of |M - M*|.
template <typename Derived>
RealOf<Derived> hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return max_abs_entry(m - m.adjoint());
}

/// Returns (M + M*)/2 after checking that M is square and Hermitian within `herm_tol`.
template <typename Derived>
ComplexMatrix<RealOf<Derived>> make_hermitian(const Eigen::MatrixBase<Derived>& m,
                                              RealOf<Derived> herm_tol) {
  using Real = RealOf<Derived>;
  if (m.rows() != m.cols() || m.rows() < 1)
    throw ValidationError("matrix must be square with dim >= 1, got " + std::to_string(m.rows()) +
                          "x" + std::to_string(m.cols()));
  ComplexMatrix<Real> c = m.template cast<std::complex<Real>>();
  if (!c.allFinite()) throw ValidationError("matrix has non-finite entries");
  const Real defect = hermiticity_defect(c);
  if (defect > herm_tol)
    throw ValidationError("matrix is not Hermitian (max |M - M*| = " + std::to_string(defect) + ")");
  return (c + c.adjoint()) / Real(2);
}

template <typename Derived>
bool is_projection(const Eigen::MatrixBase<Derived>& s, RealOf<Derived> tol) {
  if (s.rows() != s.cols()) return false;
  if (hermiticity_defect(s) > tol) return false;
  return max_abs_entry(s * s - s) <= tol;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, RealOf<Derived> tol) {
  using Real = RealOf<Derived>;
  if (u.rows() != u.cols()) return false;
  const auto id = ComplexMatrix<Real>::Identity(u.rows(), u.cols());
  return max_abs_entry(u * u.adjoint() - id) <= tol;
}

/// Eigenvalue with its eigenspace. `basis` holds orthonormal eigenvectors as columns.
template <typename Real>
struct SpectralCluster {
  Real eigenvalue{};
  ComplexMatrix<Real> basis;
  ComplexMatrix<Real> projection;

  Eigen::Index multiplicity() const { return basis.cols(); }
};

/// tr(P_a P_b) for the spectral projections of two clusters.
template <typename Real>
Real overlap(const SpectralCluster<Real>& a, const SpectralCluster<Real>& b) {
  return (a.basis.adjoint() * b.basis).squaredNorm();
}

template <typename Real>
struct SpectralDecomposition {
  // Strictly decreasing eigenvalues.
  std::vector<SpectralCluster<Real>> clusters;
  // Projection onto the span of eigenvectors with nonzero eigenvalue.
  ComplexMatrix<Real> support;

  Eigen::Index dim() const { return support.rows(); }

  Eigen::Index rank() const {
    Eigen::Index r = 0;
    for (const auto& c : clusters)
      if (c.eigenvalue != Real(0)) r += c.multiplicity();
    return r;
  }

  ComplexMatrix<Real> reconstruct() const {
    ComplexMatrix<Real> m = ComplexMatrix<Real>::Zero(dim(), dim());
    for (const auto& c : clusters) m += c.eigenvalue * c.projection;
    return m;
  }
};

namespace detail {

// Groups the eigenpairs of an already-Hermitian matrix. Eigenvalues with
// |v| < supp (or v < supp when `nonnegative`) become one exact-zero cluster;
// the remaining ones are grouped greedily from the top while both the gap to
// the previous value and the spread within the group stay below `cluster`.
template <typename Real>
SpectralDecomposition<Real> cluster_spectrum(const ComplexMatrix<Real>& h,
                                             const BasicTolerances<Real>& tol, bool nonnegative) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(h);
  if (solver.info() != Eigen::Success) throw ValidationError("eigendecomposition did not converge");
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  const Eigen::Index n = h.rows();
  if (nonnegative && values(0) < -tol.psd)
    throw ValidationError("state has negative eigenvalue " + std::to_string(values(0)));

  auto is_zero = [&](Real v) { return nonnegative ? v < tol.supp : std::abs(v) < tol.supp; };

  SpectralDecomposition<Real> out;
  out.support = ComplexMatrix<Real>::Zero(n, n);

  std::vector<Eigen::Index> zero_members;
  std::vector<Eigen::Index> group;
  auto flush = [&](std::vector<Eigen::Index>& members, bool zero) {
    if (members.empty()) return;
    SpectralCluster<Real> c;
    c.basis.resize(n, static_cast<Eigen::Index>(members.size()));
    Real sum = 0;
    for (std::size_t k = 0; k < members.size(); ++k) {
      c.basis.col(static_cast<Eigen::Index>(k)) = vectors.col(members[k]);
      sum += values(members[k]);
    }
    c.eigenvalue = zero ? Real(0) : sum / static_cast<Real>(members.size());
    c.projection = c.basis * c.basis.adjoint();
    if (!zero) out.support += c.projection;
    out.clusters.push_back(std::move(c));
    members.clear();
  };

  // Eigen returns ascending values; walk from the top.
  bool zero_emitted = false;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const Real v = values(i);
    if (is_zero(v)) {
      flush(group, false);
      zero_members.push_back(i);
      continue;
    }
    if (!zero_members.empty() && !zero_emitted) {
      flush(zero_members, true);
      zero_emitted = true;
    }
    if (!group.empty()) {
      const Real prev = values(group.back());
      const Real first = values(group.front());
      if (prev - v >= tol.cluster || first - v >= tol.cluster) flush(group, false);
    }
    group.push_back(i);
  }
  flush(group, false);
  if (!zero_emitted) flush(zero_members, true);
  return out;
}

}  // namespace detail

/// Spectral decomposition of a Hermitian matrix with clustered eigenvalues.
/// Throws ValidationError when M is not Hermitian within `tol.herm`.
template <typename Derived>
SpectralDecomposition<RealOf<Derived>> decompose(
    const Eigen::MatrixBase<Derived>& m,
    const BasicTolerances<RealOf<Derived>>& tol = BasicTolerances<RealOf<Derived>>{}) {
  return detail::cluster_spectrum(make_hermitian(m, tol.herm), tol, false);
}

/// Closed interval [lower, upper] (or half-open at an end) used to guard
/// standard operator functions.
template <typename Real>
struct ScalarDomain {
  Real lower = -std::numeric_limits<Real>::infinity();
  bool lower_closed = true;
  Real upper = std::numeric_limits<Real>::infinity();
  bool upper_closed = true;

  bool contains(Real x) const {
    const bool lo = lower_closed ? x >= lower : x > lower;
    const bool hi = upper_closed ? x <= upper : x < upper;
    return lo && hi;
  }

  static ScalarDomain nonnegative() { return {Real(0), true}; }
  static ScalarDomain positive() { return {Real(0), false}; }
};

/// f(M) = sum_a f(a) P_a.
template <typename Real, typename F>
ComplexMatrix<Real> apply_function(const SpectralDecomposition<Real>& d, F&& f) {
  ComplexMatrix<Real> out = ComplexMatrix<Real>::Zero(d.dim(), d.dim());
  for (const auto& c : d.clusters) out += Real(f(c.eigenvalue)) * c.projection;
  return out;
}

template <typename Real, typename F>
ComplexMatrix<Real> apply_function(const SpectralDecomposition<Real>& d, F&& f,
                                   const ScalarDomain<Real>& domain) {
  for (const auto& c : d.clusters)
    if (!domain.contains(c.eigenvalue))
      throw DomainError("eigenvalue " + std::to_string(c.eigenvalue) +
                        " lies outside the function's domain");
  return apply_function(d, std::forward<F>(f));
}

template <typename Derived, typename F>
ComplexMatrix<RealOf<Derived>> apply_function(
    const Eigen::MatrixBase<Derived>& m, F&& f,
    const ScalarDomain<RealOf<Derived>>& domain = ScalarDomain<RealOf<Derived>>{},
    const BasicTolerances<RealOf<Derived>>& tol = BasicTolerances<RealOf<Derived>>{}) {
  return apply_function(decompose(m, tol), std::forward<F>(f), domain);
}

/// tr f(M) = sum_a mult(a) f(a).
template <typename Real, typename F>
Real trace_function(const SpectralDecomposition<Real>& d, F&& f) {
  Real sum = 0;
  for (const auto& c : d.clusters) sum += static_cast<Real>(c.multiplicity()) * Real(f(c.eigenvalue));
  return sum;
}

/// tr(S M S): the trace of M taken only on the range of the projection S.
template <typename DerivedM, typename DerivedS>
RealOf<DerivedM> trace_on_support(const Eigen::MatrixBase<DerivedM>& m,
                                  const Eigen::MatrixBase<DerivedS>& support,
                                  RealOf<DerivedM> tol = RealOf<DerivedM>(1e-9)) {
  if (m.rows() != support.rows() || m.cols() != support.cols())
    throw DimensionMismatch("trace_on_support: matrix and support differ in shape");
  if (!is_projection(support, tol)) throw ValidationError("support argument is not an orthogonal projection");
  return std::real((support * m * support).trace());
}

/// Pure state |v><v| held by its unit vector.
template <typename Real>
class BasicRankOneProjection {
 public:
  /// Requires | ||v|| - 1 | <= tol; the stored vector is renormalized exactly.
  explicit BasicRankOneProjection(ComplexVector<Real> v, Real tol = Real(1e-9)) : vec_(std::move(v)) {
    if (vec_.size() < 1) throw ValidationError("rank-one projection needs dim >= 1");
    const Real n = vec_.norm();
    if (!std::isfinite(n) || std::abs(n - Real(1)) > tol)
      throw ValidationError("vector is not normalized (norm " + std::to_string(n) + ")");
    vec_ /= n;
  }

  static BasicRankOneProjection from_unnormalized(ComplexVector<Real> v) {
    const Real n = v.norm();
    if (!(n > Real(0)) || !std::isfinite(n)) throw ValidationError("cannot normalize a zero vector");
    return BasicRankOneProjection(v / n, Real(1));
  }

  /// Accepts a matrix that is a rank-one orthogonal projection within `tol`.
  static BasicRankOneProjection from_matrix(const ComplexMatrix<Real>& m, Real tol = Real(1e-9)) {
    const ComplexMatrix<Real> h = make_hermitian(m, tol);
    if (max_abs_entry(h * h - h) > tol || std::abs(std::real(h.trace()) - Real(1)) > tol)
      throw ValidationError("matrix is not a rank-one projection");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(h);
    return from_unnormalized(solver.eigenvectors().col(h.rows() - 1));
  }

  static BasicRankOneProjection basis(Eigen::Index dim, Eigen::Index i) {
    ComplexVector<Real> v = ComplexVector<Real>::Zero(dim);
    v(i) = Real(1);
    return BasicRankOneProjection(std::move(v));
  }

  const ComplexVector<Real>& vector() const { return vec_; }
  ComplexMatrix<Real> matrix() const { return vec_ * vec_.adjoint(); }
  Eigen::Index dim() const { return vec_.size(); }

 private:
  ComplexVector<Real> vec_;
};

/// |<p, q>|^2, clamped to [0, 1].
template <typename Real>
Real transition_probability(const BasicRankOneProjection<Real>& p, const BasicRankOneProjection<Real>& q) {
  if (p.dim() != q.dim())
    throw DimensionMismatch("transition_probability: dimensions " + std::to_string(p.dim()) + " and " +
                            std::to_string(q.dim()));
  return std::clamp(std::norm(p.vector().dot(q.vector())), Real(0), Real(1));
}

/// Positive semidefinite unit-trace matrix with its spectral decomposition
/// computed once at construction.
template <typename Real>
class BasicDensityState {
 public:
  explicit BasicDensityState(const ComplexMatrix<Real>& m,
                             const BasicTolerances<Real>& tol = BasicTolerances<Real>{})
      : matrix_(make_hermitian(m, tol.herm)) {
    const Real tr = std::real(matrix_.trace());
    if (std::abs(tr - Real(1)) > tol.trace)
      throw ValidationError("state trace is " + std::to_string(tr) + ", expected 1");
    spectral_ = detail::cluster_spectrum(matrix_, tol, true);
  }

  explicit BasicDensityState(const BasicRankOneProjection<Real>& p,
                             const BasicTolerances<Real>& tol = BasicTolerances<Real>{})
      : BasicDensityState(p.matrix(), tol) {}

  const ComplexMatrix<Real>& matrix() const { return matrix_; }
  const SpectralDecomposition<Real>& spectral() const { return spectral_; }
  const ComplexMatrix<Real>& support() const { return spectral_.support; }
  Eigen::Index dim() const { return matrix_.rows(); }
  Eigen::Index rank() const { return spectral_.rank(); }
  bool is_pure() const { return rank() == 1; }

 private:
  ComplexMatrix<Real> matrix_;
  SpectralDecomposition<Real> spectral_;
};

using RankOneProjection = BasicRankOneProjection<double>;
using DensityState = BasicDensityState<double>;

}  // namespace qdiv
