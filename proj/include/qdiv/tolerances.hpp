#pragma once

#include <string>

namespace qdiv {

/// Numerical thresholds shared by every module.
///
/// `supp` is the single knob that decides whether an eigenvalue counts as
/// zero; it drives the finite/infinite branch of the Bregman divergence.
template <typename Real>
struct BasicTolerances {
  Real herm = Real(1e-9);     // max |M - M*| entry accepted before symmetrizing
  Real psd = Real(1e-9);      // most negative eigenvalue accepted in a state
  Real trace = Real(1e-9);    // |tr rho - 1|
  Real num = Real(1e-9);      // generic comparisons, clamping, projection checks
  Real cluster = Real(1e-8);  // eigenvalue grouping gap
  Real supp = Real(1e-10);    // eigenvalues below this are exactly zero
};

using Tolerances = BasicTolerances<double>;

/// Applies QDIV_TOL_HERM, QDIV_TOL_PSD, QDIV_TOL_TRACE, QDIV_TOL_NUM,
/// QDIV_TOL_CLUSTER and QDIV_TOL_SUPP on top of `base`.
/// Throws ParameterError for unparsable or non-positive values.
Tolerances tolerances_from_environment(Tolerances base = {});

/// Sets the field named by `key` (herm, psd, trace, num, cluster, supp).
void set_tolerance(Tolerances& tol, const std::string& key, double value);

}  // namespace qdiv
