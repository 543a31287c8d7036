#include "qdiv/preserver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "qdiv/bregman.hpp"
#include "qdiv/errors.hpp"
#include "qdiv/jensen.hpp"
#include "qdiv/random.hpp"

namespace qdiv {

using Eigen::Index;
using Eigen::MatrixXcd;

SymmetryOp::SymmetryOp(MatrixXcd u, bool antiunitary, double tol) : u_(std::move(u)), antiunitary_(antiunitary) {
  if (u_.rows() < 1 || !is_unitary(u_, tol)) throw ValidationError("symmetry matrix is not unitary");
}

MatrixXcd SymmetryOp::apply(const MatrixXcd& a) const {
  if (a.rows() != dim() || a.cols() != dim()) throw DimensionMismatch("symmetry and matrix differ in dimension");
  return antiunitary_ ? MatrixXcd(u_ * a.conjugate() * u_.adjoint()) : MatrixXcd(u_ * a * u_.adjoint());
}

DensityState SymmetryOp::apply(const DensityState& a, const Tolerances& tol) const {
  return DensityState(apply(a.matrix()), tol);
}

RankOneProjection SymmetryOp::apply(const RankOneProjection& p) const {
  if (p.dim() != dim()) throw DimensionMismatch("symmetry and vector differ in dimension");
  const Eigen::VectorXcd v = antiunitary_ ? Eigen::VectorXcd(u_ * p.vector().conjugate()) : Eigen::VectorXcd(u_ * p.vector());
  return RankOneProjection::from_unnormalized(v);
}

PreserverOracle::PreserverOracle(Index dim, Map map, std::string description)
    : dim_(dim), map_(std::move(map)), description_(std::move(description)) {
  if (dim_ < 1) throw ParameterError("oracle dimension must be >= 1");
  if (!map_) throw ParameterError("oracle needs a map");
}

PreserverOracle PreserverOracle::from_table(Index dim, std::vector<std::pair<MatrixXcd, MatrixXcd>> table,
                                            double match_tol) {
  auto shared = std::make_shared<const std::vector<std::pair<MatrixXcd, MatrixXcd>>>(std::move(table));
  return PreserverOracle(
      dim,
      [shared, match_tol](const MatrixXcd& in) -> MatrixXcd {
        for (const auto& [key, value] : *shared)
          if (key.rows() == in.rows() && key.cols() == in.cols() && max_abs_entry(key - in) < match_tol) return value;
        throw OracleError("oracle table has no entry for the queried state");
      },
      "table");
}

DensityState PreserverOracle::operator()(const DensityState& in, const Tolerances& tol) const {
  if (in.dim() != dim_) throw DimensionMismatch("oracle queried with a state of the wrong dimension");
  MatrixXcd out = map_(in.matrix());
  if (out.rows() != dim_ || out.cols() != dim_) throw OracleError("oracle returned a matrix of the wrong shape");
  try {
    return DensityState(out, tol);
  } catch (const ValidationError& e) {
    throw OracleError(std::string("oracle returned an invalid state: ") + e.what());
  }
}

PreserverOracle conjugation_oracle(const SymmetryOp& op) {
  return PreserverOracle(
      op.dim(), [op](const MatrixXcd& a) { return op.apply(a); },
      op.antiunitary() ? "antiunitary conjugation" : "unitary conjugation");
}

PreserverOracle transpose_oracle(Index dim) {
  return PreserverOracle(dim, [](const MatrixXcd& a) { return MatrixXcd(a.transpose()); }, "transpose");
}

PreserverOracle depolarizing_oracle(Index dim, double weight) {
  if (!(weight >= 0.0 && weight <= 1.0)) throw ParameterError("depolarizing weight must lie in [0, 1]");
  return PreserverOracle(
      dim,
      [dim, weight](const MatrixXcd& a) {
        return MatrixXcd((1.0 - weight) * a + weight * MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
      },
      "depolarize:p=" + std::to_string(weight));
}

PreserverOracle dephasing_oracle(Index dim) {
  return PreserverOracle(dim, [](const MatrixXcd& a) { return MatrixXcd(a.diagonal().asDiagonal()); }, "dephase");
}

namespace {

template <typename T>
T parse_value(std::string_view text, std::string_view what) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ParameterError("bad " + std::string(what) + " '" + std::string(text) + "'");
  return v;
}

}  // namespace

PreserverOracle parse_oracle(std::string_view text, Index dim) {
  if (text == "identity") return conjugation_oracle(SymmetryOp::identity(dim));
  if (text == "transpose") return transpose_oracle(dim);
  if (text == "dephase") return dephasing_oracle(dim);
  if (text == "depolarize") return depolarizing_oracle(dim);
  if (text.starts_with("depolarize:p=")) return depolarizing_oracle(dim, parse_value<double>(text.substr(13), "weight"));
  for (const bool anti : {false, true}) {
    const std::string_view prefix = anti ? "antiunitary:seed=" : "unitary:seed=";
    if (text.starts_with(prefix)) {
      Rng rng(parse_value<std::uint64_t>(text.substr(prefix.size()), "seed"));
      return conjugation_oracle(SymmetryOp(random_unitary(dim, rng), anti));
    }
  }
  throw ParameterError("unknown oracle '" + std::string(text) + "'");
}

double TransitionTable::completeness_defect() const {
  if (values.size() == 0) return 0.0;
  const double rows = (values.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double cols = (values.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(rows, cols);
}

TransitionTable transition_table(std::span<const RankOneProjection> ps, std::span<const RankOneProjection> qs) {
  TransitionTable t;
  t.values.resize(static_cast<Index>(ps.size()), static_cast<Index>(qs.size()));
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = 0; j < qs.size(); ++j)
      t.values(static_cast<Index>(i), static_cast<Index>(j)) = transition_probability(ps[i], qs[j]);
  return t;
}

double transition_from_bregman(const NormalizedGenerator& f, double h, double tol) {
  if (!f.has_finite_zero_derivative())
    throw PreconditionError("transition_from_bregman needs a generator with finite f'(0+)");
  const double width = f.derivative(1.0) - f.derivative(0.0);
  if (!(h >= -tol) || h > width + tol)
    throw RangeError("Bregman value " + std::to_string(h) + " outside [0, " + std::to_string(width) + "]");
  return std::clamp(1.0 - h / width, 0.0, 1.0);
}

double transition_from_jensen(const NormalizedGenerator& f, double j, const PreserverOptions& opts, double tol) {
  const double top = jensen_max_constant(f);
  if (!(j >= -tol) || j > top + tol)
    throw RangeError("Jensen value " + std::to_string(j) + " outside [0, " + std::to_string(top) + "]");
  if (j <= 0.0) return 1.0;
  if (j >= top) return 0.0;
  // jensen_rank_one decreases in p.
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > opts.bisect_tol) {
    const double mid = 0.5 * (lo + hi);
    if (jensen_rank_one(f, mid) > j) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double transition_from_rank_two(const NormalizedGenerator& f, double lambda, double h) {
  if (!(lambda > 0.0 && lambda < 0.5)) throw PreconditionError("rank-two weight must lie in (0, 1/2)");
  const double mu = 1.0 - lambda;
  const double dl = f.derivative(lambda);
  const double dm = f.derivative(mu);
  return (rank_two_constant(f, lambda) - dm - h) / (dl - dm);
}

double recover_rank_two_spectrum(const NormalizedGenerator& f, double delta, const PreserverOptions& opts) {
  if (!(delta > 0.0)) throw RangeError("spectral gap must be positive");
  if (f.has_finite_zero_derivative()) {
    const double limit = f.derivative(1.0) - f.derivative(0.0);
    if (delta >= limit)
      throw RangeError("spectral gap " + std::to_string(delta) + " not below " + std::to_string(limit));
  }
  auto gap = [&f](double l) { return f.derivative(1.0 - l) - f.derivative(l); };
  double lo = opts.bisect_tol;
  double hi = 0.5 - opts.bisect_tol;
  if (delta > gap(lo)) throw RangeError("spectral gap " + std::to_string(delta) + " beyond the bracket");
  if (delta <= gap(hi)) return hi;
  // gap decreases in l.
  while (hi - lo > opts.bisect_tol) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) > delta) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double max_divergence_functional(const NormalizedGenerator& f, const DensityState& x, const SearchBudget& budget,
                                 const Tolerances& tol) {
  if (!f.has_finite_zero_derivative())
    throw PreconditionError("max_divergence_functional needs a generator with finite f'(0+)");
  const Index dim = x.dim();
  auto score = [&](const Eigen::VectorXcd& v) {
    return bregman(f, x, DensityState(RankOneProjection::from_unnormalized(v), tol), tol).value();
  };

  double best = -1.0;
  Eigen::VectorXcd best_vec;
  auto consider = [&](const Eigen::VectorXcd& v) {
    const double s = score(v);
    if (s > best) {
      best = s;
      best_vec = v;
    }
  };

  for (const auto& c : x.spectral().clusters)
    for (Index k = 0; k < c.basis.cols(); ++k) consider(c.basis.col(k));

  Rng rng(budget.seed);
  for (int k = 0; k < budget.random_candidates; ++k) {
    Eigen::VectorXcd v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = rng.complex_normal();
    consider(v / v.norm());
  }

  double step = 0.25;
  for (int k = 0; k < budget.refinement_steps; ++k, step *= 0.9) {
    Eigen::VectorXcd v = best_vec;
    for (Index i = 0; i < dim; ++i) v(i) += step * rng.complex_normal();
    if (v.norm() > 0.0) consider(v / v.norm());
  }
  return best;
}

PurityVerdict is_pure_by_max(const NormalizedGenerator& f, const DensityState& x, double reference_pure_value,
                             const SearchBudget& budget, const PreserverOptions& opts, const Tolerances& tol) {
  PurityVerdict v;
  v.value = max_divergence_functional(f, x, budget, tol);
  v.reference = reference_pure_value;
  v.margin = reference_pure_value - v.value;
  v.pure = std::abs(v.margin) < opts.pure_margin;
  return v;
}

std::vector<Probe> wigner_probes(Index dim) {
  if (dim < 1) throw ParameterError("dimension must be >= 1");
  std::vector<Probe> probes;
  for (Index i = 0; i < dim; ++i) probes.push_back({"e" + std::to_string(i + 1), RankOneProjection::basis(dim, i)});
  for (Index i = 1; i < dim; ++i) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(0) = 1.0;
    v(i) = 1.0;
    probes.push_back({"e1+e" + std::to_string(i + 1), RankOneProjection::from_unnormalized(v)});
  }
  if (dim >= 2) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(0) = 1.0;
    v(1) = std::complex<double>(0.0, 1.0);
    probes.push_back({"e1+ie2", RankOneProjection::from_unnormalized(v)});
  }
  return probes;
}

WignerResult wigner_reconstruct(std::span<const RankOneProjection> images, Index dim, const PreserverOptions& opts) {
  if (dim < 2) throw DegenerateInputError("reconstruction needs dim >= 2");
  const auto probes = wigner_probes(dim);
  if (images.size() != probes.size())
    throw ParameterError("expected " + std::to_string(probes.size()) + " probe images, got " +
                         std::to_string(images.size()));
  for (const auto& img : images)
    if (img.dim() != dim) throw DimensionMismatch("probe image has the wrong dimension");

  for (std::size_t i = 0; i < probes.size(); ++i)
    for (std::size_t j = i + 1; j < probes.size(); ++j) {
      const double before = transition_probability(probes[i].projection, probes[j].projection);
      const double after = transition_probability(images[i], images[j]);
      if (std::abs(before - after) > opts.wigner_tol) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "transition probability between probes '" << probes[i].label << "' and '" << probes[j].label
            << "' changes from " << before << " to " << after;
        throw NotAPreserverError(msg.str());
      }
    }

  const auto n = static_cast<std::size_t>(dim);
  MatrixXcd u(dim, dim);
  u.col(0) = images[0].vector();
  for (std::size_t i = 1; i < n; ++i) {
    const Eigen::VectorXcd& psi = images[i].vector();
    const Eigen::VectorXcd& sup = images[n + i - 1].vector();
    const std::complex<double> a = u.col(0).dot(sup);
    const std::complex<double> b = psi.dot(sup);
    if (std::norm(a) < 0.25 || std::abs(b) == 0.0)
      throw DegenerateInputError("cannot fix the phase of basis image " + probes[i].label);
    const std::complex<double> c = b / a;
    u.col(static_cast<Index>(i)) = (c / std::abs(c)) * psi;
  }

  const Eigen::VectorXcd& chi = images[2 * n - 1].vector();
  const std::complex<double> iu(0.0, 1.0);
  const Eigen::VectorXcd plus = (u.col(0) + iu * u.col(1)) / std::numbers::sqrt2;
  const Eigen::VectorXcd minus = (u.col(0) - iu * u.col(1)) / std::numbers::sqrt2;
  const bool anti = std::norm(minus.dot(chi)) > std::norm(plus.dot(chi));

  const std::complex<double> u00 = u(0, 0);
  if (std::abs(u00) > 0.0) {
    u *= std::conj(u00) / std::abs(u00);
    u(0, 0) = std::abs(u00);
  }

  SymmetryOp op(u, anti);
  double residual = 0.0;
  for (std::size_t k = 0; k < probes.size(); ++k)
    residual = std::max(residual, max_abs_entry(op.apply(probes[k].projection.matrix()) - images[k].matrix()));
  if (residual > opts.reconstruct_tol)
    throw NotAPreserverError("reconstructed symmetry misses the probe images by " + std::to_string(residual));
  return {op, residual};
}

std::string to_string(DivergenceKind kind) { return kind == DivergenceKind::Bregman ? "bregman" : "jensen"; }

DivergenceKind parse_divergence_kind(std::string_view text) {
  if (text == "bregman") return DivergenceKind::Bregman;
  if (text == "jensen") return DivergenceKind::Jensen;
  throw ParameterError("unknown divergence kind '" + std::string(text) + "'");
}

ExtendedReal divergence(DivergenceKind kind, const NormalizedGenerator& f, const DensityState& a,
                        const DensityState& b, const Tolerances& tol) {
  if (kind == DivergenceKind::Bregman) return bregman(f, a, b, tol);
  return ExtendedReal::finite(jensen(f, a, b, tol), tol.num);
}

namespace {

// Recovers probe transition probabilities from divergence values between
// probe images and returns the largest deviation from the true ones.
double divergence_transition_check(const NormalizedGenerator& f, DivergenceKind kind, const std::vector<Probe>& probes,
                                   const std::vector<DensityState>& images, const VerifyOptions& opts,
                                   const Tolerances& tol, std::string& route) {
  double worst = 0.0;
  auto record = [&](double recovered, double truth) { worst = std::max(worst, std::abs(recovered - truth)); };

  if (kind == DivergenceKind::Jensen || f.has_finite_zero_derivative()) {
    route = kind == DivergenceKind::Jensen ? "rank-one-jensen" : "rank-one-bregman";
    for (std::size_t i = 0; i < probes.size(); ++i)
      for (std::size_t j = i + 1; j < probes.size(); ++j) {
        const double truth = transition_probability(probes[i].projection, probes[j].projection);
        try {
          const ExtendedReal d = divergence(kind, f, images[i], images[j], tol);
          if (d.is_infinite()) return std::numeric_limits<double>::infinity();
          record(kind == DivergenceKind::Jensen ? transition_from_jensen(f, d.value(), opts.preserver, tol.num)
                                                : transition_from_bregman(f, d.value(), tol.num),
                 truth);
        } catch (const RangeError&) {
          return std::numeric_limits<double>::infinity();
        }
      }
    return worst;
  }

  // f'(0+) = -inf: probe triples (R, P, Q) with P = e1, Q = e_i and R their
  // superposition, read through H_f(R', l P' + (1 - l) Q').
  route = "rank-two-bregman";
  const auto n = static_cast<std::size_t>(images.front().dim());
  const double l = opts.lambda;
  auto check_triple = [&](std::size_t r, std::size_t p, std::size_t q) {
    const DensityState s(l * images[p].matrix() + (1.0 - l) * images[q].matrix(), tol);
    const ExtendedReal h = bregman(f, images[r], s, tol);
    if (h.is_infinite()) {
      worst = std::numeric_limits<double>::infinity();
      return;
    }
    record(transition_from_rank_two(f, l, h.value()),
           transition_probability(probes[r].projection, probes[p].projection));
  };
  for (std::size_t i = 1; i < n; ++i) check_triple(n + i - 1, 0, i);
  check_triple(2 * n - 1, 0, 1);
  return worst;
}

}  // namespace

VerificationReport verify_preserver(const NormalizedGenerator& f, const PreserverOracle& oracle, DivergenceKind kind,
                                    const VerifyOptions& opts, const Tolerances& tol) {
  if (opts.sample_size < 2) throw ParameterError("verification needs at least two sampled states");
  const Index dim = oracle.dim();
  VerificationReport report;
  report.tol = opts.tol;

  Rng rng(opts.seed);
  std::vector<DensityState> samples;
  std::vector<DensityState> images;
  for (int k = 0; k < opts.sample_size; ++k) {
    const Index rank = 1 + static_cast<Index>(k) % dim;
    samples.push_back(random_state(dim, rank, rng, tol));
    images.push_back(oracle(samples.back(), tol));
  }

  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = 0; j < samples.size(); ++j) {
      if (i == j) continue;
      const ExtendedReal before = divergence(kind, f, samples[i], samples[j], tol);
      const ExtendedReal after = divergence(kind, f, images[i], images[j], tol);
      const double dev = deviation(before, after);
      ++report.pairs_checked;
      if (dev > report.max_divergence_deviation || report.worst_pair.empty()) {
        report.max_divergence_deviation = std::max(report.max_divergence_deviation, dev);
        report.worst_pair = std::to_string(i) + "," + std::to_string(j) + ": " + before.to_string() + " vs " +
                            after.to_string();
      }
    }

  const auto probes = wigner_probes(dim);
  std::vector<DensityState> probe_images;
  for (const auto& p : probes) probe_images.push_back(oracle(DensityState(p.projection, tol), tol));

  if (dim >= 2) {
    report.max_transition_deviation =
        divergence_transition_check(f, kind, probes, probe_images, opts, tol, report.transition_route);
    try {
      std::vector<RankOneProjection> pure_images;
      for (const auto& img : probe_images) pure_images.push_back(RankOneProjection::from_matrix(img.matrix(), 1e-6));
      WignerResult w = wigner_reconstruct(pure_images, dim, opts.preserver);
      report.max_probe_residual = w.max_probe_residual;
      report.reconstruction = w.op;
    } catch (const ValidationError& e) {
      report.reconstruction_error = std::string("probe image is not pure: ") + e.what();
    } catch (const Error& e) {
      report.reconstruction_error = e.what();
    }
  } else {
    report.reconstruction_error = "dimension 1 has no nontrivial symmetry";
  }

  if (report.reconstruction) {
    for (std::size_t k = 0; k < samples.size(); ++k)
      report.max_state_residual = std::max(
          report.max_state_residual, max_abs_entry(images[k].matrix() - report.reconstruction->apply(samples[k].matrix())));
  } else {
    report.max_state_residual = std::numeric_limits<double>::infinity();
  }
  return report;
}

}  // namespace qdiv
