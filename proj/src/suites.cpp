#include "qdiv/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

#include "qdiv/bregman.hpp"
#include "qdiv/errors.hpp"
#include "qdiv/generators.hpp"
#include "qdiv/hermitian.hpp"
#include "qdiv/jensen.hpp"
#include "qdiv/preserver.hpp"
#include "qdiv/random.hpp"

namespace qdiv {

using Eigen::Index;
using Eigen::MatrixXcd;

bool RunReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(v > 0 ? "inf" : "-inf"); }

}  // namespace

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["seed"] = seed;
  j["tolerances"] = {{"herm", tol.herm},   {"psd", tol.psd},         {"trace", tol.trace},
                     {"num", tol.num},     {"cluster", tol.cluster}, {"supp", tol.supp}};
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json e{{"name", c.name}, {"passed", c.passed}, {"measured", number(c.measured)}, {"threshold", c.threshold}};
    if (!c.detail.empty()) e["detail"] = c.detail;
    list.push_back(std::move(e));
  }
  j["checks"] = std::move(list);
  j["passed"] = passed();
  if (wall_seconds) j["wall_seconds"] = *wall_seconds;
  return j;
}

namespace {

struct Context {
  const SuiteOptions& opts;
  Rng rng;
  std::vector<CheckResult>& checks;

  void below(std::string name, double measured, double threshold, std::string detail = {}) {
    checks.push_back({std::move(name), measured < threshold, measured, threshold, std::move(detail)});
  }
};

std::string tag(const std::string& suite, const std::string& what, const std::string& gen, int d) {
  std::string s = suite + "/" + what;
  if (!gen.empty()) s += "/" + gen;
  return s + "/d=" + std::to_string(d);
}

DensityState random_any_rank(Index d, Rng& rng, const Tolerances& tol) {
  const auto rank = 1 + static_cast<Index>(rng.uniform() * static_cast<double>(d));
  return random_state(d, std::min(rank, d), rng, tol);
}

double hs_square(const MatrixXcd& m) { return std::real((m * m).trace()); }

void suite_hermitian(Context& ctx) {
  const auto& tol = ctx.opts.tol;
  for (int d : ctx.opts.dims) {
    double recon = 0.0;
    double proj = 0.0;
    double cov = 0.0;
    double sym = 0.0;
    for (int k = 0; k < ctx.opts.samples; ++k) {
      const MatrixXcd g = gaussian_matrix(d, ctx.rng);
      const MatrixXcd h = (g + g.adjoint()) / 2.0;
      const auto dec = decompose(h, tol);
      recon = std::max(recon, max_abs_entry(dec.reconstruct() - h));
      for (std::size_t a = 0; a < dec.clusters.size(); ++a) {
        const auto& pa = dec.clusters[a].projection;
        proj = std::max(proj, max_abs_entry(pa * pa - pa));
        for (std::size_t b = a + 1; b < dec.clusters.size(); ++b)
          proj = std::max(proj, max_abs_entry(pa * dec.clusters[b].projection));
      }
      const MatrixXcd u = random_unitary(d, ctx.rng);
      auto f = [](double x) { return std::exp(x) - x * x; };
      const MatrixXcd lhs = apply_function(MatrixXcd(u * h * u.adjoint()), f, ScalarDomain<double>{}, tol);
      const MatrixXcd rhs = u * apply_function(dec, f) * u.adjoint();
      cov = std::max(cov, max_abs_entry(lhs - rhs));
      const auto p = random_pure(d, ctx.rng);
      const auto q = random_pure(d, ctx.rng);
      const RankOneProjection q_phase(Eigen::VectorXcd(std::polar(1.0, 2.0 * ctx.rng.uniform()) * q.vector()));
      sym = std::max({sym, std::abs(transition_probability(p, q) - transition_probability(q, p)),
                      std::abs(transition_probability(p, q) - transition_probability(p, q_phase))});
    }
    ctx.below(tag("hermitian", "reconstruction", "", d), recon, d * tol.cluster);
    ctx.below(tag("hermitian", "projections", "", d), proj, tol.num);
    ctx.below(tag("hermitian", "unitary-covariance", "", d), cov, tol.num);
    ctx.below(tag("hermitian", "transition-symmetry", "", d), sym, tol.num);
  }
}

void suite_generators(Context& ctx) {
  const auto grid = default_validation_grid();
  for (const auto& name : ctx.opts.generators) {
    const GeneratorFunction g = catalog(name);
    const auto report = validate(g, grid, ctx.opts.tol.num);
    ctx.checks.push_back({"generators/validate/" + name, report.ok(), static_cast<double>(report.violations.size()), 1.0,
                          report.ok() ? "" : to_string(report.violations.front().kind)});

    const NormalizedGenerator n1 = normalize(g);
    const NormalizedGenerator n2 = normalize(n1.as_generator());
    double idem = std::abs(n1.value(0.0)) + std::abs(n1.value(1.0));
    for (double x : grid) idem = std::max(idem, std::abs(n1.value(x) - n2.value(x)));
    ctx.below("generators/normalize-idempotent/" + name, idem, ctx.opts.tol.num);

    // Difference quotient increasing in each argument; half-shift gap increasing on [0, 1].
    int bad_quotient = 0;
    const std::vector<double> pts = {0.01, 0.1, 0.3, 0.5, 0.9, 1.7, 3.0};
    for (double b : pts)
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i] == b || pts[i + 1] == b) continue;
        if (!(difference_quotient(g, pts[i + 1], b) > difference_quotient(g, pts[i], b))) ++bad_quotient;
      }
    ctx.checks.push_back({"generators/difference-quotient-monotone/" + name, bad_quotient == 0,
                          static_cast<double>(bad_quotient), 1.0, ""});
    int bad_gap = 0;
    for (int i = 0; i < 100; ++i)
      if (!(half_shift_gap(g, (i + 1) / 100.0) > half_shift_gap(g, i / 100.0))) ++bad_gap;
    ctx.checks.push_back(
        {"generators/half-shift-gap-monotone/" + name, bad_gap == 0, static_cast<double>(bad_gap), 1.0, ""});
  }
}

// Two orthogonal pure states and a pure state in their span.
struct RankTwoSetup {
  RankOneProjection p, q, r;
};

RankTwoSetup rank_two_setup(Index d, Rng& rng) {
  const MatrixXcd u = random_unitary(d, rng);
  const double theta = rng.uniform() * 3.141592653589793 / 2.0;
  const std::complex<double> phase = std::polar(1.0, 6.283185307179586 * rng.uniform());
  const Eigen::VectorXcd r = std::cos(theta) * u.col(0) + phase * std::sin(theta) * u.col(1);
  return {RankOneProjection::from_unnormalized(u.col(0)), RankOneProjection::from_unnormalized(u.col(1)),
          RankOneProjection::from_unnormalized(r)};
}

void suite_closed_forms(Context& ctx) {
  const auto& tol = ctx.opts.tol;
  const NormalizedGenerator quad = normalize(quadratic());
  for (int d : ctx.opts.dims) {
    double breg = 0.0;
    double jen = 0.0;
    for (int k = 0; k < ctx.opts.samples; ++k) {
      const DensityState a = random_any_rank(d, ctx.rng, tol);
      const DensityState b = random_any_rank(d, ctx.rng, tol);
      const MatrixXcd diff = a.matrix() - b.matrix();
      breg = std::max(breg, std::abs(bregman(quad, a, b, tol).value() - hs_square(diff)));
      jen = std::max(jen, std::abs(jensen(quad, a, b, tol) - hs_square(diff / 2.0)));
    }
    ctx.below(tag("closed-forms", "bregman-quadratic", "", d), breg, 1e-10);
    ctx.below(tag("closed-forms", "jensen-quadratic", "", d), jen, 1e-10);

    for (const auto& name : ctx.opts.generators) {
      const NormalizedGenerator f = normalize(catalog(name));
      double identity = 0.0;
      double rank_one = 0.0;
      double pair = 0.0;
      double rank_two = 0.0;
      for (int k = 0; k < ctx.opts.samples; ++k) {
        const DensityState a = random_any_rank(d, ctx.rng, tol);
        const DensityState b = random_any_rank(d, ctx.rng, tol);
        identity = std::max(identity, std::abs(jensen(f, a, b, tol) - jensen_via_bregman(f, a, b, tol)));

        const auto p = random_pure(d, ctx.rng);
        const auto q = random_pure(d, ctx.rng);
        const DensityState ps(p, tol), qs(q, tol);
        rank_one = std::max(rank_one,
                            std::abs(jensen(f, ps, qs, tol) - jensen_rank_one(f, transition_probability(p, q))));
        if (f.has_finite_zero_derivative())
          pair = std::max(pair, std::abs(bregman_rank_one_pair(f, p, q, tol).value() - bregman(f, ps, qs, tol).value()));

        const auto s = rank_two_setup(d, ctx.rng);
        const double lambda = 0.01 + 0.48 * ctx.rng.uniform();
        const DensityState mix(lambda * s.p.matrix() + (1.0 - lambda) * s.q.matrix(), tol);
        const ExtendedReal closed = bregman_rank_one_vs_rank_two(f, s.r, lambda, s.p, s.q, tol);
        const ExtendedReal general = bregman(f, DensityState(s.r, tol), mix, tol);
        rank_two = std::max(rank_two, deviation(closed, general));
      }
      ctx.below(tag("closed-forms", "jensen-via-bregman", name, d), identity, 1e-8);
      ctx.below(tag("closed-forms", "jensen-rank-one", name, d), rank_one, 1e-8);
      if (f.has_finite_zero_derivative()) ctx.below(tag("closed-forms", "bregman-rank-one-pair", name, d), pair, 1e-8);
      ctx.below(tag("closed-forms", "bregman-rank-two", name, d), rank_two, 1e-8);

      const MatrixXcd u = random_unitary(d, ctx.rng);
      const DensityState e0(RankOneProjection::from_unnormalized(u.col(0)), tol);
      const DensityState e1(RankOneProjection::from_unnormalized(u.col(1)), tol);
      ctx.below(tag("closed-forms", "jensen-max-orthogonal", name, d),
                std::abs(jensen(f, e0, e1, tol) - jensen_max_constant(f)), 1e-10);
    }
  }
}

void suite_inversion(Context& ctx) {
  const auto& tol = ctx.opts.tol;
  for (const auto& name : ctx.opts.generators) {
    const NormalizedGenerator f = normalize(catalog(name));
    for (int d : ctx.opts.dims) {
      double from_breg = 0.0;
      double from_jen = 0.0;
      for (int k = 0; k < ctx.opts.samples; ++k) {
        const auto p = random_pure(d, ctx.rng);
        const auto q = random_pure(d, ctx.rng);
        const double tp = transition_probability(p, q);
        if (f.has_finite_zero_derivative())
          from_breg = std::max(
              from_breg, std::abs(transition_from_bregman(f, bregman_rank_one_pair(f, p, q, tol).value()) - tp));
        const double j = jensen(f, DensityState(p, tol), DensityState(q, tol), tol);
        from_jen = std::max(from_jen, std::abs(transition_from_jensen(f, j) - tp));
      }
      if (f.has_finite_zero_derivative()) ctx.below(tag("inversion", "transition-from-bregman", name, d), from_breg, 1e-8);
      ctx.below(tag("inversion", "transition-from-jensen", name, d), from_jen, 1e-6);
    }
    double spectrum = 0.0;
    for (int k = 0; k < ctx.opts.samples; ++k) {
      const double lambda = 0.01 + 0.48 * ctx.rng.uniform();
      const double delta = f.derivative(1.0 - lambda) - f.derivative(lambda);
      spectrum = std::max(spectrum, std::abs(recover_rank_two_spectrum(f, delta) - lambda));
    }
    ctx.below("inversion/rank-two-spectrum/" + name, spectrum, 1e-8);
  }
}

void suite_convexity(Context& ctx) {
  const auto& tol = ctx.opts.tol;
  for (const auto& name : ctx.opts.generators) {
    const NormalizedGenerator f = normalize(catalog(name));
    for (int d : ctx.opts.dims) {
      double min_gap = std::numeric_limits<double>::infinity();
      double joint = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < ctx.opts.samples; ++k) {
        const double t = 0.05 + 0.9 * ctx.rng.uniform();
        const DensityState a = random_any_rank(d, ctx.rng, tol);
        const DensityState b = random_any_rank(d, ctx.rng, tol);
        const DensityState dd = random_state(d, d, ctx.rng, tol);
        const DensityState mix(t * a.matrix() + (1.0 - t) * b.matrix(), tol);
        const double gap = t * bregman(f, a, dd, tol).value() + (1.0 - t) * bregman(f, b, dd, tol).value() -
                           bregman(f, mix, dd, tol).value();
        min_gap = std::min(min_gap, gap);

        if (f.matrix_entropy_member()) {
          const DensityState a2 = random_any_rank(d, ctx.rng, tol);
          const DensityState b1 = random_state(d, d, ctx.rng, tol);
          const DensityState b2 = random_state(d, d, ctx.rng, tol);
          const DensityState am(t * a.matrix() + (1.0 - t) * a2.matrix(), tol);
          const DensityState bm(t * b1.matrix() + (1.0 - t) * b2.matrix(), tol);
          const double lhs = bregman(f, am, bm, tol).value();
          const double rhs = t * bregman(f, a, b1, tol).value() + (1.0 - t) * bregman(f, a2, b2, tol).value();
          joint = std::max(joint, lhs - rhs);
        }
      }
      ctx.checks.push_back({tag("convexity", "strict-first-argument", name, d), min_gap > 0.0, min_gap, 0.0,
                            "measured is the smallest sampled convexity gap"});
      if (f.matrix_entropy_member()) ctx.below(tag("convexity", "joint", name, d), joint, 1e-9);
    }
  }
}

void suite_purity(Context& ctx) {
  const auto& tol = ctx.opts.tol;
  const SearchBudget budget;
  const PreserverOptions popts;
  for (const auto& name : ctx.opts.generators) {
    const NormalizedGenerator f = normalize(catalog(name));
    if (!f.has_finite_zero_derivative()) continue;
    for (int d : ctx.opts.dims) {
      const double reference =
          max_divergence_functional(f, DensityState(RankOneProjection::basis(d, 0), tol), budget, tol);
      int wrong = 0;
      double worst_mixed_margin = std::numeric_limits<double>::infinity();
      for (int k = 0; k < ctx.opts.samples; ++k) {
        const DensityState pure(random_pure(d, ctx.rng), tol);
        if (!is_pure_by_max(f, pure, reference, budget, popts, tol).pure) ++wrong;
        const DensityState mixed = random_mixed_state(d, 0.9, ctx.rng, tol);
        const auto verdict = is_pure_by_max(f, mixed, reference, budget, popts, tol);
        if (verdict.pure) ++wrong;
        worst_mixed_margin = std::min(worst_mixed_margin, verdict.margin);
      }
      ctx.checks.push_back({tag("purity", "classification", name, d), wrong == 0, static_cast<double>(wrong), 1.0,
                            "smallest mixed-state margin " + std::to_string(worst_mixed_margin)});
    }
  }
}

void suite_preserver_roundtrip(Context& ctx) {
  const auto& tol = ctx.opts.tol;
  for (int d : ctx.opts.dims) {
    if (d < 2) continue;
    const auto probes = wigner_probes(d);
    for (const bool anti : {false, true}) {
      double worst = 0.0;
      int flag_errors = 0;
      const int rounds = std::max(1, ctx.opts.samples / 5);
      for (int k = 0; k < rounds; ++k) {
        const SymmetryOp v(random_unitary(d, ctx.rng), anti);
        std::vector<RankOneProjection> images;
        for (const auto& p : probes) images.push_back(v.apply(p.projection));
        const WignerResult w = wigner_reconstruct(images, d);
        if (w.op.antiunitary() != anti) ++flag_errors;
        for (int s = 0; s < 100; ++s) {
          const MatrixXcd r = random_pure(d, ctx.rng).matrix();
          worst = std::max(worst, max_abs_entry(w.op.apply(r) - v.apply(r)));
        }
      }
      const std::string what = anti ? "wigner-antiunitary" : "wigner-unitary";
      ctx.below(tag("preserver-roundtrip", what, "", d), worst, 1e-8);
      ctx.checks.push_back({tag("preserver-roundtrip", what + "-flag", "", d), flag_errors == 0,
                            static_cast<double>(flag_errors), 1.0, ""});
    }
    for (const auto& name : ctx.opts.generators) {
      const NormalizedGenerator f = normalize(catalog(name));
      for (const auto kind : {DivergenceKind::Bregman, DivergenceKind::Jensen}) {
        VerifyOptions vopts;
        vopts.seed = static_cast<std::uint64_t>(ctx.rng.uniform() * 4294967296.0);
        vopts.sample_size = 8;
        const SymmetryOp v(random_unitary(d, ctx.rng), ctx.rng.uniform() < 0.5);
        const auto report = verify_preserver(f, conjugation_oracle(v), kind, vopts, tol);
        const double measured = std::max({report.max_divergence_deviation, report.max_state_residual,
                                          report.max_transition_deviation});
        ctx.checks.push_back({tag("preserver-roundtrip", "verify-" + to_string(kind), name, d),
                              report.passed() && report.reconstruction->antiunitary() == v.antiunitary(), measured,
                              vopts.tol, report.reconstruction_error});
      }
    }
  }
}

using SuiteFn = void (*)(Context&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"hermitian", suite_hermitian},     {"generators", suite_generators}, {"closed-forms", suite_closed_forms},
      {"inversion", suite_inversion},     {"convexity", suite_convexity},   {"purity", suite_purity},
      {"preserver-roundtrip", suite_preserver_roundtrip},
  };
  return r;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  names.push_back("all");
  return names;
}

RunReport run_suite(std::string_view name, const SuiteOptions& opts) {
  for (int d : opts.dims)
    if (d < 1) throw ParameterError("suite dimensions must be positive");
  if (opts.samples < 1) throw ParameterError("suite needs at least one sample");

  RunReport report;
  report.command = "suite " + std::string(name);
  report.seed = opts.seed;
  report.tol = opts.tol;
  const auto start = std::chrono::steady_clock::now();

  bool found = false;
  std::uint64_t index = 0;
  for (const auto& [suite, fn] : registry()) {
    ++index;
    if (name != "all" && name != suite) continue;
    found = true;
    // Each suite draws from its own stream so results do not depend on which others run.
    Rng root(opts.seed);
    Context ctx{opts, root.fork(index), report.checks};
    fn(ctx);
  }
  if (!found) throw ParameterError("unknown suite '" + std::string(name) + "'");

  if (opts.timing)
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace qdiv
