#include "qdiv/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "qdiv/errors.hpp"
#include "qdiv/io.hpp"
#include "qdiv/preserver.hpp"
#include "qdiv/random.hpp"
#include "qdiv/suites.hpp"

namespace qdiv {

namespace {

using io::json;

struct TolFlags {
  std::map<std::string, std::optional<double>> values{{"herm", {}},    {"psd", {}}, {"trace", {}},
                                                      {"num", {}},     {"cluster", {}}, {"supp", {}}};

  void attach(CLI::App& app) {
    for (auto& [key, slot] : values)
      app.add_option("--tol-" + key, slot, "override the " + key + " tolerance")->check(CLI::PositiveNumber);
  }

  Tolerances resolve() const {
    Tolerances tol = tolerances_from_environment();
    for (const auto& [key, slot] : values)
      if (slot) set_tolerance(tol, key, *slot);
    return tol;
  }
};

void emit(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) out << j.dump(2) << '\n';
  else io::write_json_file(path, j);
}

json number(double v) { return std::isfinite(v) ? json(v) : json(v > 0 ? "inf" : "-inf"); }

json tolerances_json(const Tolerances& tol) {
  return {{"herm", tol.herm}, {"psd", tol.psd},         {"trace", tol.trace},
          {"num", tol.num},   {"cluster", tol.cluster}, {"supp", tol.supp}};
}

// Fills the pairwise table, one worker per hardware thread over rows.
std::vector<std::vector<ExtendedReal>> compute_table(DivergenceKind kind, const NormalizedGenerator& f,
                                                     const std::vector<DensityState>& states, const Tolerances& tol) {
  const std::size_t n = states.size();
  std::vector<std::vector<ExtendedReal>> values(n, std::vector<ExtendedReal>(n, ExtendedReal::finite(0.0)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        for (std::size_t k = 0; k < n; ++k)
          if (i != k) values[i][k] = divergence(kind, f, states[i], states[k], tol);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(n, 1));
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return values;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bregman and Jensen divergences of quantum states, and divergence preserver reconstruction", "qdiv"};
  app.require_subcommand(1);
  app.fallthrough();
  TolFlags tol_flags;
  tol_flags.attach(app);

  std::function<int()> action;

  // div
  auto* div = app.add_subcommand("div", "divergence of two state files");
  std::string div_kind, div_gen, div_a, div_b;
  div->add_option("kind", div_kind, "bregman or jensen")->required()->check(CLI::IsMember({"bregman", "jensen"}));
  div->add_option("--f", div_gen, "generator: xlogx, quadratic, power:q=<q>")->required();
  div->add_option("A", div_a)->required();
  div->add_option("B", div_b)->required();
  div->callback([&] {
    action = [&] {
      const Tolerances tol = tol_flags.resolve();
      const NormalizedGenerator f = normalize(catalog(div_gen));
      const DensityState a = io::read_state_file(div_a, tol);
      const DensityState b = io::read_state_file(div_b, tol);
      if (a.dim() != b.dim()) throw DimensionMismatch("states have dimensions " + std::to_string(a.dim()) + " and " +
                                                      std::to_string(b.dim()));
      out << divergence(parse_divergence_kind(div_kind), f, a, b, tol).to_string(12) << '\n';
      return kExitOk;
    };
  });

  // gen
  auto* gen = app.add_subcommand("gen", "seeded random state, pure state, unitary or antiunitary");
  std::string gen_kind, gen_out;
  long long gen_dim = 0;
  std::optional<long long> gen_rank;
  std::uint64_t gen_seed = 0;
  gen->add_option("kind", gen_kind)->required()->check(CLI::IsMember({"state", "pure", "unitary", "antiunitary"}));
  gen->add_option("--dim", gen_dim)->required();
  gen->add_option("--rank", gen_rank, "number of nonzero eigenvalues (state only, default dim)");
  gen->add_option("--seed", gen_seed)->required();
  gen->add_option("-o,--output", gen_out)->required();
  gen->callback([&] {
    action = [&] {
      const Tolerances tol = tol_flags.resolve();
      if (gen_dim < 1) throw ParameterError("--dim must be positive");
      Rng rng(gen_seed);
      if (gen_kind == "state") {
        const long long rank = gen_rank.value_or(gen_dim);
        if (rank < 1 || rank > gen_dim) throw ParameterError("--rank must lie in [1, dim]");
        io::write_matrix_file(gen_out, random_state(gen_dim, rank, rng, tol).matrix());
      } else {
        if (gen_rank) throw ParameterError("--rank only applies to 'state'");
        if (gen_kind == "pure") io::write_matrix_file(gen_out, random_pure(gen_dim, rng).matrix());
        else io::write_json_file(gen_out, io::symmetry_to_json(SymmetryOp(random_unitary(gen_dim, rng), gen_kind == "antiunitary")));
      }
      return kExitOk;
    };
  });

  // table
  auto* table = app.add_subcommand("table", "pairwise divergence table over state files");
  std::string table_kind, table_gen, table_out;
  std::vector<std::string> table_files;
  table->add_option("--kind", table_kind)->required()->check(CLI::IsMember({"bregman", "jensen"}));
  table->add_option("--f", table_gen)->required();
  table->add_option("files", table_files)->required();
  table->add_option("-o,--output", table_out, "write the table here instead of stdout");
  table->callback([&] {
    action = [&] {
      const Tolerances tol = tol_flags.resolve();
      io::DivergenceTable t;
      t.generator = table_gen;
      t.kind = parse_divergence_kind(table_kind);
      std::vector<DensityState> states;
      for (const auto& file : table_files) {
        states.push_back(io::read_state_file(file, tol));
        if (states.back().dim() != states.front().dim())
          throw DimensionMismatch(file + " has dimension " + std::to_string(states.back().dim()) + ", expected " +
                                  std::to_string(states.front().dim()));
        t.labels.push_back(std::filesystem::path(file).stem().string());
      }
      t.values = compute_table(t.kind, normalize(catalog(table_gen)), states, tol);
      emit(io::table_to_json(t), table_out, out);
      return kExitOk;
    };
  });

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "rebuild the implementing (anti)unitary from probe images");
  std::string rec_in, rec_out;
  rec->add_option("probes", rec_in)->required();
  rec->add_option("-o,--output", rec_out)->required();
  rec->callback([&] {
    action = [&] {
      const Tolerances tol = tol_flags.resolve();
      Eigen::Index dim = 0;
      const auto matrices = io::probe_images_from_json(io::read_json_file(rec_in), dim);
      const auto probes = wigner_probes(dim);
      std::vector<RankOneProjection> images;
      for (std::size_t k = 0; k < matrices.size(); ++k) {
        try {
          images.push_back(RankOneProjection::from_matrix(matrices[k], 1e-6));
        } catch (const ValidationError& e) {
          throw ValidationError("image of probe " + probes[k].label + ": " + e.what());
        }
      }
      const WignerResult w = wigner_reconstruct(images, dim);
      json sym = io::symmetry_to_json(w.op);
      sym["max_probe_residual"] = w.max_probe_residual;
      io::write_json_file(rec_out, sym);
      out << json{{"command", "reconstruct"},
                  {"input", rec_in},
                  {"output", rec_out},
                  {"dim", dim},
                  {"antiunitary", w.op.antiunitary()},
                  {"max_probe_residual", w.max_probe_residual},
                  {"tolerances", tolerances_json(tol)}}
                 .dump(2)
          << '\n';
      return kExitOk;
    };
  });

  // verify
  auto* ver = app.add_subcommand("verify", "test whether an oracle map preserves a divergence");
  std::string ver_kind, ver_gen, ver_oracle, ver_out;
  long long ver_dim = 3;
  VerifyOptions vopts;
  ver->add_option("--kind", ver_kind)->required()->check(CLI::IsMember({"bregman", "jensen"}));
  ver->add_option("--f", ver_gen)->required();
  ver->add_option("--oracle", ver_oracle, "identity, transpose, dephase, depolarize[:p=w], unitary:seed=S, antiunitary:seed=S")
      ->required();
  ver->add_option("--dim", ver_dim)->capture_default_str();
  ver->add_option("--samples", vopts.sample_size)->capture_default_str();
  ver->add_option("--seed", vopts.seed)->capture_default_str();
  ver->add_option("-o,--output", ver_out);
  ver->callback([&] {
    action = [&] {
      const Tolerances tol = tol_flags.resolve();
      if (ver_dim < 2) throw ParameterError("--dim must be at least 2");
      if (vopts.sample_size < 2) throw ParameterError("--samples must be at least 2");
      const auto kind = parse_divergence_kind(ver_kind);
      const auto r = verify_preserver(normalize(catalog(ver_gen)), parse_oracle(ver_oracle, ver_dim), kind, vopts, tol);
      json j{{"command", "verify"},
             {"kind", to_string(kind)},
             {"generator", ver_gen},
             {"oracle", ver_oracle},
             {"dim", ver_dim},
             {"seed", vopts.seed},
             {"samples", vopts.sample_size},
             {"tolerances", tolerances_json(tol)},
             {"pairs_checked", r.pairs_checked},
             {"max_divergence_deviation", number(r.max_divergence_deviation)},
             {"worst_pair", r.worst_pair},
             {"transition_route", r.transition_route},
             {"max_transition_deviation", number(r.max_transition_deviation)},
             {"max_probe_residual", number(r.max_probe_residual)},
             {"max_state_residual", number(r.max_state_residual)},
             {"threshold", r.tol},
             {"divergence_preserved", r.divergence_preserved()},
             {"reconstructed", r.reconstructed()},
             {"implemented", r.implemented()},
             {"passed", r.passed()}};
      if (r.reconstruction) j["symmetry"] = io::symmetry_to_json(*r.reconstruction);
      else j["reconstruction_error"] = r.reconstruction_error;
      emit(j, ver_out, out);
      return r.passed() ? kExitOk : kExitCheckFailed;
    };
  });

  // suite
  auto* suite = app.add_subcommand("suite", "run a property suite and print a machine-readable report");
  std::string suite_name, suite_out;
  SuiteOptions sopts;
  suite->add_option("name", suite_name)->required()->check(CLI::IsMember(suite_names()));
  suite->add_option("--dims", sopts.dims)->capture_default_str();
  suite->add_option("--seed", sopts.seed)->capture_default_str();
  suite->add_option("--generators", sopts.generators)->capture_default_str();
  suite->add_option("--samples", sopts.samples)->capture_default_str();
  suite->add_flag("--timing", sopts.timing, "include wall time in the report");
  suite->add_option("-o,--output", suite_out);
  suite->callback([&] {
    action = [&] {
      sopts.tol = tol_flags.resolve();
      for (const auto& g : sopts.generators) catalog(g);
      const RunReport report = run_suite(suite_name, sopts);
      emit(report.to_json(), suite_out, out);
      return report.passed() ? kExitOk : kExitCheckFailed;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const DimensionMismatch& e) {
    err << "dimension mismatch: " << e.what() << '\n';
    return kExitDimension;
  } catch (const NotAPreserverError& e) {
    err << "not a preserver: " << e.what() << '\n';
    return kExitNotAPreserver;
  } catch (const DegenerateInputError& e) {
    err << "degenerate input: " << e.what() << '\n';
    return kExitNotAPreserver;
  } catch (const ParameterError& e) {
    err << "invalid parameter: " << e.what() << '\n';
    return kExitParameter;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitOther;
  }
}

}  // namespace qdiv
