// Command-line front end: run experiment specs, audit result files, and dump
// the conic program of a scenario for debugging.
#include <optional>

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "fdisac/harness.hpp"

using namespace fdisac;

namespace {

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed, const std::string& out, int jobs) {
  ExperimentSpec spec = load_experiment(path);
  if (seed) spec.seed_base = *seed;
  if (!out.empty()) spec.out_dir = out;
  const auto t0 = std::chrono::steady_clock::now();
  const ResultTable table = run_experiment(spec, jobs);
  const std::string csv = emit(table, spec);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  int bad = 0;
  for (const auto& r : table.rows) {
    if (r.kind != RowKind::Trial) continue;
    if (r.status != "optimal" && r.status != "near-optimal" && r.status != "closed-form") {
      ++bad;
      std::cerr << "trial " << r.trial << " (" << to_string(r.method) << ", " << r.sweep_name << "="
                << r.sweep_value << "): " << r.status << (r.note.empty() ? "" : ": " + r.note) << '\n';
    }
  }
  std::cout << "wrote " << csv << " (" << table.rows.size() << " rows, " << secs << " s)\n";
  if (bad) std::cout << bad << " trial(s) did not reach an optimal solve\n";
  return table.all_ok() ? 0 : 1;
}

int cmd_check(const std::string& path) {
  const AuditReport rep = audit_results(path);
  for (const auto& w : rep.warnings) std::cout << "warning: " << w << '\n';
  for (const auto& e : rep.errors) std::cout << "error: " << e << '\n';
  std::cout << rep.trial_rows << " trial rows, " << rep.aggregate_rows << " aggregate rows: "
            << (rep.ok() ? "ok" : "FAILED") << '\n';
  return rep.ok() ? 0 : 1;
}

int cmd_dump(const std::string& path, std::optional<std::uint64_t> seed, const std::string& out) {
  ScenarioConfig cfg = load_config(path);
  if (seed) cfg.seed = *seed;
  const ChannelSet ch = make_channel_set(cfg);
  const SensingMasks masks = build_sensing_masks(cfg, ch);
  const Budgets b = Budgets::from(cfg);

  // The first subproblem of a warm-started run.
  const int K = ch.n_ul(), nt = ch.n_tx();
  RVec p = RVec::Constant(K, K > 0 ? b.p_ul / K : 0.0);
  const CMat zero = CMat::Zero(nt, nt);
  RVec t(K);
  for (int k = 0; k < K; ++k) t[k] = std::sqrt(ul_hat_sinr(k, ch, p, zero));
  const P13 prob = build_p13(ch, b, masks, make_expansion(ch, p, std::vector<CMat>(ch.n_dl(), zero), zero, t));

  if (out.empty()) {
    conic::dump(prob.program, std::cout);
  } else {
    std::ofstream os(out);
    if (!os) throw InvalidArgument("cannot write " + out);
    conic::dump(prob.program, os);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-duplex ISAC secrecy-rate beamforming experiments"};
  app.require_subcommand(1);

  std::string input, out;
  std::optional<std::uint64_t> seed;
  int jobs = 1;

  auto* run = app.add_subcommand("run", "Run an experiment spec and write CSV + JSON sidecar");
  run->add_option("spec", input, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the spec's seed_base");
  run->add_option("--out", out, "Override the output directory");
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "Audit a results CSV and its sidecar");
  check->add_option("csv", input, "Results CSV")->required()->check(CLI::ExistingFile);

  auto* dump = app.add_subcommand("dump-program", "Print the first conic subproblem of a scenario");
  dump->add_option("config", input, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  dump->add_option("--seed", seed, "Override the scenario seed");
  dump->add_option("--out", out, "Write to a file instead of stdout");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(input, seed, out, jobs);
    if (*check) return cmd_check(input);
    if (*dump) return cmd_dump(input, seed, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
