// SPDX-License-Identifier: Apache-2.0
// bertini: run density censuses, zeta tables and DVR lift searches from JSON configs.
#include <chrono>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "bertini/caps.hpp"
#include "bertini/runner.hpp"

namespace {

struct Args {
  std::string config;
  std::string out;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
};

int run(bertini::Command cmd, const Args& a) {
  using namespace bertini;
  try {
    const auto cfg = ExperimentConfig::load(a.config);
    const auto t0 = std::chrono::steady_clock::now();
    const auto outcome = run_experiment(cfg, cmd, RunOptions{a.threads, a.seed});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string dir = !a.out.empty() ? a.out : !cfg.out.empty() ? cfg.out : "out/" + cfg.name;
    write_artifacts(outcome, dir);
    std::cout << outcome.summary;
    // timing is never part of an artifact, so artifacts stay comparable across runs
    std::cout << "elapsed " << secs << " s, artifacts in " << dir << "\n";
    return outcome.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}

void add_run_options(CLI::App* sub, Args& a) {
  sub->add_option("--config,-c", a.config, "experiment JSON")->required()->check(CLI::ExistingFile);
  sub->add_option("--out,-o", a.out, "artifact directory (default: config \"out\", else out/<name>)");
  sub->add_option("--threads,-j", a.threads, "worker threads")->check(CLI::Range(1, 1024));
  sub->add_option("--seed", a.seed, "override the subsample seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bertini: Bertini-type densities over finite fields"};
  app.require_subcommand(1);
  Args a;
  auto* census = app.add_subcommand("census", "run a density census");
  auto* zeta = app.add_subcommand("zeta", "tabulate closed points and truncated zeta values");
  auto* lift = app.add_subcommand("lift", "search for good lifts over F_q[t]_(t)");
  auto* list = app.add_subcommand("list", "list experiment kinds and enumeration caps");
  for (auto* s : {census, zeta, lift}) add_run_options(s, a);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (list->parsed()) {
    for (const auto& k : bertini::experiment_registry())
      std::cout << k.kind << "  [" << bertini::to_string(k.command) << "]  " << k.anchor << "\n";
    const auto& c = bertini::Caps::current();
    std::cout << "caps: field " << c.field_order << ", census " << c.census << ", points " << c.points << "\n";
    return 0;
  }
  if (census->parsed()) return run(bertini::Command::Census, a);
  if (zeta->parsed()) return run(bertini::Command::Zeta, a);
  return run(bertini::Command::Lift, a);
}
