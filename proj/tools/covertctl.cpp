// covertctl: covert-communication planning, verification and simulation CLI.
//
// Verbs: figure2, verify, montecarlo, plan, constants.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "covert/experiments.hpp"
#include "covert/verification.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string unit;
};

void add_common(CLI::App* sub, CommonFlags& flags) {
  sub->add_option("--config", flags.config_path, "flat key=value config file");
  sub->add_option("--seed", flags.seed, "master seed (overrides config)");
  sub->add_option("--out", flags.out, "output path (default: stdout)");
  sub->add_option("--unit", flags.unit, "nats or bits (overrides config)")
      ->check(CLI::IsMember({"nats", "bits"}));
}

covert::ExperimentConfig resolve_config(const CommonFlags& flags) {
  covert::ExperimentConfig cfg;
  if (!flags.config_path.empty()) cfg = covert::load_config_file(flags.config_path);
  if (flags.seed) cfg.seed = *flags.seed;
  if (!flags.out.empty()) cfg.out = flags.out;
  if (!flags.unit.empty()) cfg.unit = flags.unit;
  return cfg;
}

int emit(const covert::ExperimentConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open output path: " << cfg.out << "\n";
    return 1;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-blocklength covert communication toolkit"};
  app.require_subcommand(1);

  CommonFlags fig_flags, mc_flags, plan_flags, const_flags;
  auto* fig = app.add_subcommand("figure2", "blocklength sweep of logM/sqrt(n) per metric");
  add_common(fig, fig_flags);
  auto* mc = app.add_subcommand("montecarlo", "simulate a planned code at one blocklength");
  add_common(mc, mc_flags);
  auto* plan = app.add_subcommand("plan", "tabulate planner output over an n grid");
  add_common(plan, plan_flags);
  auto* consts = app.add_subcommand("constants", "channel and bound constants");
  add_common(consts, const_flags);

  std::string suite_name;
  std::uint64_t verify_seed = 1;
  auto* verify = app.add_subcommand("verify", "run a named verification suite");
  verify->add_option("--suite", suite_name, "exact-oracles | concentration | sandwich | moments")
      ->required();
  verify->add_option("--seed", verify_seed, "suite seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fig->parsed()) {
      const auto cfg = resolve_config(fig_flags);
      return emit(cfg, covert::figure2_csv(cfg));
    }
    if (mc->parsed()) {
      const auto cfg = resolve_config(mc_flags);
      return emit(cfg, covert::montecarlo_csv(cfg));
    }
    if (plan->parsed()) {
      const auto cfg = resolve_config(plan_flags);
      return emit(cfg, covert::plan_csv(cfg));
    }
    if (consts->parsed()) {
      const auto cfg = resolve_config(const_flags);
      return emit(cfg, covert::constants_text(cfg));
    }
    if (verify->parsed()) {
      const auto report = covert::verification::run_suite(suite_name, verify_seed);
      for (const auto& check : report.checks) {
        std::printf("[%s] %s (slack %.6g, %s)\n", check.pass ? "PASS" : "FAIL",
                    check.name.c_str(), check.slack, check.mode.c_str());
      }
      std::printf("%s: %s\n", report.suite.c_str(), report.all_pass() ? "all passed" : "FAILURES");
      return report.all_pass() ? 0 : 1;
    }
  } catch (const covert::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
