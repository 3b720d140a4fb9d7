// monogame: run, sweep and verify learning dynamics on monotone games.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "monogame/harness.hpp"

int main(int argc, char** argv) {
  using namespace monogame::harness;
  CLI::App app{"Payoff-perturbed and optimistic learning dynamics for monotone games"};
  app.require_subcommand(1);

  std::string config_path;
  int workers = 0;
  auto* run = app.add_subcommand("run", "Run every solver and seed of a config");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--workers", workers, "Parallel runs (default: config, then $MONOGAME_WORKERS)")
      ->check(CLI::PositiveNumber);

  std::string sweep_path;
  int sweep_workers = 0;
  auto* sweep = app.add_subcommand("sweep", "Grid sweep over eta, mu, T_sigma or c");
  sweep->add_option("--config", sweep_path, "Config file with a [sweep] section")->required();
  sweep->add_option("--workers", sweep_workers, "Parallel runs per cell")->check(CLI::PositiveNumber);

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run a numerical property suite");
  verify->add_option("suite", suite, "geometry, games, feedback, contraction, lemma3, potential, regret or all")
      ->required();

  std::string preset_name, preset_out = "-";
  auto* preset = app.add_subcommand("preset", "Write one of the built-in configs");
  preset->add_option("name", preset_name, "random_full, random_noisy, hard_full or hard_noisy")->required();
  preset->add_option("--out", preset_out, "Output path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  auto flag = [](int w) { return w > 0 ? std::optional<int>(w) : std::nullopt; };
  if (*run) return cmd_run(config_path, flag(workers), std::cout, std::cerr);
  if (*sweep) return cmd_sweep(sweep_path, flag(sweep_workers), std::cout, std::cerr);
  if (*verify) return cmd_verify(suite, std::cout, std::cerr);
  if (*preset) return cmd_preset(preset_name, preset_out, std::cout, std::cerr);
  return kConfigError;
}
