#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "synchrony/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"synchrony: collective-action dynamics on social networks"};
  app.set_version_flag("--version", synchrony::kVersion);
  app.require_subcommand(1);

  synchrony::cli::CommonArgs common;
  std::uint64_t seed_value = 0;
  bool seed_given = false;

  const auto add_common = [&](CLI::App* sub, bool with_config) {
    sub->add_option("--out", common.out_dir, "Output directory")->required();
    if (with_config) {
      sub->add_option("--config", common.config_path, "Config file");
      sub->add_option("--from-manifest", common.from_manifest,
                      "Re-run from a previously written manifest.json");
    }
    sub->add_option("--seed", seed_value, "Override the config seed")
        ->each([&](const std::string&) { seed_given = true; });
    sub->add_flag("--quiet", common.quiet, "Suppress progress output");
  };

  auto* simulate = app.add_subcommand("simulate", "Run one trajectory and plot it");
  add_common(simulate, true);

  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid");
  add_common(sweep, true);

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run a built-in verification suite");
  verify->add_option("--suite", suite, "lemma2 | theorem1 | theorem2")->required();
  add_common(verify, false);

  std::string series_path;
  auto* calibrate = app.add_subcommand("calibrate", "Fit parameters to an event-count series");
  calibrate->add_option("--series", series_path, "Observed series CSV (month,count)")
      ->required();
  add_common(calibrate, true);

  synchrony::cli::GenNetworkArgs gen;
  auto* gen_network = app.add_subcommand("gen-network", "Generate and save a graph");
  gen_network->add_option("--kind", gen.kind, "ring | small-world");
  gen_network->add_option("--n", gen.n, "Node count");
  gen_network->add_option("--d", gen.d, "Mean degree");
  gen_network->add_option("--p-rewire", gen.p_rewire, "Rewiring probability");
  gen_network->add_option("--seed", gen.seed, "RNG seed");
  gen_network->add_option("--out", gen.out_dir, "Output directory")->required();
  gen_network->add_flag("--quiet", gen.quiet, "Suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (seed_given) common.seed = seed_value;

  return synchrony::cli::run_guarded([&]() -> int {
    if (simulate->parsed()) return synchrony::cli::cmd_simulate(common);
    if (sweep->parsed()) return synchrony::cli::cmd_sweep(common);
    if (verify->parsed()) return synchrony::cli::cmd_verify(suite, common);
    if (calibrate->parsed()) return synchrony::cli::cmd_calibrate(series_path, common);
    if (gen_network->parsed()) return synchrony::cli::cmd_gen_network(gen);
    return 2;
  });
}
