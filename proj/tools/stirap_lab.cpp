#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stirap/commands.hpp"
#include "stirap/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"stirap-lab: adiabatic passage simulations from JSON scenario configs"};
  app.require_subcommand(1);

  stirap::CommandOptions options;
  options.threads = stirap::default_thread_count();
  std::string config;

  auto add_common = [&](CLI::App* sub, bool parallel) {
    sub->add_option("config", config, "Config file or bundled scenario id")->required();
    sub->add_option("-o,--out", options.out_dir, "Output directory")->capture_default_str();
    if (parallel) {
      sub->add_option("-j,--threads", options.threads, "Worker threads (default STIRAP_LAB_THREADS or 1)")
          ->check(CLI::PositiveNumber);
    }
    sub->add_flag("--deterministic,--seedless", options.deterministic,
                  "Omit wall-clock time so outputs are byte-identical");
  };

  auto* run = app.add_subcommand("run", "Run a scenario and write its outputs");
  add_common(run, true);
  auto* sweep = app.add_subcommand("sweep", "Evaluate the sweep block of a scenario");
  add_common(sweep, true);
  auto* analyze = app.add_subcommand("analyze", "Adiabaticity report without propagation");
  add_common(analyze, false);
  auto* list = app.add_subcommand("list-scenarios", "List the bundled scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : stirap::kExitConfig;
  }

  if (*run) return stirap::cmd_run(config, options, std::cerr);
  if (*sweep) return stirap::cmd_sweep(config, options, std::cerr);
  if (*analyze) return stirap::cmd_analyze(config, options, std::cerr);
  if (*list) return stirap::cmd_list_scenarios(std::cout, std::cerr);
  return stirap::kExitConfig;
}
