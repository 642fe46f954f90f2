#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "intdim/errors.hpp"
#include "intdim/run_config.hpp"
#include "intdim/runner.hpp"

int main(int argc, char** argv) {
  using namespace intdim;
  CLI::App app{"Intermediate dimensions of finite point sets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  bool plot = false;

  for (Command c : {Command::Generate, Command::Estimate, Command::Profile, Command::Project, Command::Verify}) {
    auto* sub = app.add_subcommand(to_string(c));
    auto* opt = sub->add_option("--config", config_path, "JSON run configuration");
    if (c != Command::Verify) opt->required();
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--seed", seed, "random seed (overrides the config)");
    sub->add_option("--workers", workers, "worker threads (default: machine parallelism)");
    sub->add_flag("--plot", plot, "write plot.svg");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const CLI::App* sub = app.get_subcommands().front();
  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      cfg = RunConfig::load(config_path);
      detail::require(cfg.command == parse_command(sub->get_name()), "command",
                      "config is for " + std::string(to_string(cfg.command)) + ", not " + sub->get_name());
    } else {
      cfg = RunConfig::parse({{"command", sub->get_name()}});
    }
    if (out_dir) cfg.output = *out_dir;
    if (seed) cfg.seed = *seed;
    if (workers) {
      detail::require(*workers >= 1, "workers", "must be at least 1");
      cfg.workers = *workers;
    }
    if (plot) cfg.plot = true;
    detail::require(!cfg.output.empty(), "output", "must be non-empty");
  } catch (const Error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
  return run(cfg, std::cout, std::cerr);
}
