#include "glancing/commands.hpp"
#include "glancing/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

using namespace glancing;

int main(int argc, char **argv) {
  CLI::App app{"Wave propagation near a strictly convex boundary"};
  app.set_version_flag("--version", std::string(build_id()));

  std::string config_path;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "run configuration (INI)");
  app.add_option("--workers", workers, "worker threads, 0 = logical cores")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed for randomized sweeps");
  app.require_subcommand(1);

  std::optional<int> K;
  auto *airy = app.add_subcommand("airy-table", "build and cache the Airy zero table");
  airy->add_option("-K,--K", K, "number of zeros");
  app.add_subcommand("green", "spectral or image-sum field to CSV and JSON");
  app.add_subcommand("compare", "spectral against image-sum discrepancy");
  app.add_subcommand("caustics", "swallowtail caustic events");
  app.add_subcommand("decay", "sup-norm scan and decay exponent fit");
  app.add_subcommand("phase", "glancing phase jets and residual certificate");
  // Global flags may follow the subcommand name.
  for (auto *sub : app.get_subcommands({}))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ErrorKind::config);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  RunConfig cfg;
  try {
    if (!config_path.empty())
      cfg = load_config(config_path);
    else if (command != "airy-table")
      throw ConfigError(command + ": --config is required");
    if (!cfg.command.empty() && cfg.command != command)
      throw ConfigError("config is for '" + cfg.command + "', not '" + command + "'");
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  }
  cfg.command = command;
  if (workers)
    cfg.workers = *workers;
  if (out_dir)
    cfg.out_dir = *out_dir;
  if (seed)
    cfg.seed = *seed;
  if (K) {
    if (*K < 1) {
      std::cerr << "error: --K must be >= 1\n";
      return static_cast<int>(ErrorKind::config);
    }
    cfg.airy.K = *K;
  }
  return run_command(cfg, std::cout);
}
