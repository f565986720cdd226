#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snls/snls.h"

int main(int argc, char** argv) {
  CLI::App app{"Stochastic cubic NLS: simulation and convergence experiments"};
  app.usage(snls_usage());

  std::string subcommand;
  std::string config_path;
  std::string preset;
  std::vector<std::string> sets;
  std::string seed;
  std::string output;
  int workers = 0;
  bool paper_scale = false;
  bool show_config = false;

  app.add_option("subcommand", subcommand, "simulate | converge-time | converge-space | moments | tails");
  app.add_option("-c,--config", config_path, "key = value config file");
  app.add_option("-p,--preset", preset, "named parameter set");
  app.add_option("-s,--set", sets, "override one key (key=value), repeatable");
  app.add_option("--seed", seed, "top-level random seed");
  app.add_option("-o,--output", output, "output directory");
  app.add_option("-w,--workers", workers, "worker threads (default: SNLS_WORKERS or 1)")
      ->check(CLI::Range(1, 1024));
  app.add_flag("--paper-scale", paper_scale, "use the full-size parameter set for the subcommand");
  app.add_flag("--show-config", show_config, "print the effective configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (!snls_is_subcommand(subcommand.c_str())) {
    std::fprintf(stderr, "error: %s\n%s",
                 subcommand.empty() ? "missing subcommand"
                                    : ("unknown subcommand '" + subcommand + "'").c_str(),
                 snls_usage());
    return 2;
  }

  std::vector<std::string> overrides;
  if (preset.empty() && paper_scale) preset = snls_paper_scale_preset(subcommand.c_str());
  if (!preset.empty()) overrides.push_back("preset=" + preset);
  overrides.insert(overrides.end(), sets.begin(), sets.end());
  if (!seed.empty()) overrides.push_back("seed=" + seed);
  if (!output.empty()) overrides.push_back("output_dir=" + output);
  std::vector<const char*> raw;
  for (const auto& o : overrides) raw.push_back(o.c_str());

  snls_config* cfg = nullptr;
  const snls_status status =
      config_path.empty() ? snls_config_parse("", raw.data(), raw.size(), &cfg)
                          : snls_config_parse_file(config_path.c_str(), raw.data(), raw.size(), &cfg);
  if (status != SNLS_OK) {
    std::fprintf(stderr, "error: %s\n", snls_last_error());
    return status == SNLS_ERR_IO ? 5 : 3;
  }
  if (show_config) {
    std::fputs(snls_config_describe(cfg), stdout);
    snls_config_free(cfg);
    return 0;
  }
  const int code = snls_run(subcommand.c_str(), cfg, workers > 0 ? workers : snls_default_workers());
  snls_config_free(cfg);
  return code;
}
