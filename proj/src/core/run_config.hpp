#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "experiments.hpp"

namespace snls {

/// Validated settings for one CLI invocation.
struct RunConfig {
  ExperimentSetup setup;           // scheme, N, K, eps, P, p, seed
  std::string preset;              // empty when none was applied
  std::string initial = "sine";    // u(0,x) = sin(pi x)
  std::vector<int> resolutions;    // coarse step counts for converge-time
  int reference_steps = 0;
  std::vector<int> mode_counts;    // coarse N for converge-space
  int reference_modes = 0;
  std::vector<double> alphas{0.7, 1.0};
  int snapshot_stride = 1;
  int thresholds = 64;
  std::string output_dir = ".";

  /// Every key with its effective value, in documentation order.
  std::vector<std::pair<std::string, std::string>> describe() const;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Names of the shipped presets.
std::vector<std::string> preset_names();

/// Key/value pairs a preset stands for. Throws ConfigError("preset") if unknown.
KeyValues preset_values(std::string_view name);

/// Preset that --paper-scale selects for a subcommand (empty when none).
std::string paper_scale_preset(std::string_view subcommand);

/// Parses `key = value` lines ('#' starts a comment). Layering, lowest first:
/// built-in defaults, the preset named by a `preset` key (overrides win over
/// the file here too), the file's keys, then `overrides`. The result is fully
/// validated; failures throw ConfigError naming the key.
RunConfig parse_config(std::string_view text, const KeyValues& overrides = {});

}  // namespace snls
