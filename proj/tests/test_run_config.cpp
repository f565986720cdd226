#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "errors.hpp"
#include "run_config.hpp"

using namespace snls;

namespace {

std::string error_key(const std::string& text, const KeyValues& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST(ParseConfig, MinimalConfigTakesDefaults) {
  const auto cfg = parse_config("horizon = 2\nsteps = 64\n");
  EXPECT_EQ(cfg.setup.scheme.horizon, 2.0);
  EXPECT_EQ(cfg.setup.scheme.num_steps, 64);
  EXPECT_EQ(cfg.setup.scheme.focusing_sign, 1);
  EXPECT_EQ(cfg.setup.intensity, 1.0);
  EXPECT_EQ(cfg.setup.moment_order, 2.0);
  EXPECT_EQ(cfg.setup.scheme.kind, SchemeKind::spectral);
  EXPECT_EQ(cfg.initial, "sine");
  EXPECT_EQ(cfg.output_dir, ".");
  EXPECT_TRUE(cfg.preset.empty());
}

TEST(ParseConfig, CommentsAndWhitespace) {
  const auto cfg = parse_config("# header\n  horizon=1   # trailing\n\nlambda = -1\nscheme = fd\n");
  EXPECT_EQ(cfg.setup.scheme.focusing_sign, -1);
  EXPECT_EQ(cfg.setup.scheme.kind, SchemeKind::finite_difference);
}

TEST(ParseConfig, ErrorsNameTheKey) {
  EXPECT_EQ(error_key("horizon = 1\nlambda = 2\n"), "lambda");
  EXPECT_EQ(error_key("horizon = 1\nlambda = 0\n"), "lambda");
  EXPECT_EQ(error_key("horizon = 1\nbogus = 3\n"), "bogus");
  EXPECT_EQ(error_key("steps = 10\n"), "horizon");
  EXPECT_EQ(error_key("horizon = 2\nsteps = 2\n"), "steps");
  EXPECT_EQ(error_key("horizon = 1\nsteps = 1\n"), "steps");
  EXPECT_EQ(error_key("horizon = -1\n"), "horizon");
  EXPECT_EQ(error_key("horizon = 1\nepsilon = -0.5\n"), "epsilon");
  EXPECT_EQ(error_key("horizon = 1\nmodes = 0\n"), "modes");
  EXPECT_EQ(error_key("horizon = 1\nsteps = 2.5\n"), "steps");
  EXPECT_EQ(error_key("horizon = 1\nscheme = fem\n"), "scheme");
  EXPECT_EQ(error_key("horizon = 1\ninitial = gaussian\n"), "initial");
  EXPECT_EQ(error_key("horizon = 1\nalpha = 1,-2\n"), "alpha");
  EXPECT_EQ(error_key("horizon = 1\nlinear_only = maybe\n"), "linear_only");
  EXPECT_EQ(error_key("horizon = 1\npreset = nope\n"), "preset");
  EXPECT_EQ(error_key("horizon = 1\njust a line\n"), "line 2");
}

TEST(ParseConfig, ResolutionChecks) {
  EXPECT_EQ(error_key("horizon = 1\nresolutions = 4,8\n"), "reference_steps");
  EXPECT_EQ(error_key("horizon = 1\nresolutions = 4,16,8\nreference_steps = 16\n"), "resolutions");
  try {
    parse_config("horizon = 1\nresolutions = 4,6\nreference_steps = 16\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "resolutions");
    EXPECT_NE(std::string(e.what()).find("resolution 6"), std::string::npos);
  }
  EXPECT_EQ(error_key("horizon = 1\nmode_counts = 4,8\n"), "reference_modes");
  EXPECT_EQ(error_key("horizon = 1\nmode_counts = 4,64\nreference_modes = 32\n"), "mode_counts");
  EXPECT_EQ(error_key("horizon = 1\nscheme = fd\nmode_counts = 4\nreference_modes = 31\n"), "mode_counts");
  const auto ok = parse_config("horizon = 1\nscheme = fd\nmode_counts = 3,7\nreference_modes = 31\n");
  EXPECT_EQ(ok.mode_counts, (std::vector<int>{3, 7}));
}

TEST(ParseConfig, Figure1Preset) {
  const auto cfg = parse_config("preset = figure1\n");
  EXPECT_EQ(cfg.preset, "figure1");
  EXPECT_EQ(cfg.setup.scheme.horizon, 100.0);
  EXPECT_EQ(cfg.setup.intensity, 10.0);
  EXPECT_EQ(cfg.setup.resolution, 64);
  EXPECT_EQ(cfg.setup.scheme.dt(), std::ldexp(1.0, -10));
}

TEST(ParseConfig, Figure2PresetAddsMoments) {
  const auto cfg = parse_config("preset = figure2\n");
  EXPECT_EQ(cfg.setup.trajectories, 1000);
  EXPECT_EQ(cfg.alphas, (std::vector<double>{0.7, 1.0}));
  EXPECT_EQ(cfg.setup.scheme.dt(), std::ldexp(1.0, -10));
}

TEST(ParseConfig, DeskPresetsMatchAcceptanceSettings) {
  const auto time = parse_config("preset = desk-time\n");
  EXPECT_EQ(time.setup.scheme.horizon, 0.5);
  EXPECT_EQ(time.setup.resolution, 64);
  EXPECT_EQ(time.reference_steps, 2048);
  EXPECT_EQ(0.5 / time.reference_steps, std::ldexp(1.0, -12));
  EXPECT_EQ(time.resolutions, (std::vector<int>{64, 128, 256, 512, 1024}));
  EXPECT_EQ(time.setup.trajectories, 100);
  const auto space = parse_config("preset = desk-space\n");
  EXPECT_EQ(space.setup.scheme.dt(), std::ldexp(1.0, -8));
  EXPECT_EQ(space.mode_counts, (std::vector<int>{4, 8, 16, 32}));
  EXPECT_EQ(space.reference_modes, 256);
  EXPECT_EQ(space.setup.trajectories, 50);
  const auto paper = parse_config("preset = paper-time\n");
  EXPECT_EQ(1.0 / paper.reference_steps, std::ldexp(1.0, -14));
  EXPECT_EQ(paper.setup.resolution, 256);
  for (const auto& name : preset_names()) EXPECT_NO_THROW(parse_config("preset = " + name + "\n")) << name;
}

TEST(ParseConfig, LayeringOrder) {
  // preset < file < overrides
  const auto cfg = parse_config("preset = figure1\nepsilon = 3\nseed = 5\n", {{"seed", "9"}});
  EXPECT_EQ(cfg.setup.intensity, 3.0);
  EXPECT_EQ(cfg.setup.seed, 9u);
  EXPECT_EQ(cfg.setup.scheme.horizon, 100.0);
  const auto swapped = parse_config("preset = figure1\n", {{"preset", "desk-tails"}});
  EXPECT_EQ(swapped.preset, "desk-tails");
  EXPECT_EQ(swapped.setup.scheme.horizon, 1.0);
  EXPECT_EQ(error_key("horizon = 1\n", {{"nope", "1"}}), "nope");
}

TEST(ParseConfig, DescribeListsEveryKey) {
  const auto cfg = parse_config("horizon = 0.5\nsteps = 8\n");
  const auto d = cfg.describe();
  EXPECT_EQ(d.size(), 23u);
  EXPECT_EQ(d[1], (std::pair<std::string, std::string>{"horizon", "0.5"}));
  EXPECT_EQ(d[2], (std::pair<std::string, std::string>{"steps", "8"}));
}

TEST(PaperScale, MapsSubcommandsToFullPresets) {
  EXPECT_EQ(paper_scale_preset("converge-time"), "paper-time");
  EXPECT_EQ(paper_scale_preset("converge-space"), "paper-space");
  EXPECT_EQ(paper_scale_preset("moments"), "figure2");
  EXPECT_EQ(paper_scale_preset("simulate"), "figure1");
  EXPECT_EQ(paper_scale_preset("tails"), "");
}
