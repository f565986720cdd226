#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "format.hpp"

namespace snls {
namespace {

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "preset",          "horizon",         "steps",          "lambda",
      "epsilon",         "modes",           "noise_modes",    "scheme",
      "solver_tolerance", "solver_max_iterations", "linear_only", "initial",
      "resolutions",     "reference_steps", "mode_counts",    "reference_modes",
      "trajectories",    "moment_order",    "seed",           "alpha",
      "snapshot_stride", "thresholds",      "output_dir"};
  return keys;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

long long parse_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "'" + text + "' is not an integer");
  return v;
}

int parse_int(const std::string& key, const std::string& text, long long lo, long long hi) {
  const long long v = parse_integer(key, text);
  if (v < lo || v > hi)
    throw ConfigError(key, std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "]");
  return static_cast<int>(v);
}

double parse_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError(key, "'" + text + "' is not a finite number");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key, "'" + text + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ",") + fmt_double(x);
  return s;
}

KeyValues parse_lines(std::string_view text) {
  KeyValues out;
  std::string line;
  std::stringstream ss{std::string(text)};
  int number = 0;
  while (std::getline(ss, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(number), "expected 'key = value'");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(number), "empty key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

void check_strictly_monotone(const std::string& key, const std::vector<int>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if ((static_cast<long long>(v[i]) - v[i - 1]) * (static_cast<long long>(v[1]) - v[0]) <= 0)
      throw ConfigError(key, "values must be strictly monotone");
}

}  // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::describe() const {
  const auto& s = setup.scheme;
  return {
      {"preset", preset.empty() ? "none" : preset},
      {"horizon", fmt_double(s.horizon)},
      {"steps", std::to_string(s.num_steps)},
      {"lambda", std::to_string(s.focusing_sign)},
      {"epsilon", fmt_double(setup.intensity)},
      {"modes", std::to_string(setup.resolution)},
      {"noise_modes", std::to_string(setup.noise_modes)},
      {"scheme", std::string(to_string(s.kind))},
      {"solver_tolerance", fmt_double(s.solver_tolerance)},
      {"solver_max_iterations", std::to_string(s.solver_max_iterations)},
      {"linear_only", s.linear_only ? "true" : "false"},
      {"initial", initial},
      {"resolutions", join(resolutions)},
      {"reference_steps", std::to_string(reference_steps)},
      {"mode_counts", join(mode_counts)},
      {"reference_modes", std::to_string(reference_modes)},
      {"trajectories", std::to_string(setup.trajectories)},
      {"moment_order", fmt_double(setup.moment_order)},
      {"seed", std::to_string(setup.seed)},
      {"alpha", join(alphas)},
      {"snapshot_stride", std::to_string(snapshot_stride)},
      {"thresholds", std::to_string(thresholds)},
      {"output_dir", output_dir},
  };
}

std::vector<std::string> preset_names() {
  return {"figure1",    "figure2",     "desk-charge", "desk-time", "desk-space",
          "desk-moments", "desk-tails", "paper-time",  "paper-space"};
}

KeyValues preset_values(std::string_view name) {
  // tau = 2^-10 over T = 100 is 102400 steps
  if (name == "figure1")
    return {{"horizon", "100"}, {"epsilon", "10"}, {"modes", "64"},
            {"steps", "102400"}, {"snapshot_stride", "1024"}, {"trajectories", "1"}};
  if (name == "figure2")
    return {{"horizon", "100"},    {"epsilon", "10"},          {"modes", "64"},
            {"steps", "102400"},   {"snapshot_stride", "1024"}, {"trajectories", "1000"},
            {"alpha", "0.7,1"}};
  if (name == "desk-charge")
    return {{"horizon", "1"}, {"epsilon", "1"}, {"modes", "64"}, {"steps", "256"},
            {"trajectories", "10"}};
  if (name == "desk-time")
    return {{"horizon", "0.5"},       {"epsilon", "1"},
            {"lambda", "1"},          {"modes", "64"},
            {"steps", "2048"},        {"reference_steps", "2048"},
            {"resolutions", "64,128,256,512,1024"},
            {"trajectories", "100"},  {"moment_order", "2"}};
  if (name == "desk-space")
    return {{"horizon", "0.5"},        {"epsilon", "1"},      {"lambda", "1"},
            {"steps", "128"},          {"modes", "256"},      {"reference_modes", "256"},
            {"mode_counts", "4,8,16,32"}, {"trajectories", "50"}, {"moment_order", "2"}};
  if (name == "desk-moments")
    return {{"horizon", "10"},     {"epsilon", "1"},        {"modes", "64"},
            {"steps", "2560"},     {"trajectories", "200"}, {"alpha", "0.7,1"},
            {"snapshot_stride", "32"}};
  if (name == "desk-tails")
    return {{"horizon", "1"}, {"epsilon", "1"}, {"modes", "64"}, {"steps", "256"},
            {"trajectories", "1000"}};
  if (name == "paper-time")
    return {{"horizon", "1"},         {"epsilon", "1"},
            {"modes", "256"},         {"steps", "16384"},
            {"reference_steps", "16384"},
            {"resolutions", "512,1024,2048,4096,8192"},
            {"trajectories", "1000"}};
  if (name == "paper-space")
    return {{"horizon", "1"},           {"epsilon", "1"},          {"steps", "256"},
            {"modes", "1024"},          {"reference_modes", "1024"},
            {"mode_counts", "32,64,128,256,512"}, {"trajectories", "1000"}};
  throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

std::string paper_scale_preset(std::string_view subcommand) {
  if (subcommand == "converge-time") return "paper-time";
  if (subcommand == "converge-space") return "paper-space";
  if (subcommand == "moments") return "figure2";
  if (subcommand == "simulate") return "figure1";
  return {};
}

RunConfig parse_config(std::string_view text, const KeyValues& overrides) {
  const KeyValues file = parse_lines(text);
  const std::set<std::string> allowed(known_keys().begin(), known_keys().end());
  for (const auto* source : {&file, &overrides})
    for (const auto& [key, value] : *source)
      if (!allowed.count(key)) throw ConfigError(key, "unknown key");

  std::string preset;
  for (const auto* source : {&file, &overrides})
    for (const auto& [key, value] : *source)
      if (key == "preset") preset = value;

  std::map<std::string, std::string> values;
  if (!preset.empty() && preset != "none")
    for (const auto& [key, value] : preset_values(preset)) values[key] = value;
  for (const auto* source : {&file, &overrides})
    for (const auto& [key, value] : *source)
      if (key != "preset") values[key] = value;

  RunConfig cfg;
  cfg.preset = preset == "none" ? "" : preset;
  auto& setup = cfg.setup;
  auto& scheme = setup.scheme;
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };

  const std::string* horizon = get("horizon");
  if (!horizon) throw ConfigError("horizon", "missing (required)");
  scheme.horizon = parse_real("horizon", *horizon);
  if (!(scheme.horizon > 0.0)) throw ConfigError("horizon", "must be > 0");

  scheme.num_steps = 256;
  if (auto* v = get("steps")) scheme.num_steps = parse_int("steps", *v, 0, 1LL << 30);
  if (scheme.num_steps > 0 && !(scheme.dt() < 1.0))
    throw ConfigError("steps", "time step horizon/steps must be < 1");

  if (auto* v = get("lambda")) {
    const long long l = parse_integer("lambda", *v);
    if (l != 1 && l != -1) throw ConfigError("lambda", "must be 1 or -1, got " + *v);
    scheme.focusing_sign = static_cast<int>(l);
  }
  if (auto* v = get("epsilon")) {
    setup.intensity = parse_real("epsilon", *v);
    if (setup.intensity < 0.0) throw ConfigError("epsilon", "must be >= 0");
  }
  if (auto* v = get("modes")) setup.resolution = parse_int("modes", *v, 1, 1 << 16);
  if (auto* v = get("noise_modes")) setup.noise_modes = parse_int("noise_modes", *v, 0, 1 << 16);
  if (auto* v = get("scheme")) {
    try {
      scheme.kind = parse_scheme_kind(*v);
    } catch (const InvalidArgument&) {
      throw ConfigError("scheme", "must be 'spectral' or 'finite_difference', got '" + *v + "'");
    }
  }
  if (auto* v = get("solver_tolerance")) {
    scheme.solver_tolerance = parse_real("solver_tolerance", *v);
    if (!(scheme.solver_tolerance > 0.0)) throw ConfigError("solver_tolerance", "must be > 0");
  }
  if (auto* v = get("solver_max_iterations"))
    scheme.solver_max_iterations = parse_int("solver_max_iterations", *v, 1, 1 << 20);
  if (auto* v = get("linear_only")) scheme.linear_only = parse_bool("linear_only", *v);
  if (auto* v = get("initial")) {
    if (*v != "sine") throw ConfigError("initial", "only 'sine' (u0 = sin(pi x)) is supported");
    cfg.initial = *v;
  }
  if (auto* v = get("trajectories")) setup.trajectories = parse_int("trajectories", *v, 1, 1 << 24);
  if (auto* v = get("moment_order")) {
    setup.moment_order = parse_real("moment_order", *v);
    if (!(setup.moment_order >= 1.0)) throw ConfigError("moment_order", "must be >= 1");
  }
  if (auto* v = get("seed")) {
    const auto* end = v->data() + v->size();
    const auto [ptr, ec] = std::from_chars(v->data(), end, setup.seed);
    if (ec != std::errc() || ptr != end) throw ConfigError("seed", "not an unsigned 64-bit integer");
  }
  if (auto* v = get("alpha")) {
    cfg.alphas.clear();
    for (const auto& item : split_list(*v)) {
      const double a = parse_real("alpha", item);
      if (!(a > 0.0)) throw ConfigError("alpha", "values must be > 0");
      cfg.alphas.push_back(a);
    }
    if (cfg.alphas.empty()) throw ConfigError("alpha", "empty list");
  }
  if (auto* v = get("snapshot_stride"))
    cfg.snapshot_stride = parse_int("snapshot_stride", *v, 1, 1 << 30);
  if (auto* v = get("thresholds")) cfg.thresholds = parse_int("thresholds", *v, 8, 1 << 20);
  if (auto* v = get("output_dir")) {
    if (v->empty()) throw ConfigError("output_dir", "empty path");
    cfg.output_dir = *v;
  }

  if (auto* v = get("reference_steps"))
    cfg.reference_steps = parse_int("reference_steps", *v, 1, 1 << 30);
  if (auto* v = get("resolutions")) {
    for (const auto& item : split_list(*v))
      cfg.resolutions.push_back(parse_int("resolutions", item, 1, 1 << 30));
    check_strictly_monotone("resolutions", cfg.resolutions);
  }
  if (!cfg.resolutions.empty()) {
    if (cfg.reference_steps == 0)
      throw ConfigError("reference_steps", "required when resolutions are given");
    for (int c : cfg.resolutions) {
      if (cfg.reference_steps % c != 0)
        throw ConfigError("resolutions", "resolution " + std::to_string(c) +
                                             " does not divide reference_steps " +
                                             std::to_string(cfg.reference_steps));
      if (!(scheme.horizon / c < 1.0))
        throw ConfigError("resolutions", "resolution " + std::to_string(c) + " gives a time step >= 1");
    }
  }
  if (cfg.reference_steps > 0 && !(scheme.horizon / cfg.reference_steps < 1.0))
    throw ConfigError("reference_steps", "time step must be < 1");

  if (auto* v = get("reference_modes"))
    cfg.reference_modes = parse_int("reference_modes", *v, 1, 1 << 16);
  if (auto* v = get("mode_counts")) {
    for (const auto& item : split_list(*v))
      cfg.mode_counts.push_back(parse_int("mode_counts", item, 1, 1 << 16));
    check_strictly_monotone("mode_counts", cfg.mode_counts);
  }
  if (!cfg.mode_counts.empty()) {
    if (cfg.reference_modes == 0)
      throw ConfigError("reference_modes", "required when mode_counts are given");
    for (int n : cfg.mode_counts) {
      if (n > cfg.reference_modes)
        throw ConfigError("mode_counts", "mode count " + std::to_string(n) +
                                             " exceeds reference_modes");
      if (scheme.kind == SchemeKind::finite_difference && (cfg.reference_modes + 1) % (n + 1) != 0)
        throw ConfigError("mode_counts", "grid with " + std::to_string(n) +
                                             " nodes does not nest in the reference grid");
    }
  }
  return cfg;
}

}  // namespace snls
