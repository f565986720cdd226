#include "snls/snls.h"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>

#include "diagnostics.hpp"
#include "dispatch.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "format.hpp"
#include "noise.hpp"
#include "run_config.hpp"
#include "schemes.hpp"

struct snls_config {
  snls::RunConfig config;
  std::vector<std::pair<std::string, std::string>> described;
  std::string describe_text;
};

struct snls_noise_path {
  snls::NoisePath path;
};

struct snls_state {
  std::variant<snls::SpectralState, snls::GridState> state;
};

struct snls_error_table {
  snls::ErrorTable table;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_error_key;

snls_status fail(snls_status status, const std::string& message, const std::string& key = {}) {
  last_error = message;
  last_error_key = key;
  return status;
}

// Runs fn, mapping library exceptions to status codes.
template <class Fn>
snls_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    last_error_key.clear();
    fn();
    return SNLS_OK;
  } catch (const snls::ConfigError& e) {
    return fail(SNLS_ERR_CONFIG, e.what(), e.key());
  } catch (const snls::InvalidArgument& e) {
    return fail(SNLS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const snls::SolverDivergence& e) {
    return fail(SNLS_ERR_SOLVER_DIVERGENCE, e.what());
  } catch (const snls::ExperimentAborted& e) {
    return fail(SNLS_ERR_EXPERIMENT_ABORTED, e.what());
  } catch (const snls::IoError& e) {
    return fail(SNLS_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(SNLS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SNLS_ERR_INTERNAL, "unknown exception");
  }
}

snls::KeyValues split_overrides(const char* const* overrides, size_t count) {
  snls::KeyValues out;
  for (size_t i = 0; i < count; ++i) {
    if (!overrides || !overrides[i]) throw snls::InvalidArgument("null override string");
    const std::string item = overrides[i];
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw snls::ConfigError(item, "override must have the form key=value");
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

snls_config* make_config(std::string_view text, const char* const* overrides, size_t count) {
  auto* cfg = new snls_config{snls::parse_config(text, split_overrides(overrides, count)), {}, {}};
  cfg->described = cfg->config.describe();
  for (const auto& [key, value] : cfg->described) cfg->describe_text += "# " + key + ": " + value + "\n";
  return cfg;
}

template <class T>
void require(const T* p, const char* what) {
  if (!p) throw snls::InvalidArgument(std::string("null ") + what);
}

}  // namespace

extern "C" {

const char* snls_version(void) { return "0.1.0"; }
const char* snls_last_error(void) { return last_error.c_str(); }
const char* snls_last_error_key(void) { return last_error_key.c_str(); }

snls_status snls_config_parse(const char* text, const char* const* overrides, size_t count,
                              snls_config** out) {
  return guarded([&] {
    require(out, "output pointer");
    *out = nullptr;
    *out = make_config(text ? text : "", overrides, count);
  });
}

snls_status snls_config_parse_file(const char* path, const char* const* overrides, size_t count,
                                   snls_config** out) {
  return guarded([&] {
    require(out, "output pointer");
    require(path, "path");
    *out = nullptr;
    std::ifstream file(path, std::ios::binary);
    if (!file) throw snls::IoError(std::string("cannot read config '") + path + "'");
    std::ostringstream text;
    text << file.rdbuf();
    *out = make_config(text.str(), overrides, count);
  });
}

snls_status snls_config_get(const snls_config* cfg, const char* key, const char** value) {
  return guarded([&] {
    require(cfg, "config");
    require(key, "key");
    require(value, "value pointer");
    for (const auto& [k, v] : cfg->described)
      if (k == key) {
        *value = v.c_str();
        return;
      }
    throw snls::ConfigError(key, "unknown key");
  });
}

const char* snls_config_describe(const snls_config* cfg) {
  return cfg ? cfg->describe_text.c_str() : "";
}

void snls_config_free(snls_config* cfg) { delete cfg; }

int snls_is_subcommand(const char* name) { return name && snls::is_subcommand(name) ? 1 : 0; }

const char* snls_usage(void) {
  static const std::string text = snls::usage_text();
  return text.c_str();
}

const char* snls_paper_scale_preset(const char* subcommand) {
  if (!subcommand) return "";
  static thread_local std::string name;
  name = snls::paper_scale_preset(subcommand);
  return name.c_str();
}

int snls_default_workers(void) {
  const char* env = std::getenv("SNLS_WORKERS");
  if (!env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1 || v > 1024) return 1;
  return static_cast<int>(v);
}

int snls_run(const char* subcommand, const snls_config* cfg, int workers) {
  if (!subcommand || !snls::is_subcommand(subcommand)) {
    std::cerr << "error: unknown subcommand '" << (subcommand ? subcommand : "") << "'\n"
              << snls::usage_text();
    return snls::exit_usage;
  }
  if (!cfg) {
    std::cerr << "error: null config\n";
    return snls::exit_usage;
  }
  return snls::dispatch(subcommand, cfg->config, workers, std::cout, std::cerr);
}

snls_status snls_noise_sample(int num_modes, double intensity, double horizon, int num_steps,
                              uint64_t seed, uint64_t trajectory, snls_noise_path** out) {
  return guarded([&] {
    require(out, "output pointer");
    *out = nullptr;
    const auto spec = snls::build_covariance(num_modes, intensity);
    *out = new snls_noise_path{snls::sample_path(spec, horizon, num_steps, seed, trajectory)};
  });
}

snls_status snls_noise_coarsen(const snls_noise_path* path, int factor, snls_noise_path** out) {
  return guarded([&] {
    require(path, "noise path");
    require(out, "output pointer");
    *out = nullptr;
    *out = new snls_noise_path{snls::coarsen_path(path->path, factor)};
  });
}

int snls_noise_steps(const snls_noise_path* path) { return path ? path->path.num_steps() : 0; }
int snls_noise_modes(const snls_noise_path* path) { return path ? path->path.num_modes() : 0; }

snls_status snls_noise_increment(const snls_noise_path* path, int step, int mode, double* value) {
  return guarded([&] {
    require(path, "noise path");
    require(value, "value pointer");
    if (step < 0 || step >= path->path.num_steps() || mode < 1 || mode > path->path.num_modes())
      throw snls::InvalidArgument("noise increment index out of range (step " +
                                  std::to_string(step) + ", mode " + std::to_string(mode) + ")");
    *value = path->path.increment(step, mode - 1);
  });
}

void snls_noise_free(snls_noise_path* path) { delete path; }

snls_status snls_state_create_sine(snls_scheme scheme, int resolution, snls_state** out) {
  return guarded([&] {
    require(out, "output pointer");
    *out = nullptr;
    if (resolution < 1) throw snls::InvalidArgument("resolution must be >= 1");
    if (scheme == SNLS_SCHEME_SPECTRAL)
      *out = new snls_state{snls::sine_initial_spectral(resolution)};
    else if (scheme == SNLS_SCHEME_FINITE_DIFFERENCE)
      *out = new snls_state{snls::sine_initial_grid(resolution)};
    else
      throw snls::InvalidArgument("unknown scheme");
  });
}

int snls_state_size(const snls_state* state) {
  if (!state) return 0;
  return std::visit(
      [](const auto& s) -> int {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, snls::SpectralState>)
          return static_cast<int>(s.coeffs.size());
        else
          return static_cast<int>(s.values.size());
      },
      state->state);
}

snls_status snls_state_values(const snls_state* state, double* out, size_t capacity) {
  return guarded([&] {
    require(state, "state");
    require(out, "output buffer");
    const size_t n = static_cast<size_t>(snls_state_size(state));
    if (capacity < 2 * n) throw snls::InvalidArgument("output buffer holds fewer than 2*size doubles");
    std::visit(
        [&](const auto& s) {
          const auto& v = [&]() -> const std::vector<snls::Complex>& {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, snls::SpectralState>)
              return s.coeffs;
            else
              return s.values;
          }();
          for (size_t i = 0; i < n; ++i) {
            out[2 * i] = v[i].real();
            out[2 * i + 1] = v[i].imag();
          }
        },
        state->state);
  });
}

snls_status snls_state_observables(const snls_state* state, int focusing_sign,
                                   snls_observables* out) {
  return guarded([&] {
    require(state, "state");
    require(out, "output pointer");
    if (focusing_sign != 1 && focusing_sign != -1 && focusing_sign != 0)
      throw snls::InvalidArgument("focusing_sign must be -1, 0 or 1");
    const auto o = std::visit([&](const auto& s) { return snls::observe(s, focusing_sign); },
                              state->state);
    *out = {o.charge, o.energy, o.lyapunov, o.h1_norm};
  });
}

snls_status snls_state_advance(snls_state* state, const snls_config* cfg,
                               const snls_noise_path* path, double intensity) {
  return guarded([&] {
    require(state, "state");
    require(cfg, "config");
    require(path, "noise path");
    snls::SchemeConfig scheme = cfg->config.setup.scheme;
    const bool spectral = std::holds_alternative<snls::SpectralState>(state->state);
    scheme.kind = spectral ? snls::SchemeKind::spectral : snls::SchemeKind::finite_difference;
    if (path->path.num_steps() == 0) return;
    scheme.horizon = path->path.horizon();
    scheme.num_steps = path->path.num_steps();
    const auto spec = snls::build_covariance(path->path.num_modes(), intensity);
    std::visit(
        [&](auto& s) {
          s = snls::integrate(s, scheme, path->path, spec, [](int, const auto&) {});
        },
        state->state);
  });
}

void snls_state_free(snls_state* state) { delete state; }

snls_status snls_converge_time(const snls_config* cfg, int workers, snls_error_table** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "output pointer");
    *out = nullptr;
    const auto& c = cfg->config;
    if (c.resolutions.empty()) throw snls::ConfigError("resolutions", "required for converge-time");
    auto setup = c.setup;
    setup.workers = workers < 1 ? 1 : workers;
    *out = new snls_error_table{snls::strong_error_time(setup, c.resolutions, c.reference_steps)};
  });
}

snls_status snls_converge_space(const snls_config* cfg, int workers, snls_error_table** out) {
  return guarded([&] {
    require(cfg, "config");
    require(out, "output pointer");
    *out = nullptr;
    const auto& c = cfg->config;
    if (c.mode_counts.empty()) throw snls::ConfigError("mode_counts", "required for converge-space");
    auto setup = c.setup;
    setup.workers = workers < 1 ? 1 : workers;
    *out = new snls_error_table{snls::strong_error_space(setup, c.mode_counts, c.reference_modes)};
  });
}

size_t snls_table_rows(const snls_error_table* table) {
  return table ? table->table.errors.size() : 0;
}

snls_status snls_table_row(const snls_error_table* table, size_t row, double* resolution,
                           double* error, double* std_error) {
  return guarded([&] {
    require(table, "table");
    if (row >= table->table.errors.size()) throw snls::InvalidArgument("row out of range");
    if (resolution) *resolution = table->table.resolutions[row];
    if (error) *error = table->table.errors[row];
    if (std_error) *std_error = table->table.std_errors[row];
  });
}

double snls_table_fitted_slope(const snls_error_table* table) {
  return table ? table->table.fitted_slope : std::numeric_limits<double>::quiet_NaN();
}

int snls_table_failed_trajectories(const snls_error_table* table) {
  return table ? table->table.failed_trajectories : 0;
}

snls_status snls_table_write_csv(const snls_error_table* table, const char* path) {
  return guarded([&] {
    require(table, "table");
    require(path, "path");
    snls::emit_csv(table->table, path);
  });
}

void snls_table_free(snls_error_table* table) { delete table; }

snls_status snls_fit_order(const double* resolutions, const double* errors, size_t count,
                           double* slope) {
  return guarded([&] {
    require(slope, "slope pointer");
    if (count > 0) {
      require(resolutions, "resolutions");
      require(errors, "errors");
    }
    *slope = snls::fit_order({resolutions, count}, {errors, count});
  });
}

}  // extern "C"
