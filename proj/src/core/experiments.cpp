#include "experiments.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "format.hpp"
#include "parallel.hpp"
#include "stats.hpp"

namespace snls {
namespace {

double distance_sq(const SpectralState& a, const SpectralState& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.coeffs.size(); ++k) s += std::norm(a.coeffs[k] - b.coeffs[k]);
  return s;
}

double distance_sq(const GridState& a, const GridState& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
  return a.spacing * s;
}

template <class State>
State initial_state(int resolution);
template <>
SpectralState initial_state<SpectralState>(int resolution) {
  return sine_initial_spectral(resolution);
}
template <>
GridState initial_state<GridState>(int resolution) {
  return sine_initial_grid(resolution);
}

void check_setup(const ExperimentSetup& setup) {
  if (setup.trajectories < 1) throw InvalidArgument("experiment: trajectories must be >= 1");
  if (!(setup.moment_order >= 1.0)) throw InvalidArgument("experiment: moment order must be >= 1");
  if (setup.resolution < 1) throw InvalidArgument("experiment: resolution must be >= 1");
  if (setup.noise_modes < 0) throw InvalidArgument("experiment: noise_modes must be >= 0");
}

// Per-trajectory error vectors -> Monte Carlo estimates. nullopt marks a failed trajectory.
void reduce_errors(const std::vector<std::optional<std::vector<double>>>& per_trajectory,
                   ErrorTable& table) {
  const std::size_t count = table.resolutions.size();
  std::vector<const std::vector<double>*> ok;
  for (const auto& t : per_trajectory)
    if (t) ok.push_back(&*t);
  table.failed_trajectories = static_cast<int>(per_trajectory.size() - ok.size());
  table.trajectories = static_cast<int>(ok.size());
  // drop-and-flag, at most 1% of the requested trajectories
  if (100 * table.failed_trajectories > static_cast<int>(per_trajectory.size()))
    throw ExperimentAborted(std::to_string(table.failed_trajectories) + " of " +
                            std::to_string(per_trajectory.size()) +
                            " trajectories hit solver failures (budget is 1%)");

  const double p = table.moment_order;
  const double n = static_cast<double>(ok.size());
  table.errors.assign(count, 0.0);
  table.std_errors.assign(count, 0.0);
  for (std::size_t r = 0; r < count; ++r) {
    double mean = 0.0;
    for (const auto* e : ok) mean += std::pow((*e)[r], p);
    mean /= n;
    double var = 0.0;
    for (const auto* e : ok) {
      const double d = std::pow((*e)[r], p) - mean;
      var += d * d;
    }
    table.errors[r] = std::pow(mean, 1.0 / p);
    if (ok.size() > 1 && mean > 0.0) {
      const double se_mean = std::sqrt(var / (n - 1.0) / n);
      table.std_errors[r] = std::pow(mean, 1.0 / p - 1.0) * se_mean / p;
    }
  }
}

void finish_table(ErrorTable& table, std::span<const double> fit_abscissa) {
  table.fitted_slope = std::numeric_limits<double>::quiet_NaN();
  bool fittable = table.errors.size() >= 2;
  for (double e : table.errors) fittable = fittable && e > 0.0;
  if (fittable) table.fitted_slope = fit_order(fit_abscissa, table.errors);
}

void common_provenance(const ExperimentSetup& setup, int noise_modes, ErrorTable& table) {
  auto& p = table.provenance;
  p.emplace_back("scheme", std::string(to_string(setup.scheme.kind)));
  p.emplace_back("horizon", fmt_double(setup.scheme.horizon));
  p.emplace_back("lambda", std::to_string(setup.scheme.focusing_sign));
  p.emplace_back("linear_only", setup.scheme.linear_only ? "true" : "false");
  p.emplace_back("solver_tolerance", fmt_double(setup.scheme.solver_tolerance));
  p.emplace_back("solver_max_iterations", std::to_string(setup.scheme.solver_max_iterations));
  p.emplace_back("epsilon", fmt_double(setup.intensity));
  p.emplace_back("noise_modes", std::to_string(noise_modes));
  p.emplace_back("trajectories_requested", std::to_string(setup.trajectories));
  p.emplace_back("moment_order", fmt_double(setup.moment_order));
  p.emplace_back("seed", std::to_string(setup.seed));
  p.emplace_back("initial", "sin(pi x)");
}

template <class State>
std::vector<double> time_errors(const ExperimentSetup& setup, const CovarianceSpec& spec,
                                std::span<const int> step_counts, int reference_steps,
                                int stride, std::uint64_t trajectory) {
  const NoisePath fine = sample_path(spec, setup.scheme.horizon, reference_steps, setup.seed,
                                     trajectory);
  SchemeConfig ref_config = setup.scheme;
  ref_config.num_steps = reference_steps;
  std::vector<State> reference;
  reference.reserve(reference_steps / stride + 1);
  const State start = initial_state<State>(setup.resolution);
  integrate(start, ref_config, fine, spec, [&](int m, const State& s) {
    if (m % stride == 0) reference.push_back(s);
  });

  std::vector<double> errors;
  errors.reserve(step_counts.size());
  for (int steps : step_counts) {
    const int factor = reference_steps / steps;
    SchemeConfig config = setup.scheme;
    config.num_steps = steps;
    const NoisePath coarse = factor == 1 ? fine : coarsen_path(fine, factor);
    double sup = 0.0;
    integrate(start, config, coarse, spec, [&](int m, const State& s) {
      const State& r = reference[static_cast<std::size_t>(m) * factor / stride];
      sup = std::max(sup, distance_sq(r, s));
    });
    errors.push_back(std::sqrt(sup));
  }
  return errors;
}

template <class State>
State final_state(const ExperimentSetup& setup, const CovarianceSpec& spec, const NoisePath& path,
                  int resolution) {
  return integrate(initial_state<State>(resolution), setup.scheme, path, spec,
                   [](int, const State&) {});
}

std::vector<double> spectral_space_errors(const ExperimentSetup& setup, const CovarianceSpec& spec,
                                          std::span<const int> modes, int reference_modes,
                                          std::uint64_t trajectory) {
  const NoisePath path = sample_path(spec, setup.scheme.horizon, setup.scheme.num_steps,
                                     setup.seed, trajectory);
  const SpectralState ref = final_state<SpectralState>(setup, spec, path, reference_modes);
  std::vector<double> errors;
  for (int n : modes) {
    const SpectralState coarse = final_state<SpectralState>(setup, spec, path, n);
    double err = 0.0;
    for (int k = 0; k < reference_modes; ++k)
      err += std::norm(ref.coeffs[k] - (k < n ? coarse.coeffs[k] : Complex{}));
    errors.push_back(std::sqrt(err));
  }
  return errors;
}

std::vector<double> grid_space_errors(const ExperimentSetup& setup, const CovarianceSpec& spec,
                                      std::span<const int> nodes, int reference_nodes,
                                      std::uint64_t trajectory) {
  const NoisePath path = sample_path(spec, setup.scheme.horizon, setup.scheme.num_steps,
                                     setup.seed, trajectory);
  const GridState ref = final_state<GridState>(setup, spec, path, reference_nodes);
  std::vector<double> errors;
  for (int n : nodes) {
    const GridState coarse = final_state<GridState>(setup, spec, path, n);
    const int ratio = (reference_nodes + 1) / (n + 1);
    double err = 0.0;
    for (int i = 1; i <= n; ++i) err += std::norm(ref.values[i * ratio - 1] - coarse.values[i - 1]);
    errors.push_back(std::sqrt(coarse.spacing * err));
  }
  return errors;
}

void check_strictly_monotone(std::span<const int> values, const char* what) {
  for (std::size_t i = 1; i < values.size(); ++i)
    if ((values[i] - values[i - 1]) * (values[1] - values[0]) <= 0)
      throw InvalidArgument(std::string(what) + " must be strictly monotone");
}

}  // namespace

std::string_view to_string(AxisKind axis) {
  return axis == AxisKind::time_step ? "time_step" : "mode_count";
}

double fit_order(std::span<const double> resolutions, std::span<const double> errors) {
  if (resolutions.size() != errors.size())
    throw InvalidArgument("fit_order: resolutions and errors differ in length");
  if (resolutions.size() < 2) throw InvalidArgument("fit_order: need at least two points");
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < resolutions.size(); ++i) {
    if (!(resolutions[i] > 0.0) || !(errors[i] > 0.0))
      throw InvalidArgument("fit_order: resolutions and errors must be positive");
    lx.push_back(std::log(resolutions[i]));
    ly.push_back(std::log(errors[i]));
  }
  return least_squares_slope(lx, ly);
}

ErrorTable strong_error_time(const ExperimentSetup& setup, std::span<const int> step_counts,
                             int reference_steps) {
  check_setup(setup);
  if (step_counts.empty()) throw InvalidArgument("strong_error_time: no resolutions");
  if (reference_steps < 1) throw InvalidArgument("strong_error_time: reference_steps must be >= 1");
  int stride = reference_steps;
  for (int steps : step_counts) {
    if (steps < 1 || reference_steps % steps != 0)
      throw InvalidArgument("strong_error_time: resolution " + std::to_string(steps) +
                            " does not divide reference_steps " + std::to_string(reference_steps));
    stride = std::gcd(stride, reference_steps / steps);
  }
  check_strictly_monotone(step_counts, "strong_error_time: resolutions");
  {
    SchemeConfig probe = setup.scheme;
    probe.num_steps = reference_steps;
    probe.validate();
    for (int steps : step_counts) {
      probe.num_steps = steps;
      probe.validate();
    }
  }

  const int noise_modes = setup.noise_modes > 0 ? setup.noise_modes : setup.resolution;
  const CovarianceSpec spec = build_covariance(noise_modes, setup.intensity);

  std::vector<std::optional<std::vector<double>>> results(setup.trajectories);
  parallel_for(results.size(), setup.workers, [&](std::size_t t) {
    try {
      results[t] = setup.scheme.kind == SchemeKind::spectral
                       ? time_errors<SpectralState>(setup, spec, step_counts, reference_steps,
                                                    stride, t)
                       : time_errors<GridState>(setup, spec, step_counts, reference_steps,
                                                stride, t);
    } catch (const SolverDivergence&) {
      results[t] = std::nullopt;
    }
  });

  ErrorTable table;
  table.axis = AxisKind::time_step;
  for (int steps : step_counts) table.resolutions.push_back(setup.scheme.horizon / steps);
  table.moment_order = setup.moment_order;
  table.seed = setup.seed;
  table.scheme = setup.scheme.kind;
  table.focusing_sign = setup.scheme.focusing_sign;
  table.intensity = setup.intensity;
  reduce_errors(results, table);
  finish_table(table, table.resolutions);

  common_provenance(setup, noise_modes, table);
  table.provenance.emplace_back("experiment", "strong_error_time");
  table.provenance.emplace_back("resolution", std::to_string(setup.resolution));
  table.provenance.emplace_back("reference_steps", std::to_string(reference_steps));
  std::string counts;
  for (int c : step_counts) counts += (counts.empty() ? "" : " ") + std::to_string(c);
  table.provenance.emplace_back("step_counts", counts);
  table.provenance.emplace_back("failed_trajectories", std::to_string(table.failed_trajectories));
  table.provenance.emplace_back("fitted_slope", fmt_double(table.fitted_slope));
  return table;
}

ErrorTable strong_error_space(const ExperimentSetup& setup, std::span<const int> resolutions,
                              int reference_resolution) {
  check_setup(setup);
  setup.scheme.validate();
  if (resolutions.empty()) throw InvalidArgument("strong_error_space: no resolutions");
  if (setup.scheme.num_steps < 1) throw InvalidArgument("strong_error_space: num_steps must be >= 1");
  const bool spectral = setup.scheme.kind == SchemeKind::spectral;
  for (int n : resolutions) {
    if (n < 1 || n > reference_resolution)
      throw InvalidArgument("strong_error_space: resolution " + std::to_string(n) +
                            " outside [1, reference]");
    if (!spectral && (reference_resolution + 1) % (n + 1) != 0)
      throw InvalidArgument("strong_error_space: grid with " + std::to_string(n) +
                            " nodes does not nest in the reference grid");
  }
  check_strictly_monotone(resolutions, "strong_error_space: resolutions");

  const int noise_modes = setup.noise_modes > 0 ? setup.noise_modes : reference_resolution;
  const CovarianceSpec spec = build_covariance(noise_modes, setup.intensity);

  std::vector<std::optional<std::vector<double>>> results(setup.trajectories);
  parallel_for(results.size(), setup.workers, [&](std::size_t t) {
    try {
      results[t] = spectral
                       ? spectral_space_errors(setup, spec, resolutions, reference_resolution, t)
                       : grid_space_errors(setup, spec, resolutions, reference_resolution, t);
    } catch (const SolverDivergence&) {
      results[t] = std::nullopt;
    }
  });

  ErrorTable table;
  table.axis = AxisKind::mode_count;
  for (int n : resolutions) table.resolutions.push_back(n);
  table.moment_order = setup.moment_order;
  table.seed = setup.seed;
  table.scheme = setup.scheme.kind;
  table.focusing_sign = setup.scheme.focusing_sign;
  table.intensity = setup.intensity;
  reduce_errors(results, table);
  std::vector<double> widths;
  for (int n : resolutions) widths.push_back(spectral ? 1.0 / n : 1.0 / (n + 1));
  finish_table(table, widths);

  common_provenance(setup, noise_modes, table);
  table.provenance.emplace_back("experiment", "strong_error_space");
  table.provenance.emplace_back("num_steps", std::to_string(setup.scheme.num_steps));
  table.provenance.emplace_back("reference_resolution", std::to_string(reference_resolution));
  table.provenance.emplace_back("failed_trajectories", std::to_string(table.failed_trajectories));
  table.provenance.emplace_back("fitted_slope", fmt_double(table.fitted_slope));
  return table;
}

void write_error_table(const ErrorTable& table, std::ostream& out) {
  if (table.resolutions.empty()) throw InvalidArgument("emit_csv: empty error table");
  if (table.errors.size() != table.resolutions.size() ||
      table.std_errors.size() != table.resolutions.size())
    throw InvalidArgument("emit_csv: column lengths differ");
  for (const auto& [key, value] : table.provenance) out << "# " << key << ": " << value << '\n';
  out << kErrorTableHeader << '\n';
  const std::string axis(to_string(table.axis));
  const std::string scheme(to_string(table.scheme));
  for (std::size_t i = 0; i < table.resolutions.size(); ++i) {
    out << axis << ',' << fmt_double(table.resolutions[i]) << ',' << fmt_double(table.errors[i])
        << ',' << fmt_double(table.std_errors[i]) << ',' << fmt_double(table.moment_order) << ','
        << table.trajectories << ',' << scheme << ',' << table.focusing_sign << ','
        << fmt_double(table.intensity) << ',' << table.seed << '\n';
  }
}

void emit_csv(const ErrorTable& table, const std::filesystem::path& destination) {
  std::ostringstream buffer;
  write_error_table(table, buffer);
  std::ofstream out(destination, std::ios::binary);
  if (!out) throw IoError("cannot open '" + destination.string() + "' for writing");
  out << buffer.str();
  out.flush();
  if (!out) throw IoError("write failed for '" + destination.string() + "'");
}

ErrorTable read_error_table(std::istream& in) {
  ErrorTable table;
  std::string line;
  bool header_seen = false;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(": ");
      if (colon != std::string::npos && colon > 2)
        table.provenance.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      continue;
    }
    if (!header_seen) {
      if (line != kErrorTableHeader)
        throw InvalidArgument("read_error_table: unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    ++row;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 10)
      throw InvalidArgument("read_error_table: row " + std::to_string(row) + " has " +
                            std::to_string(f.size()) + " fields");
    try {
      if (f[0] == "time_step")
        table.axis = AxisKind::time_step;
      else if (f[0] == "mode_count")
        table.axis = AxisKind::mode_count;
      else
        throw InvalidArgument("unknown axis '" + f[0] + "'");
      table.resolutions.push_back(std::stod(f[1]));
      table.errors.push_back(std::stod(f[2]));
      table.std_errors.push_back(std::stod(f[3]));
      table.moment_order = std::stod(f[4]);
      table.trajectories = std::stoi(f[5]);
      table.scheme = parse_scheme_kind(f[6]);
      table.focusing_sign = std::stoi(f[7]);
      table.intensity = std::stod(f[8]);
      table.seed = std::stoull(f[9]);
    } catch (const std::exception& e) {
      throw InvalidArgument("read_error_table: row " + std::to_string(row) + ": " + e.what());
    }
  }
  if (!header_seen) throw InvalidArgument("read_error_table: missing header");
  table.fitted_slope = std::numeric_limits<double>::quiet_NaN();
  for (const auto& [key, value] : table.provenance) {
    if (key == "fitted_slope") table.fitted_slope = std::stod(value);
    if (key == "failed_trajectories") table.failed_trajectories = std::stoi(value);
  }
  return table;
}

ErrorTable read_error_table(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw IoError("cannot open '" + source.string() + "' for reading");
  return read_error_table(in);
}

EnsembleSeries run_ensemble(const ExperimentSetup& setup, int snapshot_stride) {
  check_setup(setup);
  setup.scheme.validate();
  if (snapshot_stride < 1) throw InvalidArgument("run_ensemble: snapshot_stride must be >= 1");
  const int noise_modes = setup.noise_modes > 0 ? setup.noise_modes : setup.resolution;
  const CovarianceSpec spec = build_covariance(noise_modes, setup.intensity);
  const int steps = setup.scheme.num_steps;
  const double lambda = setup.scheme.lambda();

  struct Series {
    bool ok = true;
    std::vector<double> times, charge, energy, lyapunov, h1;
  };
  std::vector<Series> runs(setup.trajectories);

  auto run_one = [&](auto tag, std::size_t t) {
    using State = decltype(tag);
    Series& out = runs[t];
    const NoisePath path = steps > 0 ? sample_path(spec, setup.scheme.horizon, steps, setup.seed, t)
                                     : NoisePath(setup.scheme.horizon, 0, noise_modes, {});
    const double dt = steps > 0 ? setup.scheme.dt() : 0.0;
    try {
      integrate(initial_state<State>(setup.resolution), setup.scheme, path, spec,
                [&](int m, const State& s) {
                  if (m % snapshot_stride != 0 && m != steps) return;
                  const Observables o = observe(s, lambda);
                  out.times.push_back(m * dt);
                  out.charge.push_back(o.charge);
                  out.energy.push_back(o.energy);
                  out.lyapunov.push_back(o.lyapunov);
                  out.h1.push_back(o.h1_norm);
                });
    } catch (const SolverDivergence&) {
      out.ok = false;
    }
  };

  parallel_for(runs.size(), setup.workers, [&](std::size_t t) {
    if (setup.scheme.kind == SchemeKind::spectral)
      run_one(SpectralState{}, t);
    else
      run_one(GridState{}, t);
  });

  EnsembleSeries series;
  for (std::size_t t = 0; t < runs.size(); ++t) {
    if (!runs[t].ok) {
      series.failed.push_back(static_cast<int>(t));
      continue;
    }
    if (series.times.empty()) series.times = runs[t].times;
    series.charge.push_back(std::move(runs[t].charge));
    series.energy.push_back(std::move(runs[t].energy));
    series.lyapunov.push_back(std::move(runs[t].lyapunov));
    series.h1.push_back(std::move(runs[t].h1));
  }
  return series;
}

}  // namespace snls
