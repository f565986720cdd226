#include "dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "diagnostics.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "format.hpp"

namespace snls {
namespace {

namespace fs = std::filesystem;
using Provenance = std::vector<std::pair<std::string, std::string>>;

Provenance header(std::string_view subcommand, const RunConfig& config) {
  Provenance p{{"subcommand", std::string(subcommand)}};
  // the output location is not a property of the run
  for (auto& kv : config.describe())
    if (kv.first != "output_dir") p.push_back(std::move(kv));
  return p;
}

void write_text(const fs::path& destination, const std::string& text) {
  std::error_code ec;
  if (destination.has_parent_path()) fs::create_directories(destination.parent_path(), ec);
  std::ofstream file(destination, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + destination.string() + "' for writing");
  file << text;
  file.close();
  if (!file) throw IoError("write failed for '" + destination.string() + "'");
}

std::string with_header(const Provenance& provenance, const std::string& columns,
                        const std::string& body) {
  std::ostringstream out;
  for (const auto& [key, value] : provenance) out << "# " << key << ": " << value << '\n';
  out << columns << '\n' << body;
  return out.str();
}

void check_failures(const EnsembleSeries& series, int trajectories) {
  const int failed = static_cast<int>(series.failed.size());
  if (100 * failed > trajectories)
    throw ExperimentAborted(std::to_string(failed) + " of " + std::to_string(trajectories) +
                            " trajectories failed in the nonlinear solver (budget 1%)");
}

ExperimentSetup with_workers(const RunConfig& config, int workers) {
  ExperimentSetup setup = config.setup;
  setup.workers = std::max(1, workers);
  return setup;
}

std::vector<fs::path> run_simulate(const RunConfig& config, int workers) {
  const EnsembleSeries series = run_ensemble(with_workers(config, workers), config.snapshot_stride);
  check_failures(series, config.setup.trajectories);
  Provenance p = header("simulate", config);
  p.emplace_back("failed_trajectories", std::to_string(series.failed.size()));
  const fs::path dir = config.output_dir;

  std::ostringstream body;
  for (std::size_t s = 0; s < series.times.size(); ++s)
    body << fmt_double(series.times[s]) << ',' << fmt_double(series.charge[0][s]) << ','
         << fmt_double(series.energy[0][s]) << ',' << fmt_double(series.lyapunov[0][s]) << ','
         << fmt_double(series.h1[0][s]) << '\n';
  write_text(dir / "trajectory.csv",
             with_header(p, "time,charge,energy,lyapunov,h1_norm", body.str()));

  std::ostringstream errors;
  for (std::size_t s = 0; s < series.times.size(); ++s) {
    double mean = 0.0;
    for (const auto& q : series.charge) mean += std::abs(q[s] - q[0]) / q[0];
    mean /= static_cast<double>(series.charge.size());
    const auto& first = series.charge[0];
    errors << fmt_double(series.times[s]) << ',' << fmt_double(std::abs(first[s] - first[0]) / first[0])
           << ',' << fmt_double(mean) << '\n';
  }
  write_text(dir / "charge_error.csv",
             with_header(p, "time,charge_error,ensemble_charge_error", errors.str()));
  return {dir / "trajectory.csv", dir / "charge_error.csv"};
}

std::vector<fs::path> run_converge(std::string_view subcommand, const RunConfig& config,
                                   int workers) {
  const ExperimentSetup setup = with_workers(config, workers);
  ErrorTable table;
  fs::path destination;
  if (subcommand == "converge-time") {
    if (config.resolutions.empty()) throw ConfigError("resolutions", "required for converge-time");
    table = strong_error_time(setup, config.resolutions, config.reference_steps);
    destination = fs::path(config.output_dir) / "converge_time.csv";
  } else {
    if (config.mode_counts.empty()) throw ConfigError("mode_counts", "required for converge-space");
    table = strong_error_space(setup, config.mode_counts, config.reference_modes);
    destination = fs::path(config.output_dir) / "converge_space.csv";
  }
  Provenance p = header(subcommand, config);
  for (const auto& [key, value] : table.provenance) {
    auto it = std::find_if(p.begin(), p.end(), [&](const auto& kv) { return kv.first == key; });
    if (it != p.end())
      it->second = value;
    else
      p.emplace_back(key, value);
  }
  table.provenance = std::move(p);
  std::error_code ec;
  fs::create_directories(destination.parent_path(), ec);
  emit_csv(table, destination);
  return {destination};
}

std::vector<fs::path> run_moments(const RunConfig& config, int workers) {
  const EnsembleSeries series = run_ensemble(with_workers(config, workers), config.snapshot_stride);
  check_failures(series, config.setup.trajectories);
  const auto nonfinite = std::count_if(series.energy.begin(), series.energy.end(), [](const auto& e) {
    return std::any_of(e.begin(), e.end(), [](double v) { return !std::isfinite(v); });
  });
  Provenance p = header("moments", config);
  p.emplace_back("failed_trajectories", std::to_string(series.failed.size()));
  p.emplace_back("nonfinite_energy_trajectories", std::to_string(nonfinite));

  std::ostringstream body;
  for (double alpha : config.alphas) {
    const auto moments = exp_moment_series(series.energy, series.times, alpha);
    const auto logs = log_exp_moment_series(series.energy, series.times, alpha);
    for (std::size_t s = 0; s < series.times.size(); ++s)
      body << fmt_double(alpha) << ',' << fmt_double(series.times[s]) << ','
           << fmt_double(moments[s]) << ',' << fmt_double(logs[s]) << '\n';
  }
  const fs::path destination = fs::path(config.output_dir) / "moments.csv";
  write_text(destination, with_header(p, "alpha,time,exp_moment,log_exp_moment", body.str()));
  return {destination};
}

std::vector<fs::path> run_tails(const RunConfig& config, int workers) {
  const int stride = std::max(1, config.setup.scheme.num_steps);
  const EnsembleSeries series = run_ensemble(with_workers(config, workers), stride);
  check_failures(series, config.setup.trajectories);
  std::vector<double> samples;
  samples.reserve(series.h1.size());
  for (const auto& h : series.h1) samples.push_back(h.back());
  const TailFit fit = tail_decay_fit(samples, config.thresholds);

  Provenance p = header("tails", config);
  p.emplace_back("failed_trajectories", std::to_string(series.failed.size()));
  p.emplace_back("samples", std::to_string(samples.size()));
  p.emplace_back("tail_slope", fmt_double(fit.slope));
  p.emplace_back("fitted_points", std::to_string(fit.fitted_points));
  std::ostringstream body;
  for (std::size_t i = 0; i < fit.thresholds.size(); ++i)
    body << fmt_double(fit.thresholds[i]) << ',' << fmt_double(fit.exceedance[i]) << '\n';
  const fs::path destination = fs::path(config.output_dir) / "tails.csv";
  write_text(destination, with_header(p, "threshold,exceedance", body.str()));
  return {destination};
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"simulate", "converge-time", "converge-space",
                                                 "moments", "tails"};
  return names;
}

bool is_subcommand(std::string_view name) {
  const auto& names = subcommands();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::string usage_text() {
  std::string text =
      "usage: snls <subcommand> [--config FILE] [--preset NAME] [--set key=value]...\n"
      "            [--seed N] [--output DIR] [--workers N] [--paper-scale]\n"
      "subcommands:\n"
      "  simulate        one ensemble run; writes trajectory.csv and charge_error.csv\n"
      "  converge-time   temporal strong errors; writes converge_time.csv\n"
      "  converge-space  spatial strong errors; writes converge_space.csv\n"
      "  moments         exponential moments of the energy; writes moments.csv\n"
      "  tails           H1-norm tail exceedance at the final time; writes tails.csv\n"
      "presets:";
  for (const auto& name : preset_names()) text += " " + name;
  text += "\n";
  return text;
}

int dispatch(std::string_view subcommand, const RunConfig& config, int workers, std::ostream& log,
             std::ostream& err) {
  if (!is_subcommand(subcommand)) {
    err << "error: unknown subcommand '" << subcommand << "'\n" << usage_text();
    return exit_usage;
  }
  try {
    std::vector<fs::path> written;
    if (subcommand == "simulate")
      written = run_simulate(config, workers);
    else if (subcommand == "converge-time" || subcommand == "converge-space")
      written = run_converge(subcommand, config, workers);
    else if (subcommand == "moments")
      written = run_moments(config, workers);
    else
      written = run_tails(config, workers);
    for (const auto& path : written) log << path.string() << '\n';
    return exit_ok;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const SolverDivergence& e) {
    err << "error: " << e.what() << '\n';
    return exit_numerical;
  } catch (const ExperimentAborted& e) {
    err << "error: " << e.what() << '\n';
    return exit_numerical;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return exit_io;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

}  // namespace snls
