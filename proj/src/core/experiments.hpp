#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "schemes.hpp"

namespace snls {

/// Everything a Monte Carlo experiment needs besides its resolution lists.
struct ExperimentSetup {
  SchemeConfig scheme;
  int resolution = 64;      // spectral modes N, or interior FD nodes
  int noise_modes = 0;      // K; 0 selects the default (K = N, or K = N_ref in space)
  double intensity = 1.0;   // eps
  int trajectories = 1;     // P
  double moment_order = 2;  // p
  std::uint64_t seed = 0;
  int workers = 1;          // affects wall time only
};

enum class AxisKind { time_step, mode_count };

std::string_view to_string(AxisKind axis);

/// Monte Carlo strong errors E[e^p]^{1/p} per resolution.
struct ErrorTable {
  AxisKind axis = AxisKind::time_step;
  std::vector<double> resolutions;  // tau values, or N values
  std::vector<double> errors;
  std::vector<double> std_errors;   // delta-method standard error of each estimate
  double moment_order = 2.0;
  int trajectories = 0;             // trajectories that entered the estimate
  int failed_trajectories = 0;
  double fitted_slope = 0.0;        // NaN when no fit is possible
  std::uint64_t seed = 0;
  SchemeKind scheme = SchemeKind::spectral;
  int focusing_sign = 1;
  double intensity = 1.0;
  std::vector<std::pair<std::string, std::string>> provenance;
};

/// Temporal strong error of the coarse runs against a reference run on the same
/// Brownian path. `step_counts` must each divide `reference_steps`; the error of
/// one trajectory is the sup over the coarse time points of the L2 distance.
ErrorTable strong_error_time(const ExperimentSetup& setup, std::span<const int> step_counts,
                             int reference_steps);

/// Spatial strong error at the final time. All runs share setup.scheme's time grid
/// and one K-mode noise path. Spectral states are compared in the reference
/// coefficient space (coarse projection error plus the reference tail); finite
/// differences at the shared nodes, which needs (N_ref+1) divisible by (N+1).
/// The slope is fitted against the mesh width 1/N (spectral) or 1/(N+1) (FD).
ErrorTable strong_error_space(const ExperimentSetup& setup, std::span<const int> resolutions,
                              int reference_resolution);

/// Least-squares slope of log(error) against log(resolution).
double fit_order(std::span<const double> resolutions, std::span<const double> errors);

inline constexpr const char* kErrorTableHeader =
    "axis,resolution,error,std_error,p,trajectories,scheme,lambda,epsilon,seed";

void write_error_table(const ErrorTable& table, std::ostream& out);
void emit_csv(const ErrorTable& table, const std::filesystem::path& destination);
ErrorTable read_error_table(std::istream& in);
ErrorTable read_error_table(const std::filesystem::path& source);

// ---------------------------------------------------------------------------
// Ensemble runs used by the simulate / moments / tails commands.

/// Per-trajectory diagnostic series at a common set of snapshot times.
struct EnsembleSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> charge;  // [trajectory][snapshot]
  std::vector<std::vector<double>> energy;
  std::vector<std::vector<double>> lyapunov;
  std::vector<std::vector<double>> h1;
  std::vector<int> failed;  // indices of trajectories that hit a solver failure
};

/// Runs setup.trajectories independent trajectories from sin(pi x), keeping
/// diagnostics every `snapshot_stride` steps. Failed trajectories are listed
/// and left out of the series.
EnsembleSeries run_ensemble(const ExperimentSetup& setup, int snapshot_stride);

}  // namespace snls
