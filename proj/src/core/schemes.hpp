#pragma once

#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "diagnostics.hpp"
#include "errors.hpp"
#include "fdgrid.hpp"
#include "noise.hpp"
#include "spectral.hpp"
#include "trajectory.hpp"

namespace snls {

enum class SchemeKind { spectral, finite_difference };

std::string_view to_string(SchemeKind kind);
SchemeKind parse_scheme_kind(std::string_view text);

struct SchemeConfig {
  double horizon = 1.0;
  int num_steps = 256;
  int focusing_sign = 1;  // +1 focusing, -1 defocusing
  double solver_tolerance = 1e-12;
  int solver_max_iterations = 100;
  SchemeKind kind = SchemeKind::spectral;
  bool linear_only = false;  // drop the cubic term (linear Schroedinger flow)

  double dt() const { return horizon / num_steps; }
  double lambda() const { return linear_only ? 0.0 : static_cast<double>(focusing_sign); }

  /// Throws InvalidArgument on T <= 0, dt >= 1, |lambda| != 1, tolerance <= 0.
  void validate() const;
};

struct SolveInfo {
  int iterations = 0;
  bool used_fallback = false;
  double last_change = 0.0;
};

// Crank-Nicolson deterministic sub-step
//   z - u = i dt Lap (u+z)/2 + i lambda dt (|u|^2 + |z|^2)/2 (u+z)/2
// solved by damped fixed-point iteration with the linear part inverted exactly.
// If the iteration stalls, a lagged-potential solve takes over: the modulus
// weight is frozen at the previous iterate and the resulting linear
// Crank-Nicolson system is solved directly.
SpectralState cn_deterministic_step(const SpectralState& state, double dt,
                                    const SchemeConfig& config, SolveInfo* info = nullptr);
GridState cn_deterministic_step(const GridState& state, double dt, const SchemeConfig& config,
                                SolveInfo* info = nullptr);

namespace detail {
// The fallback solver on its own, started from `state`.
SpectralState lagged_potential_step(const SpectralState& state, double dt,
                                    const SchemeConfig& config, SolveInfo* info = nullptr);
GridState lagged_potential_step(const GridState& state, double dt, const SchemeConfig& config,
                                SolveInfo* info = nullptr);
}  // namespace detail

// Physical points on which the multiplicative noise acts: the 2N+1 padded grid
// for the spectral scheme, the interior nodes for finite differences.
std::vector<double> evaluation_points(const SpectralState& state);
std::vector<double> evaluation_points(const GridState& state);

// Delta W_m on evaluation_points(state). The spectral scheme sees P^N Delta W,
// i.e. only noise modes k <= N.
std::vector<double> noise_values(const SpectralState& state, const CovarianceSpec& spec,
                                 const NoisePath& path, int step_index);
std::vector<double> noise_values(const GridState& state, const CovarianceSpec& spec,
                                 const NoisePath& path, int step_index);

// u -> exp(-i Delta W) u pointwise. Spectral: on the padded grid, then projected to N modes.
SpectralState noise_step(const SpectralState& state, std::span<const double> increment_values);
GridState noise_step(const GridState& state, std::span<const double> increment_values);

// One splitting step: deterministic sub-step, then the noise flow for step `step_index`.
SpectralState step(const SpectralState& state, const SchemeConfig& config, const NoisePath& path,
                   const CovarianceSpec& spec, int step_index);
GridState step(const GridState& state, const SchemeConfig& config, const NoisePath& path,
               const CovarianceSpec& spec, int step_index);

// Runs all config.num_steps steps, calling visit(m, state) for m = 0..M.
template <class State, class Visitor>
State integrate(State state, const SchemeConfig& config, const NoisePath& path,
                const CovarianceSpec& spec, Visitor&& visit) {
  config.validate();
  if (path.num_steps() != config.num_steps)
    throw InvalidArgument("integrate: path has " + std::to_string(path.num_steps()) +
                          " steps, config has " + std::to_string(config.num_steps));
  if (config.num_steps > 0 && std::abs(path.dt() - config.dt()) > 1e-12 * config.dt())
    throw InvalidArgument("integrate: path time step does not match config");
  visit(0, state);
  for (int m = 0; m < config.num_steps; ++m) {
    try {
      state = step(state, config, path, spec, m);
    } catch (const SolverDivergence& e) {
      throw e.at_step(m);
    }
    visit(m + 1, state);
  }
  return state;
}

template <class State>
TrajectoryRecord<State> run_trajectory(const State& initial, const SchemeConfig& config,
                                       const NoisePath& path, const CovarianceSpec& spec,
                                       int snapshot_stride) {
  if (snapshot_stride < 1) throw InvalidArgument("run_trajectory: snapshot_stride must be >= 1");
  TrajectoryRecord<State> record;
  const double lambda = config.lambda();
  const double dt = config.num_steps > 0 ? config.dt() : 0.0;
  integrate(initial, config, path, spec, [&](int m, const State& s) {
    if (m % snapshot_stride != 0 && m != config.num_steps) return;
    const Observables obs = observe(s, lambda);
    record.snapshot_steps.push_back(m);
    record.snapshot_times.push_back(m * dt);
    record.states.push_back(s);
    record.charge_series.push_back(obs.charge);
    record.energy_series.push_back(obs.energy);
    record.lyapunov_series.push_back(obs.lyapunov);
    record.h1_series.push_back(obs.h1_norm);
  });
  return record;
}

// Initial datum sin(pi x): c_1 = 1/sqrt(2) spectrally, nodal samples on the grid.
SpectralState sine_initial_spectral(int num_modes);
GridState sine_initial_grid(int num_nodes);

}  // namespace snls
