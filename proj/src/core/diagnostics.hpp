#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "errors.hpp"
#include "fdgrid.hpp"
#include "noise.hpp"
#include "spectral.hpp"
#include "trajectory.hpp"

namespace snls {

struct Observables {
  double charge = 0.0;
  double energy = 0.0;
  double lyapunov = 0.0;
  double h1_norm = 0.0;
};

// Charge ||u||^2.
double charge(const SpectralState& state);
double charge(const GridState& state);

// H(u) = 1/2 ||grad u||^2 - lambda/4 ||u||_{L4}^4. The spectral quartic term is
// integrated exactly on the padded grid.
double energy(const SpectralState& state, double lambda);
double energy(const GridState& state, double lambda);

// f(u) = ||Lap u||^2 + lambda <Lap u, |u|^2 u>.
double lyapunov(const SpectralState& state, double lambda);
double lyapunov(const GridState& state, double lambda);

// sqrt(||u||^2 + ||grad u||^2).
double h1_norm(const SpectralState& state);
double h1_norm(const GridState& state);

template <class State>
Observables observe(const State& state, double lambda) {
  return {charge(state), energy(state, lambda), lyapunov(state, lambda), h1_norm(state)};
}

/// Monte Carlo estimate of E[exp(H(u_m) / e^{alpha t_m})] per snapshot time,
/// from per-record energy series sampled at the shared `times`.
///
/// The mean is formed in log space about the largest exponent, and the terms at
/// each time are summed in sorted order so that the result does not depend on
/// the order of the records.
std::vector<double> exp_moment_series(std::span<const std::vector<double>> energy_series,
                                      std::span<const double> times, double alpha);

/// Same, reported as log E[...] so that large energies do not overflow.
std::vector<double> log_exp_moment_series(std::span<const std::vector<double>> energy_series,
                                          std::span<const double> times, double alpha);

template <class State>
std::vector<double> exp_moment_series(std::span<const TrajectoryRecord<State>> records,
                                      double alpha) {
  if (records.empty()) throw InvalidArgument("exp_moment_series: no records");
  std::vector<std::vector<double>> energies;
  energies.reserve(records.size());
  for (const auto& r : records) {
    if (r.snapshot_times != records.front().snapshot_times)
      throw InvalidArgument("exp_moment_series: records do not share snapshot times");
    energies.push_back(r.energy_series);
  }
  return exp_moment_series(energies, records.front().snapshot_times, alpha);
}

/// Empirical P(sample >= x) for each threshold x.
std::vector<double> tail_exceedance(std::span<const double> samples,
                                    std::span<const double> thresholds);

struct TailFit {
  std::vector<double> thresholds;
  std::vector<double> exceedance;
  double slope = 0.0;    // d log P / d x^2 over the fitted window
  int fitted_points = 0;
};

/// Tail regression of log P(sample >= x) against x^2. Thresholds are
/// `num_thresholds` evenly spaced values over [min, max] of the samples; the
/// fit uses the upper quartile of those thresholds that still have P > 0.
TailFit tail_decay_fit(std::span<const double> samples, int num_thresholds = 64);

/// sum_k ||(I - P^N)(u * eps q_k sqrt(2) sin(k pi x))||^2: the instantaneous
/// charge loss rate of the Galerkin truncation of the Ito-form equation.
///
/// Every product has exact sine coefficients on a grid of N+K interior
/// points; the tail is summed as squares of the coefficients above N, so the
/// result is nonnegative in floating point as well.
double ito_charge_drift(const SpectralState& state, const CovarianceSpec& spec);

}  // namespace snls
