#pragma once

#include <vector>

namespace snls {

/// Snapshots of one run together with the diagnostics taken at each snapshot.
template <class State>
struct TrajectoryRecord {
  std::vector<double> snapshot_times;
  std::vector<int> snapshot_steps;
  std::vector<State> states;
  std::vector<double> charge_series;
  std::vector<double> energy_series;
  std::vector<double> lyapunov_series;
  std::vector<double> h1_series;

  std::size_t size() const noexcept { return snapshot_times.size(); }
};

}  // namespace snls
