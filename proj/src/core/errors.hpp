#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace snls {

/// Bad argument to a library operation (shape mismatch, violated precondition).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A run configuration failed validation. `key()` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error("config key '" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// The implicit Crank-Nicolson solve did not reach its tolerance.
class SolverDivergence : public std::runtime_error {
 public:
  SolverDivergence(double residual, int iterations, long step_index = -1)
      : std::runtime_error(make_message(residual, iterations, step_index)),
        residual_(residual),
        iterations_(iterations),
        step_index_(step_index) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }
  /// Index of the failing time step, or -1 when raised outside a trajectory.
  long step_index() const noexcept { return step_index_; }

  SolverDivergence at_step(long step) const { return SolverDivergence(residual_, iterations_, step); }

 private:
  static std::string make_message(double residual, int iterations, long step) {
    std::string msg = "nonlinear solver did not converge after " + std::to_string(iterations) +
                      " iterations (relative change " + std::to_string(residual) + ")";
    if (step >= 0) msg += " at step " + std::to_string(step);
    return msg;
  }

  double residual_;
  int iterations_;
  long step_index_;
};

/// A Monte Carlo experiment lost more trajectories than its failure budget allows.
class ExperimentAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File-system failure, message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace snls
