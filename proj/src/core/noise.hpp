#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace snls {

/// Truncated Q^{1/2} in the Dirichlet sine basis: W(t,x) = eps * sum_k q_k sqrt(2) sin(k pi x) beta_k(t).
struct CovarianceSpec {
  int num_modes = 0;
  std::vector<double> weights;  // q_1..q_K
  double intensity = 1.0;       // eps, applied at evaluation time only
};

/// q_k = 1/(1 + k^2.6), k = 1..num_modes.
CovarianceSpec build_covariance(int num_modes, double intensity);

/// Keeps the first `num_modes` weights (P^N applied to the noise).
CovarianceSpec truncate_covariance(const CovarianceSpec& spec, int num_modes);

/// Sum over k of q_k^2 (k pi)^4, the discrete stand-in for the Hilbert-Schmidt norm into H^2.
double h2_trace(const CovarianceSpec& spec);

/// Brownian increments, one row per time step and one column per mode.
///
/// Stored values sit on a 2^-40 lattice so that every partial sum used by
/// coarsening is exact in double precision; this makes coarsening associative
/// at the bit level and preserves column totals exactly.
class NoisePath {
 public:
  NoisePath() = default;
  NoisePath(double dt, int num_steps, int num_modes, std::vector<double> increments);

  double dt() const noexcept { return dt_; }
  int num_steps() const noexcept { return num_steps_; }
  int num_modes() const noexcept { return num_modes_; }
  double horizon() const noexcept { return dt_ * num_steps_; }

  double increment(int step, int mode) const { return increments_[index(step, mode)]; }
  std::span<const double> row(int step) const {
    return {increments_.data() + static_cast<std::size_t>(step) * num_modes_,
            static_cast<std::size_t>(num_modes_)};
  }
  const std::vector<double>& increments() const noexcept { return increments_; }

 private:
  std::size_t index(int step, int mode) const {
    return static_cast<std::size_t>(step) * num_modes_ + mode;
  }

  double dt_ = 0.0;
  int num_steps_ = 0;
  int num_modes_ = 0;
  std::vector<double> increments_;
};

/// Standard normal draw that depends only on its key.
double counter_gaussian(std::uint64_t seed, std::uint64_t trajectory, std::uint64_t step,
                        std::uint64_t mode);

/// Rounds onto the 2^-40 lattice used for stored increments.
double quantize_increment(double value);

/// Samples num_steps x spec.num_modes independent N(0, horizon/num_steps) increments.
/// The draw for (step, mode) is keyed on (seed, trajectory, step, mode).
NoisePath sample_path(const CovarianceSpec& spec, double horizon, int num_steps,
                      std::uint64_t seed, std::uint64_t trajectory = 0);

/// Sums consecutive blocks of `factor` rows.
NoisePath coarsen_path(const NoisePath& path, int factor);

/// Delta W_m(x) = eps * sum_k q_k sqrt(2) sin(k pi x) dbeta_{k,m}, evaluated directly.
std::vector<double> increment_on_points(const CovarianceSpec& spec, const NoisePath& path,
                                        int step_index, std::span<const double> points);

}  // namespace snls
