#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace snls {

using Complex = std::complex<double>;

/// u(x) = sum_{k=1..N} c_k sqrt(2) sin(k pi x), coefficients in the orthonormal Dirichlet sine basis.
struct SpectralState {
  std::vector<Complex> coeffs;

  SpectralState() = default;
  explicit SpectralState(int num_modes) : coeffs(static_cast<std::size_t>(num_modes)) {}
  explicit SpectralState(std::vector<Complex> c) : coeffs(std::move(c)) {}

  int num_modes() const noexcept { return static_cast<int>(coeffs.size()); }
};

/// Dirichlet Laplacian eigenvalue (k pi)^2.
double eigenvalue(int k);

/// Sine table for `num_modes` modes sampled at x_j = j/(num_points+1), j = 1..num_points.
///
/// Grid evaluation and the discrete projection back onto the modes are direct
/// O(modes * points) sums in a fixed order. The projection is the trapezoid
/// rule, which integrates cos(m pi x) exactly for 0 < m < 2(num_points+1).
class SineBasis {
 public:
  SineBasis(int num_modes, int num_points);

  int num_modes() const noexcept { return modes_; }
  int num_points() const noexcept { return points_; }
  double point(int j) const { return static_cast<double>(j + 1) / (points_ + 1); }
  std::vector<double> points() const;

  /// values_j = sum_k c_k sqrt(2) sin(k pi x_j); coeffs may be shorter than num_modes.
  void to_grid(std::span<const Complex> coeffs, std::span<Complex> values) const;
  void to_grid(std::span<const double> coeffs, std::span<double> values) const;
  /// c_k = (1/(L+1)) sum_j values_j sqrt(2) sin(k pi x_j) for k = 1..coeffs.size().
  void to_modes(std::span<const Complex> values, std::span<Complex> coeffs) const;

 private:
  int modes_;
  int points_;
  std::vector<double> by_mode_;   // [k][j] = sqrt2 sin(k pi x_j)
  std::vector<double> by_point_;  // [j][k] = sqrt2 sin(k pi x_j) / (L+1)
};

/// Shared, immutable basis for (num_modes, num_points); safe to call from any thread.
std::shared_ptr<const SineBasis> sine_basis(int num_modes, int num_points);

/// Size of the dealiasing grid for N modes: 2N+1 interior points.
inline int padded_size(int num_modes) { return 2 * num_modes + 1; }
std::vector<double> padded_points(int num_modes);

SpectralState dst_forward(std::span<const Complex> values);
std::vector<Complex> dst_inverse(const SpectralState& state);

SpectralState project(const SpectralState& state, int target_modes);

double l2_norm_sq(const SpectralState& state);
double gradient_norm_sq(const SpectralState& state);
double laplacian_norm_sq(const SpectralState& state);
/// sum (1 + lambda_k^s) |c_k|^2 for s in {1, 2}.
double sobolev_norm_sq(const SpectralState& state, int order);

/// P^N(|u|^2 u), evaluated on the 2N+1 padded grid and projected back.
SpectralState cubic_nonlinearity(const SpectralState& state);

/// Re sum conj(a_k) b_k, the real L^2 inner product of two states.
double inner(const SpectralState& a, const SpectralState& b);

}  // namespace snls
