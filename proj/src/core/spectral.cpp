#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "errors.hpp"

namespace snls {

double eigenvalue(int k) {
  const double w = k * std::numbers::pi;
  return w * w;
}

SineBasis::SineBasis(int num_modes, int num_points) : modes_(num_modes), points_(num_points) {
  if (num_modes < 1 || num_points < 1) throw InvalidArgument("SineBasis: empty basis");
  const std::size_t n = static_cast<std::size_t>(modes_) * points_;
  by_mode_.resize(n);
  by_point_.resize(n);
  // sin(k pi j/(L+1)) with the angle reduced modulo 2 pi in integer arithmetic
  const long period = 2L * (points_ + 1);
  const double inv = 1.0 / (points_ + 1);
  for (int k = 1; k <= modes_; ++k)
    for (int j = 1; j <= points_; ++j) {
      const long r = (static_cast<long>(k) * j) % period;
      const double s = std::numbers::sqrt2 * std::sin(std::numbers::pi * r * inv);
      by_mode_[static_cast<std::size_t>(k - 1) * points_ + (j - 1)] = s;
      by_point_[static_cast<std::size_t>(j - 1) * modes_ + (k - 1)] = s * inv;
    }
}

std::vector<double> SineBasis::points() const {
  std::vector<double> x(points_);
  for (int j = 0; j < points_; ++j) x[j] = point(j);
  return x;
}

void SineBasis::to_grid(std::span<const Complex> coeffs, std::span<Complex> values) const {
  if (coeffs.size() > static_cast<std::size_t>(modes_) ||
      values.size() != static_cast<std::size_t>(points_))
    throw InvalidArgument("SineBasis::to_grid: size mismatch");
  std::fill(values.begin(), values.end(), Complex{});
  double* out = reinterpret_cast<double*>(values.data());
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double re = coeffs[k].real();
    const double im = coeffs[k].imag();
    if (re == 0.0 && im == 0.0) continue;
    const double* row = by_mode_.data() + k * points_;
    for (int j = 0; j < points_; ++j) {
      out[2 * j] += row[j] * re;
      out[2 * j + 1] += row[j] * im;
    }
  }
}

void SineBasis::to_grid(std::span<const double> coeffs, std::span<double> values) const {
  if (coeffs.size() > static_cast<std::size_t>(modes_) ||
      values.size() != static_cast<std::size_t>(points_))
    throw InvalidArgument("SineBasis::to_grid: size mismatch");
  std::fill(values.begin(), values.end(), 0.0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double c = coeffs[k];
    const double* row = by_mode_.data() + k * points_;
    for (int j = 0; j < points_; ++j) values[j] += row[j] * c;
  }
}

void SineBasis::to_modes(std::span<const Complex> values, std::span<Complex> coeffs) const {
  if (coeffs.size() > static_cast<std::size_t>(modes_) ||
      values.size() != static_cast<std::size_t>(points_))
    throw InvalidArgument("SineBasis::to_modes: size mismatch");
  const std::size_t n = coeffs.size();
  std::fill(coeffs.begin(), coeffs.end(), Complex{});
  double* out = reinterpret_cast<double*>(coeffs.data());
  for (int j = 0; j < points_; ++j) {
    const double re = values[j].real();
    const double im = values[j].imag();
    const double* row = by_point_.data() + static_cast<std::size_t>(j) * modes_;
    for (std::size_t k = 0; k < n; ++k) {
      out[2 * k] += row[k] * re;
      out[2 * k + 1] += row[k] * im;
    }
  }
}

std::shared_ptr<const SineBasis> sine_basis(int num_modes, int num_points) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const SineBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{num_modes, num_points}];
  if (!slot) slot = std::make_shared<const SineBasis>(num_modes, num_points);
  return slot;
}

std::vector<double> padded_points(int num_modes) {
  return sine_basis(num_modes, padded_size(num_modes))->points();
}

SpectralState dst_forward(std::span<const Complex> values) {
  if (values.empty()) throw InvalidArgument("dst_forward: empty input");
  const int n = static_cast<int>(values.size());
  SpectralState out(n);
  sine_basis(n, n)->to_modes(values, out.coeffs);
  return out;
}

std::vector<Complex> dst_inverse(const SpectralState& state) {
  const int n = state.num_modes();
  if (n == 0) return {};
  std::vector<Complex> values(n);
  sine_basis(n, n)->to_grid(state.coeffs, values);
  return values;
}

SpectralState project(const SpectralState& state, int target_modes) {
  if (target_modes < 1 || target_modes > state.num_modes())
    throw InvalidArgument("project: target_modes must be in [1, num_modes]");
  return SpectralState(
      std::vector<Complex>(state.coeffs.begin(), state.coeffs.begin() + target_modes));
}

double l2_norm_sq(const SpectralState& state) {
  double s = 0.0;
  for (const auto& c : state.coeffs) s += std::norm(c);
  return s;
}

double gradient_norm_sq(const SpectralState& state) {
  double s = 0.0;
  for (int k = 1; k <= state.num_modes(); ++k) s += eigenvalue(k) * std::norm(state.coeffs[k - 1]);
  return s;
}

double laplacian_norm_sq(const SpectralState& state) {
  double s = 0.0;
  for (int k = 1; k <= state.num_modes(); ++k) {
    const double lam = eigenvalue(k);
    s += lam * lam * std::norm(state.coeffs[k - 1]);
  }
  return s;
}

double sobolev_norm_sq(const SpectralState& state, int order) {
  if (order != 1 && order != 2) throw InvalidArgument("sobolev_norm_sq: order must be 1 or 2");
  double s = 0.0;
  for (int k = 1; k <= state.num_modes(); ++k) {
    const double lam = eigenvalue(k);
    s += (1.0 + (order == 1 ? lam : lam * lam)) * std::norm(state.coeffs[k - 1]);
  }
  return s;
}

SpectralState cubic_nonlinearity(const SpectralState& state) {
  const int n = state.num_modes();
  if (n == 0) return state;
  const auto basis = sine_basis(n, padded_size(n));
  std::vector<Complex> grid(basis->num_points());
  basis->to_grid(state.coeffs, grid);
  for (auto& v : grid) v *= std::norm(v);
  SpectralState out(n);
  basis->to_modes(grid, out.coeffs);
  return out;
}

double inner(const SpectralState& a, const SpectralState& b) {
  const std::size_t n = std::min(a.coeffs.size(), b.coeffs.size());
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += (std::conj(a.coeffs[k]) * b.coeffs[k]).real();
  return s;
}

}  // namespace snls
