#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stats.hpp"

namespace snls {

double charge(const SpectralState& state) { return l2_norm_sq(state); }

double charge(const GridState& state) { return grid_norms(state).charge; }

double energy(const SpectralState& state, double lambda) {
  const int n = state.num_modes();
  if (n == 0) return 0.0;
  const auto basis = sine_basis(n, padded_size(n));
  std::vector<Complex> grid(basis->num_points());
  basis->to_grid(state.coeffs, grid);
  double quartic = 0.0;
  for (const auto& v : grid) quartic += std::norm(v) * std::norm(v);
  quartic /= basis->num_points() + 1;
  return 0.5 * gradient_norm_sq(state) - 0.25 * lambda * quartic;
}

double energy(const GridState& state, double lambda) { return grid_energy(state, lambda); }

double lyapunov(const SpectralState& state, double lambda) {
  double value = laplacian_norm_sq(state);
  if (lambda == 0.0 || state.num_modes() == 0) return value;
  const SpectralState cubic = cubic_nonlinearity(state);
  double cross = 0.0;  // <Lap u, P(|u|^2 u)>
  for (int k = 1; k <= state.num_modes(); ++k)
    cross -= eigenvalue(k) * (std::conj(state.coeffs[k - 1]) * cubic.coeffs[k - 1]).real();
  return value + lambda * cross;
}

double lyapunov(const GridState& state, double lambda) {
  const GridState lap = discrete_laplacian(state);
  const double h = state.spacing;
  double sq = 0.0;
  double cross = 0.0;
  for (int n = 0; n < state.num_nodes(); ++n) {
    const auto& u = state.values[n];
    sq += std::norm(lap.values[n]);
    cross += (std::conj(lap.values[n]) * u).real() * std::norm(u);
  }
  return h * sq + lambda * h * cross;
}

double h1_norm(const SpectralState& state) { return std::sqrt(sobolev_norm_sq(state, 1)); }

double h1_norm(const GridState& state) {
  const auto n = grid_norms(state);
  return std::sqrt(n.charge + n.gradient_sq);
}

std::vector<double> log_exp_moment_series(std::span<const std::vector<double>> energy_series,
                                          std::span<const double> times, double alpha) {
  if (energy_series.empty()) throw InvalidArgument("exp_moment_series: no records");
  if (!(alpha > 0.0)) throw InvalidArgument("exp_moment_series: alpha must be > 0");
  for (const auto& e : energy_series)
    if (e.size() != times.size())
      throw InvalidArgument("exp_moment_series: energy series length differs from times");

  const double count = static_cast<double>(energy_series.size());
  std::vector<double> out(times.size());
  std::vector<double> exponents(energy_series.size());
  for (std::size_t t = 0; t < times.size(); ++t) {
    const double damping = std::exp(-alpha * times[t]);
    for (std::size_t r = 0; r < energy_series.size(); ++r)
      exponents[r] = energy_series[r][t] * damping;
    std::sort(exponents.begin(), exponents.end());
    const double top = exponents.back();
    if (!std::isfinite(top)) {
      out[t] = top;
      continue;
    }
    double sum = 0.0;
    for (double x : exponents) sum += std::exp(x - top);
    out[t] = top + std::log(sum / count);
  }
  return out;
}

std::vector<double> exp_moment_series(std::span<const std::vector<double>> energy_series,
                                      std::span<const double> times, double alpha) {
  auto out = log_exp_moment_series(energy_series, times, alpha);
  for (auto& v : out) v = std::exp(v);
  return out;
}

std::vector<double> tail_exceedance(std::span<const double> samples,
                                    std::span<const double> thresholds) {
  if (samples.empty()) throw InvalidArgument("tail_exceedance: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out(thresholds.size());
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), thresholds[i]);
    out[i] = static_cast<double>(sorted.end() - first) / static_cast<double>(sorted.size());
  }
  return out;
}

TailFit tail_decay_fit(std::span<const double> samples, int num_thresholds) {
  if (samples.empty()) throw InvalidArgument("tail_decay_fit: no samples");
  if (num_thresholds < 8) throw InvalidArgument("tail_decay_fit: need at least 8 thresholds");
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  TailFit fit;
  fit.thresholds.resize(num_thresholds);
  for (int i = 0; i < num_thresholds; ++i)
    fit.thresholds[i] = *lo + (*hi - *lo) * i / (num_thresholds - 1);
  fit.exceedance = tail_exceedance(samples, fit.thresholds);

  std::vector<double> xs;
  std::vector<double> ys;
  for (int i = (3 * num_thresholds) / 4; i < num_thresholds; ++i) {
    if (fit.exceedance[i] <= 0.0) continue;
    xs.push_back(fit.thresholds[i] * fit.thresholds[i]);
    ys.push_back(std::log(fit.exceedance[i]));
  }
  fit.fitted_points = static_cast<int>(xs.size());
  if (xs.size() < 2) throw InvalidArgument("tail_decay_fit: fewer than two usable thresholds");
  fit.slope = least_squares_slope(xs, ys);
  return fit;
}

double ito_charge_drift(const SpectralState& state, const CovarianceSpec& spec) {
  // u * sqrt2 sin(k pi x) is the cosine series sum_a c_a (cos((a-k) pi x) - cos((a+k) pi x)),
  // so its sine coefficients never terminate. The tail is ||f||^2 minus the first n
  // projections, both in closed form.
  const int n = state.num_modes();
  const int k_max = spec.num_modes;
  if (n == 0 || k_max == 0 || spec.intensity == 0.0) return 0.0;
  const double pi = std::numbers::pi;
  // <cos(m pi x), sqrt2 sin(j pi x)> on (0, 1)
  auto cos_sin = [pi](int m, int j) {
    if (std::abs(m) == j || (j + m) % 2 == 0) return 0.0;
    return std::numbers::sqrt2 * 2.0 * j / (pi * (static_cast<double>(j) * j - static_cast<double>(m) * m));
  };
  std::vector<Complex> cosine(n + k_max + 1);
  long double drift = 0.0L;
  for (int k = 1; k <= k_max; ++k) {
    const double amp = spec.intensity * spec.weights[k - 1];
    std::fill(cosine.begin(), cosine.end(), Complex{});
    for (int a = 1; a <= n; ++a) {
      cosine[std::abs(a - k)] += amp * state.coeffs[a - 1];
      cosine[a + k] -= amp * state.coeffs[a - 1];
    }
    long double whole = std::norm(cosine[0]);
    for (std::size_t m = 1; m < cosine.size(); ++m) whole += 0.5L * std::norm(cosine[m]);
    long double resolved = 0.0L;
    for (int j = 1; j <= n; ++j) {
      Complex c{};
      for (std::size_t m = 0; m < cosine.size(); ++m) c += cosine[m] * cos_sin(static_cast<int>(m), j);
      resolved += std::norm(c);
    }
    drift += whole - resolved;
  }
  return static_cast<double>(drift);
}

}  // namespace snls
