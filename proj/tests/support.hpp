#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "fdgrid.hpp"
#include "spectral.hpp"

namespace testing_support {

using Complex = std::complex<double>;

// Coefficients decaying like k^-decay with random complex phases.
inline snls::SpectralState random_spectral(int modes, std::mt19937_64& rng, double scale = 1.0,
                                           double decay = 2.0) {
  std::normal_distribution<double> g;
  snls::SpectralState s(modes);
  for (int k = 1; k <= modes; ++k)
    s.coeffs[k - 1] = Complex(g(rng), g(rng)) * (scale / std::pow(k, decay));
  return s;
}

inline snls::GridState random_grid(int nodes, std::mt19937_64& rng, double scale = 1.0) {
  // smooth profile: a few random sine modes sampled at the nodes
  std::normal_distribution<double> g;
  snls::GridState s(nodes);
  for (int k = 1; k <= 6; ++k) {
    const Complex a = Complex(g(rng), g(rng)) * (scale / (k * k));
    for (int n = 0; n < nodes; ++n) s.values[n] += a * std::sin(k * std::numbers::pi * s.node(n));
  }
  return s;
}

// u(x) = sum c_k sqrt2 sin(k pi x), evaluated directly.
inline Complex evaluate(const snls::SpectralState& s, double x) {
  Complex v = 0.0;
  for (int k = 1; k <= s.num_modes(); ++k)
    v += s.coeffs[k - 1] * (std::numbers::sqrt2 * std::sin(k * std::numbers::pi * x));
  return v;
}

inline Complex evaluate_derivative(const snls::SpectralState& s, double x) {
  Complex v = 0.0;
  for (int k = 1; k <= s.num_modes(); ++k)
    v += s.coeffs[k - 1] *
         (std::numbers::sqrt2 * k * std::numbers::pi * std::cos(k * std::numbers::pi * x));
  return v;
}

// Composite Gauss-Legendre (5 nodes) on [0,1] with `panels` panels.
inline double integrate(const std::function<double(double)>& f, int panels = 400) {
  static const double xs[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                               0.9061798459386640};
  static const double ws[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                               0.2369268850561891, 0.2369268850561891};
  double total = 0.0;
  const double h = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (int i = 0; i < 5; ++i) total += ws[i] * f(mid + 0.5 * h * xs[i]) * 0.5 * h;
  }
  return total;
}

// int_0^1 cos(j pi x) dx for integer j.
inline double cos_integral(int j) { return j == 0 ? 1.0 : 0.0; }

// int_0^1 (sqrt2)^4 sin(a) sin(b) sin(c) sin(k) dx, from product-to-sum identities.
inline double quad_sine_integral(int a, int b, int c, int k) {
  // sin a sin b = (cos(a-b) - cos(a+b))/2, likewise for c, k
  auto cc = [](int m, int n) { return 0.5 * (cos_integral(m - n) + cos_integral(m + n)); };
  const double v = cc(a - b, c - k) - cc(a - b, c + k) - cc(a + b, c - k) + cc(a + b, c + k);
  return 4.0 * 0.25 * v;
}

}  // namespace testing_support
