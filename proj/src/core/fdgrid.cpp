#include "fdgrid.hpp"

namespace snls {

GridState discrete_laplacian(const GridState& state) {
  const int n = state.num_nodes();
  GridState out = state;
  const double inv_h2 = 1.0 / (state.spacing * state.spacing);
  for (int i = 0; i < n; ++i) {
    const std::complex<double> left = i > 0 ? state.values[i - 1] : 0.0;
    const std::complex<double> right = i + 1 < n ? state.values[i + 1] : 0.0;
    out.values[i] = (right - 2.0 * state.values[i] + left) * inv_h2;
  }
  return out;
}

GridNorms grid_norms(const GridState& state) {
  const int n = state.num_nodes();
  const double h = state.spacing;
  GridNorms norms;
  double grad = 0.0;
  for (int i = 0; i <= n; ++i) {
    const std::complex<double> left = i > 0 ? state.values[i - 1] : 0.0;
    const std::complex<double> right = i < n ? state.values[i] : 0.0;
    grad += std::norm(right - left);
  }
  double charge = 0.0;
  double quartic = 0.0;
  for (const auto& v : state.values) {
    const double m = std::norm(v);
    charge += m;
    quartic += m * m;
  }
  norms.charge = h * charge;
  norms.gradient_sq = grad / h;  // h * sum |(u_{n+1}-u_n)/h|^2
  norms.l4_quartic = h * quartic;
  return norms;
}

double grid_energy(const GridState& state, double lambda) {
  const auto n = grid_norms(state);
  return 0.5 * n.gradient_sq - 0.25 * lambda * n.l4_quartic;
}

}  // namespace snls
