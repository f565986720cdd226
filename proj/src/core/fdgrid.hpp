#pragma once

#include <complex>
#include <vector>

namespace snls {

/// Values at the interior nodes x_n = n h, n = 1..N, with h = 1/(N+1) and zero Dirichlet ghosts.
struct GridState {
  double spacing = 0.0;
  std::vector<std::complex<double>> values;

  GridState() = default;
  explicit GridState(int num_nodes)
      : spacing(1.0 / (num_nodes + 1)), values(static_cast<std::size_t>(num_nodes)) {}
  explicit GridState(std::vector<std::complex<double>> v)
      : spacing(1.0 / (static_cast<double>(v.size()) + 1.0)), values(std::move(v)) {}

  int num_nodes() const noexcept { return static_cast<int>(values.size()); }
  double node(int n) const { return (n + 1) * spacing; }  // zero-based n
};

struct GridNorms {
  double charge = 0.0;       // h sum |u_n|^2
  double gradient_sq = 0.0;  // h sum_{n=0..N} |delta_+ u(n)|^2
  double l4_quartic = 0.0;   // h sum |u_n|^4
};

/// delta_+ delta_- with zero ghosts: (u_{n+1} - 2 u_n + u_{n-1}) / h^2.
GridState discrete_laplacian(const GridState& state);

GridNorms grid_norms(const GridState& state);

/// Discrete energy 1/2 gradient_sq - lambda/4 l4_quartic.
double grid_energy(const GridState& state, double lambda);

}  // namespace snls
