#include "schemes.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace snls {
namespace {

constexpr Complex kI{0.0, 1.0};

// Relative L2 change ||next - prev|| / ||next||, with 0/0 read as 0.
double relative_change(double diff_sq, double norm_sq) {
  if (norm_sq == 0.0) return std::sqrt(diff_sq);
  return std::sqrt(diff_sq / norm_sq);
}

void check_step_inputs(double dt, std::span<const Complex> values) {
  if (!std::isfinite(dt) || dt == 0.0) throw InvalidArgument("cn_deterministic_step: bad dt");
  for (const auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InvalidArgument("cn_deterministic_step: non-finite state");
}

// Tridiagonal solve for A x = rhs with constant off-diagonals `off` and
// per-row diagonal `diag` (Thomas algorithm, no pivoting).
void solve_tridiagonal(std::span<const Complex> diag, Complex off, std::span<const Complex> rhs,
                       std::span<Complex> x) {
  const std::size_t n = diag.size();
  std::vector<Complex> c(n);
  std::vector<Complex> d(n);
  Complex denom = diag[0];
  c[0] = off / denom;
  d[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - off * c[i - 1];
    c[i] = off / denom;
    d[i] = (rhs[i] - off * d[i - 1]) / denom;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
}

// Constant-coefficient tridiagonal solver with the elimination factors cached.
class CachedTridiagonal {
 public:
  CachedTridiagonal(std::size_t n, Complex diag, Complex off) : off_(off), c_(n), inv_(n) {
    Complex denom = diag;
    inv_[0] = 1.0 / denom;
    c_[0] = off * inv_[0];
    for (std::size_t i = 1; i < n; ++i) {
      denom = diag - off * c_[i - 1];
      inv_[i] = 1.0 / denom;
      c_[i] = off * inv_[i];
    }
  }

  void solve(std::span<const Complex> rhs, std::span<Complex> x) const {
    const std::size_t n = c_.size();
    x[0] = rhs[0] * inv_[0];
    for (std::size_t i = 1; i < n; ++i) x[i] = (rhs[i] - off_ * x[i - 1]) * inv_[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c_[i] * x[i + 1];
  }

 private:
  Complex off_;
  std::vector<Complex> c_;
  std::vector<Complex> inv_;
};

// Damping schedule shared by both discretizations: halve the relaxation
// weight whenever the change grows, give up after three halvings.
struct Relaxation {
  double weight = 1.0;
  double previous = std::numeric_limits<double>::infinity();
  int halvings = 0;

  // false when the iteration should be abandoned
  bool update(double change) {
    if (!std::isfinite(change)) return false;
    if (change > previous) {
      if (++halvings > 3) return false;
      weight *= 0.5;
    }
    previous = change;
    return true;
  }
};

}  // namespace

std::string_view to_string(SchemeKind kind) {
  return kind == SchemeKind::spectral ? "spectral" : "finite_difference";
}

SchemeKind parse_scheme_kind(std::string_view text) {
  if (text == "spectral") return SchemeKind::spectral;
  if (text == "finite_difference" || text == "fd") return SchemeKind::finite_difference;
  throw InvalidArgument("unknown scheme '" + std::string(text) + "'");
}

void SchemeConfig::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw InvalidArgument("SchemeConfig: horizon must be > 0");
  if (num_steps < 0) throw InvalidArgument("SchemeConfig: num_steps must be >= 0");
  if (num_steps > 0 && !(dt() < 1.0))
    throw InvalidArgument("SchemeConfig: time step horizon/num_steps must be < 1");
  if (focusing_sign != 1 && focusing_sign != -1)
    throw InvalidArgument("SchemeConfig: focusing_sign must be +1 or -1");
  if (!(solver_tolerance > 0.0)) throw InvalidArgument("SchemeConfig: solver_tolerance must be > 0");
  if (solver_max_iterations < 1)
    throw InvalidArgument("SchemeConfig: solver_max_iterations must be >= 1");
}

// ---------------------------------------------------------------------------
// Spectral discretization

namespace detail {

SpectralState lagged_potential_step(const SpectralState& state, double dt,
                                    const SchemeConfig& config, SolveInfo* info) {
  const int n = state.num_modes();
  check_step_inputs(dt, state.coeffs);
  const double lambda = config.lambda();
  const auto basis = sine_basis(n, padded_size(n));
  const int points = basis->num_points();

  std::vector<Complex> u_grid(points);
  std::vector<Complex> z_grid(points);
  basis->to_grid(state.coeffs, u_grid);

  // sqrt2 sin(k pi x_j) for the Galerkin potential matrix
  Eigen::MatrixXd phi(points, n);
  {
    std::vector<double> unit(n, 0.0);
    std::vector<double> column(points);
    for (int k = 0; k < n; ++k) {
      unit[k] = 1.0;
      basis->to_grid(std::span<const double>(unit), column);
      for (int j = 0; j < points; ++j) phi(j, k) = column[j];
      unit[k] = 0.0;
    }
  }
  Eigen::VectorXcd u(n);
  for (int k = 0; k < n; ++k) u(k) = state.coeffs[k];

  SpectralState z = state;
  double change = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= config.solver_max_iterations; ++it) {
    basis->to_grid(z.coeffs, z_grid);
    Eigen::VectorXd weight(points);
    for (int j = 0; j < points; ++j)
      weight(j) = 0.5 * (std::norm(u_grid[j]) + std::norm(z_grid[j])) / (points + 1);
    const Eigen::MatrixXd potential = phi.transpose() * weight.asDiagonal() * phi;

    // (I + i dt Lambda/2 - i lambda dt V/2) z = (I - i dt Lambda/2 + i lambda dt V/2) u
    const Eigen::MatrixXcd coupling = Complex(0.0, 0.5 * lambda * dt) * potential.cast<Complex>();
    Eigen::MatrixXcd lhs = -coupling;
    Eigen::MatrixXcd rhs_op = coupling;
    for (int k = 0; k < n; ++k) {
      const double a = 0.5 * dt * eigenvalue(k + 1);
      lhs(k, k) += Complex(1.0, a);
      rhs_op(k, k) += Complex(1.0, -a);
    }
    const Eigen::VectorXcd next = lhs.partialPivLu().solve(rhs_op * u);

    double diff = 0.0;
    double norm = 0.0;
    for (int k = 0; k < n; ++k) {
      diff += std::norm(next(k) - z.coeffs[k]);
      norm += std::norm(next(k));
      z.coeffs[k] = next(k);
    }
    change = relative_change(diff, norm);
    if (info) {
      info->iterations += 1;
      info->last_change = change;
    }
    if (!std::isfinite(change)) break;
    if (change <= config.solver_tolerance) return z;
  }
  throw SolverDivergence(change, config.solver_max_iterations);
}

}  // namespace detail

SpectralState cn_deterministic_step(const SpectralState& state, double dt,
                                    const SchemeConfig& config, SolveInfo* info) {
  const int n = state.num_modes();
  check_step_inputs(dt, state.coeffs);
  if (n == 0) return state;
  const double lambda = config.lambda();

  std::vector<Complex> rhs(n);
  std::vector<Complex> inv_denom(n);
  for (int k = 0; k < n; ++k) {
    const double a = 0.5 * dt * eigenvalue(k + 1);
    rhs[k] = state.coeffs[k] * Complex(1.0, -a);
    inv_denom[k] = 1.0 / Complex(1.0, a);
  }
  SpectralState z(n);
  if (lambda == 0.0) {
    for (int k = 0; k < n; ++k) z.coeffs[k] = rhs[k] * inv_denom[k];
    if (info) info->iterations = 1;
    return z;
  }

  const auto basis = sine_basis(n, padded_size(n));
  const int points = basis->num_points();
  std::vector<Complex> u_grid(points);
  std::vector<Complex> z_grid(points);
  std::vector<double> u_mod(points);
  std::vector<Complex> g(n);
  basis->to_grid(state.coeffs, u_grid);
  for (int j = 0; j < points; ++j) u_mod[j] = std::norm(u_grid[j]);

  const Complex forcing = kI * (lambda * dt);
  z = state;
  Relaxation relax;
  double change = 0.0;
  for (int it = 1; it <= config.solver_max_iterations; ++it) {
    basis->to_grid(z.coeffs, z_grid);
    for (int j = 0; j < points; ++j)
      z_grid[j] = 0.25 * (u_mod[j] + std::norm(z_grid[j])) * (u_grid[j] + z_grid[j]);
    basis->to_modes(z_grid, g);

    double diff = 0.0;
    double norm = 0.0;
    for (int k = 0; k < n; ++k) {
      const Complex mapped = (rhs[k] + forcing * g[k]) * inv_denom[k];
      const Complex next = z.coeffs[k] + relax.weight * (mapped - z.coeffs[k]);
      diff += std::norm(next - z.coeffs[k]);
      norm += std::norm(next);
      z.coeffs[k] = next;
    }
    change = relative_change(diff, norm);
    if (info) {
      info->iterations = it;
      info->last_change = change;
    }
    if (change <= config.solver_tolerance) return z;
    if (!relax.update(change)) break;
  }
  if (info) info->used_fallback = true;
  return detail::lagged_potential_step(state, dt, config, info);
}

std::vector<double> evaluation_points(const SpectralState& state) {
  return padded_points(state.num_modes());
}

std::vector<double> noise_values(const SpectralState& state, const CovarianceSpec& spec,
                                 const NoisePath& path, int step_index) {
  const int n = state.num_modes();
  if (step_index < 0 || step_index >= path.num_steps())
    throw InvalidArgument("noise_values: step index out of range");
  const int modes = std::min(spec.num_modes, n);
  if (modes > path.num_modes()) throw InvalidArgument("noise_values: path has too few modes");
  auto row = path.row(step_index);
  std::vector<double> amplitude(modes);
  for (int k = 0; k < modes; ++k) amplitude[k] = spec.intensity * spec.weights[k] * row[k];
  const auto basis = sine_basis(n, padded_size(n));
  std::vector<double> values(basis->num_points());
  basis->to_grid(std::span<const double>(amplitude), values);
  return values;
}

SpectralState noise_step(const SpectralState& state, std::span<const double> increment_values) {
  const int n = state.num_modes();
  if (increment_values.size() != static_cast<std::size_t>(padded_size(n)))
    throw InvalidArgument("noise_step: expected " + std::to_string(padded_size(n)) +
                          " increment values, got " + std::to_string(increment_values.size()));
  const auto basis = sine_basis(n, padded_size(n));
  std::vector<Complex> grid(basis->num_points());
  basis->to_grid(state.coeffs, grid);
  for (std::size_t j = 0; j < grid.size(); ++j) grid[j] *= std::polar(1.0, -increment_values[j]);
  SpectralState out(n);
  basis->to_modes(grid, out.coeffs);
  return out;
}

SpectralState step(const SpectralState& state, const SchemeConfig& config, const NoisePath& path,
                   const CovarianceSpec& spec, int step_index) {
  SpectralState next = cn_deterministic_step(state, config.dt(), config);
  if (spec.intensity == 0.0) return next;
  return noise_step(next, noise_values(next, spec, path, step_index));
}

SpectralState sine_initial_spectral(int num_modes) {
  if (num_modes < 1) throw InvalidArgument("sine_initial_spectral: num_modes must be >= 1");
  SpectralState s(num_modes);
  s.coeffs[0] = 1.0 / std::numbers::sqrt2;
  return s;
}

// ---------------------------------------------------------------------------
// Finite-difference discretization

namespace detail {

GridState lagged_potential_step(const GridState& state, double dt, const SchemeConfig& config,
                                SolveInfo* info) {
  const int n = state.num_nodes();
  check_step_inputs(dt, state.values);
  const double lambda = config.lambda();
  const double r = 0.5 * dt / (state.spacing * state.spacing);
  const Complex lhs_off(0.0, -r);

  std::vector<Complex> diag(n);
  std::vector<Complex> rhs(n);
  GridState z = state;
  std::vector<Complex> next(n);
  double change = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= config.solver_max_iterations; ++it) {
    for (int i = 0; i < n; ++i) {
      const double v = 0.5 * (std::norm(state.values[i]) + std::norm(z.values[i]));
      const double shift = 0.5 * lambda * dt * v;
      diag[i] = Complex(1.0, 2.0 * r - shift);
      const Complex left = i > 0 ? state.values[i - 1] : 0.0;
      const Complex right = i + 1 < n ? state.values[i + 1] : 0.0;
      rhs[i] = Complex(1.0, -2.0 * r + shift) * state.values[i] + Complex(0.0, r) * (left + right);
    }
    solve_tridiagonal(diag, lhs_off, rhs, next);
    double diff = 0.0;
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
      diff += std::norm(next[i] - z.values[i]);
      norm += std::norm(next[i]);
      z.values[i] = next[i];
    }
    change = relative_change(diff, norm);
    if (info) {
      info->iterations += 1;
      info->last_change = change;
    }
    if (!std::isfinite(change)) break;
    if (change <= config.solver_tolerance) return z;
  }
  throw SolverDivergence(change, config.solver_max_iterations);
}

}  // namespace detail

GridState cn_deterministic_step(const GridState& state, double dt, const SchemeConfig& config,
                                SolveInfo* info) {
  const int n = state.num_nodes();
  check_step_inputs(dt, state.values);
  if (n == 0) return state;
  const double lambda = config.lambda();
  const double r = 0.5 * dt / (state.spacing * state.spacing);

  // (I - i dt/2 D) z = (I + i dt/2 D) u + i lambda dt G(z)
  std::vector<Complex> base(n);
  for (int i = 0; i < n; ++i) {
    const Complex left = i > 0 ? state.values[i - 1] : 0.0;
    const Complex right = i + 1 < n ? state.values[i + 1] : 0.0;
    base[i] = Complex(1.0, -2.0 * r) * state.values[i] + Complex(0.0, r) * (left + right);
  }
  const CachedTridiagonal solver(n, Complex(1.0, 2.0 * r), Complex(0.0, -r));
  GridState z = state;
  if (lambda == 0.0) {
    solver.solve(base, z.values);
    if (info) info->iterations = 1;
    return z;
  }

  std::vector<double> u_mod(n);
  for (int i = 0; i < n; ++i) u_mod[i] = std::norm(state.values[i]);
  const Complex forcing = kI * (lambda * dt);
  std::vector<Complex> rhs(n);
  std::vector<Complex> mapped(n);
  Relaxation relax;
  for (int it = 1; it <= config.solver_max_iterations; ++it) {
    for (int i = 0; i < n; ++i) {
      const Complex zi = z.values[i];
      rhs[i] = base[i] + forcing * (0.25 * (u_mod[i] + std::norm(zi)) * (state.values[i] + zi));
    }
    solver.solve(rhs, mapped);
    double diff = 0.0;
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
      const Complex next = z.values[i] + relax.weight * (mapped[i] - z.values[i]);
      diff += std::norm(next - z.values[i]);
      norm += std::norm(next);
      z.values[i] = next;
    }
    const double change = relative_change(diff, norm);
    if (info) {
      info->iterations = it;
      info->last_change = change;
    }
    if (change <= config.solver_tolerance) return z;
    if (!relax.update(change)) break;
  }
  if (info) info->used_fallback = true;
  return detail::lagged_potential_step(state, dt, config, info);
}

std::vector<double> evaluation_points(const GridState& state) {
  std::vector<double> x(state.num_nodes());
  for (int i = 0; i < state.num_nodes(); ++i) x[i] = state.node(i);
  return x;
}

std::vector<double> noise_values(const GridState& state, const CovarianceSpec& spec,
                                 const NoisePath& path, int step_index) {
  if (step_index < 0 || step_index >= path.num_steps())
    throw InvalidArgument("noise_values: step index out of range");
  if (spec.num_modes > path.num_modes())
    throw InvalidArgument("noise_values: path has too few modes");
  auto row = path.row(step_index);
  std::vector<double> amplitude(spec.num_modes);
  for (int k = 0; k < spec.num_modes; ++k) amplitude[k] = spec.intensity * spec.weights[k] * row[k];
  const auto basis = sine_basis(spec.num_modes, state.num_nodes());
  std::vector<double> values(state.num_nodes());
  basis->to_grid(std::span<const double>(amplitude), values);
  return values;
}

GridState noise_step(const GridState& state, std::span<const double> increment_values) {
  if (increment_values.size() != state.values.size())
    throw InvalidArgument("noise_step: expected " + std::to_string(state.values.size()) +
                          " increment values, got " + std::to_string(increment_values.size()));
  GridState out = state;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] *= std::polar(1.0, -increment_values[i]);
  return out;
}

GridState step(const GridState& state, const SchemeConfig& config, const NoisePath& path,
               const CovarianceSpec& spec, int step_index) {
  GridState next = cn_deterministic_step(state, config.dt(), config);
  if (spec.intensity == 0.0) return next;
  return noise_step(next, noise_values(next, spec, path, step_index));
}

GridState sine_initial_grid(int num_nodes) {
  if (num_nodes < 1) throw InvalidArgument("sine_initial_grid: num_nodes must be >= 1");
  GridState s(num_nodes);
  for (int i = 0; i < num_nodes; ++i) s.values[i] = std::sin(std::numbers::pi * s.node(i));
  return s;
}

}  // namespace snls
