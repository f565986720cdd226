#include "noise.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace snls {
namespace {

constexpr double kLattice = 1099511627776.0;  // 2^40

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// (0, 1], 53 bits
double to_unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

CovarianceSpec build_covariance(int num_modes, double intensity) {
  if (num_modes < 1) throw InvalidArgument("build_covariance: num_modes must be >= 1");
  if (!(intensity >= 0.0) || !std::isfinite(intensity))
    throw InvalidArgument("build_covariance: intensity must be finite and >= 0");
  CovarianceSpec spec;
  spec.num_modes = num_modes;
  spec.intensity = intensity;
  spec.weights.resize(num_modes);
  for (int k = 1; k <= num_modes; ++k) spec.weights[k - 1] = 1.0 / (1.0 + std::pow(k, 2.6));
  return spec;
}

CovarianceSpec truncate_covariance(const CovarianceSpec& spec, int num_modes) {
  if (num_modes < 1) throw InvalidArgument("truncate_covariance: num_modes must be >= 1");
  CovarianceSpec out = spec;
  if (num_modes < spec.num_modes) {
    out.num_modes = num_modes;
    out.weights.resize(num_modes);
  }
  return out;
}

double h2_trace(const CovarianceSpec& spec) {
  double sum = 0.0;
  for (int k = 1; k <= spec.num_modes; ++k) {
    const double lam = std::pow(k * std::numbers::pi, 2);
    sum += spec.weights[k - 1] * spec.weights[k - 1] * lam * lam;
  }
  return sum;
}

NoisePath::NoisePath(double dt, int num_steps, int num_modes, std::vector<double> increments)
    : dt_(dt), num_steps_(num_steps), num_modes_(num_modes), increments_(std::move(increments)) {
  if (!(dt > 0.0)) throw InvalidArgument("NoisePath: dt must be > 0");
  if (num_steps < 0 || num_modes < 1) throw InvalidArgument("NoisePath: bad shape");
  if (increments_.size() != static_cast<std::size_t>(num_steps) * num_modes)
    throw InvalidArgument("NoisePath: increment count does not match shape");
}

double counter_gaussian(std::uint64_t seed, std::uint64_t trajectory, std::uint64_t step,
                        std::uint64_t mode) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ trajectory);
  h = mix64(h ^ (step * 0xd1b54a32d192ed03ULL));
  h = mix64(h ^ mode);
  const double u1 = to_unit_open(mix64(h ^ 0x243f6a8885a308d3ULL));
  const double u2 = to_unit_open(mix64(h ^ 0x13198a2e03707344ULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double quantize_increment(double value) { return std::nearbyint(value * kLattice) / kLattice; }

NoisePath sample_path(const CovarianceSpec& spec, double horizon, int num_steps,
                      std::uint64_t seed, std::uint64_t trajectory) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw InvalidArgument("sample_path: horizon must be > 0");
  if (num_steps < 1) throw InvalidArgument("sample_path: num_steps must be >= 1");
  if (spec.num_modes < 1) throw InvalidArgument("sample_path: covariance has no modes");

  const double dt = horizon / num_steps;
  const double scale = std::sqrt(dt);
  std::vector<double> inc(static_cast<std::size_t>(num_steps) * spec.num_modes);
  std::size_t i = 0;
  for (int m = 0; m < num_steps; ++m)
    for (int k = 0; k < spec.num_modes; ++k)
      inc[i++] = quantize_increment(scale * counter_gaussian(seed, trajectory, m, k));
  return NoisePath(dt, num_steps, spec.num_modes, std::move(inc));
}

NoisePath coarsen_path(const NoisePath& path, int factor) {
  if (factor < 1) throw InvalidArgument("coarsen_path: factor must be >= 1");
  if (path.num_steps() % factor != 0)
    throw InvalidArgument("coarsen_path: " + std::to_string(path.num_steps()) +
                          " steps not divisible by factor " + std::to_string(factor));
  const int steps = path.num_steps() / factor;
  const int modes = path.num_modes();
  std::vector<double> inc(static_cast<std::size_t>(steps) * modes, 0.0);
  for (int m = 0; m < steps; ++m)
    for (int j = 0; j < factor; ++j) {
      auto src = path.row(m * factor + j);
      double* dst = inc.data() + static_cast<std::size_t>(m) * modes;
      for (int k = 0; k < modes; ++k) dst[k] += src[k];
    }
  return NoisePath(path.dt() * factor, steps, modes, std::move(inc));
}

std::vector<double> increment_on_points(const CovarianceSpec& spec, const NoisePath& path,
                                        int step_index, std::span<const double> points) {
  if (step_index < 0 || step_index >= path.num_steps())
    throw InvalidArgument("increment_on_points: step_index " + std::to_string(step_index) +
                          " out of range");
  if (spec.num_modes > path.num_modes())
    throw InvalidArgument("increment_on_points: path has fewer modes than the covariance");
  for (double x : points)
    if (!(x >= 0.0 && x <= 1.0))
      throw InvalidArgument("increment_on_points: evaluation point outside [0, 1]");
  auto row = path.row(step_index);
  std::vector<double> out(points.size(), 0.0);
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double x = points[j];
    if (x == 0.0 || x == 1.0) continue;
    double acc = 0.0;
    for (int k = 1; k <= spec.num_modes; ++k)
      acc += spec.weights[k - 1] * std::sin(k * std::numbers::pi * x) * row[k - 1];
    out[j] = spec.intensity * std::numbers::sqrt2 * acc;
  }
  return out;
}

}  // namespace snls
