// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails. `snls_acceptance <name>...` runs a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "experiments.hpp"
#include "noise.hpp"
#include "run_config.hpp"
#include "schemes.hpp"

using namespace snls;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Charge conservation: N=64, h=2^-6, tau=2^-8, T=1, eps=1, lambda=+-1, 10 trajectories.
Outcome charge_conservation() {
  const auto cfg = parse_config("preset = desk-charge\n");
  double worst_spectral = 0.0, worst_grid = 0.0;
  for (int sign : {1, -1}) {
    SchemeConfig scheme = cfg.setup.scheme;
    scheme.focusing_sign = sign;
    const auto spec = build_covariance(cfg.setup.resolution, cfg.setup.intensity);
    for (int t = 0; t < cfg.setup.trajectories; ++t) {
      const auto path = sample_path(spec, scheme.horizon, scheme.num_steps, cfg.setup.seed, t);
      auto track = [](double& worst) {
        return [&worst, q0 = -1.0](int, const auto& s) mutable {
          const double q = charge(s);
          if (q0 < 0) q0 = q;
          worst = std::max(worst, std::abs(q - q0) / q0);
        };
      };
      scheme.kind = SchemeKind::spectral;
      integrate(sine_initial_spectral(cfg.setup.resolution), scheme, path, spec, track(worst_spectral));
      scheme.kind = SchemeKind::finite_difference;
      // h = 2^-6 is 63 interior nodes
      integrate(sine_initial_grid(63), scheme, path, spec, track(worst_grid));
    }
  }
  return {worst_grid <= 1e-9 && worst_spectral <= 1e-7,
          "max relative charge drift fd " + num(worst_grid) + " (<= 1e-9), spectral " +
              num(worst_spectral) + " (<= 1e-7)"};
}

// Energy invariance of the deterministic sub-step over 10^3 random states.
Outcome energy_invariance() {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> amp(0.2, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int sign = trial % 2 ? 1 : -1;
    SchemeConfig c;
    c.focusing_sign = sign;
    const double dt = std::ldexp(1.0, -8);
    const double a = amp(rng);
    double before, after;
    if (trial % 4 < 2) {
      c.kind = SchemeKind::spectral;
      SpectralState u(64);
      for (int k = 1; k <= 64; ++k) u.coeffs[k - 1] = std::complex<double>(g(rng), g(rng)) * (a / (k * k));
      before = energy(u, sign);
      after = energy(cn_deterministic_step(u, dt, c), sign);
    } else {
      c.kind = SchemeKind::finite_difference;
      GridState u(63);
      for (int k = 1; k <= 8; ++k) {
        const std::complex<double> z(g(rng), g(rng));
        for (int n = 0; n < 63; ++n) u.values[n] += z * (a / (k * k)) * std::sin(k * std::numbers::pi * u.node(n));
      }
      before = energy(u, sign);
      after = energy(cn_deterministic_step(u, dt, c), sign);
    }
    worst = std::max(worst, std::abs(after - before) / std::abs(before));
  }
  return {worst <= 1e-8, "max per-step relative energy drift " + num(worst) + " (<= 1e-8)"};
}

// Linear oracle: lambda disabled, eps = 0, M = 2^10 steps against the Cayley rotation.
Outcome linear_oracle() {
  const int n = 64, steps = 1024;
  SchemeConfig c;
  c.linear_only = true;
  c.horizon = 1.0;
  c.num_steps = steps;
  const auto spec = build_covariance(n, 0.0);
  const auto path = sample_path(spec, c.horizon, steps, 1);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  SpectralState u(n);
  for (auto& z : u.coeffs) z = {g(rng), g(rng)};
  const auto end = integrate(u, c, path, spec, [](int, const SpectralState&) {});
  double worst = 0.0;
  const double dt = c.dt();
  for (int k = 1; k <= n; ++k) {
    const double theta = -2.0 * std::atan(dt * eigenvalue(k) / 2.0);
    const auto expected = u.coeffs[k - 1] * std::polar(1.0, theta * steps);
    worst = std::max(worst, std::abs(end.coeffs[k - 1] - expected));
  }
  return {worst <= 1e-12, "max per-mode deviation " + num(worst) + " (<= 1e-12)"};
}

Outcome temporal_order() {
  const auto cfg = parse_config("preset = desk-time\n");
  const auto table = strong_error_time(cfg.setup, cfg.resolutions, cfg.reference_steps);
  std::string errs;
  for (double e : table.errors) errs += (errs.empty() ? "" : ", ") + num(e);
  return {table.fitted_slope >= 0.35 && table.fitted_slope <= 0.75,
          "fitted_slope " + num(table.fitted_slope) + " (in [0.35, 0.75]); errors " + errs};
}

Outcome spatial_order() {
  const auto cfg = parse_config("preset = desk-space\n");
  const auto table = strong_error_space(cfg.setup, cfg.mode_counts, cfg.reference_modes);
  std::string errs;
  for (double e : table.errors) errs += (errs.empty() ? "" : ", ") + num(e);
  return {table.fitted_slope >= 1.5 && table.fitted_slope <= 2.5,
          "fitted_slope " + num(table.fitted_slope) + " (in [1.5, 2.5]); errors " + errs};
}

// alpha = 1, eps = 1, T = 10, N = 64, tau = 2^-8, P = 200.
Outcome exponential_moments() {
  const auto cfg = parse_config("preset = desk-moments\n");
  const auto series = run_ensemble(cfg.setup, cfg.snapshot_stride);
  int nonfinite = 0;
  for (const auto& e : series.energy)
    if (std::any_of(e.begin(), e.end(), [](double v) { return !std::isfinite(v); })) ++nonfinite;
  const auto logs = log_exp_moment_series(series.energy, series.times, 1.0);
  const double ratio = std::exp(*std::max_element(logs.begin(), logs.end()) - logs.front());
  const bool ok = series.failed.empty() && nonfinite == 0 && ratio <= 3.0;
  return {ok, "max_t E[exp(H e^{-t})] / value at t=0 = " + num(ratio) + " (<= 3); non-finite energies " +
                  std::to_string(nonfinite) + ", failed trajectories " + std::to_string(series.failed.size())};
}

// 10^3 sampled H1 norms at T = 1.
Outcome gaussian_tail() {
  const auto cfg = parse_config("preset = desk-tails\n");
  const auto series = run_ensemble(cfg.setup, cfg.setup.scheme.num_steps);
  std::vector<double> samples;
  for (const auto& h : series.h1) samples.push_back(h.back());
  const auto fit = tail_decay_fit(samples, cfg.thresholds);
  return {samples.size() == 1000 && fit.slope < 0.0,
          "slope of log P(||u||_H1 >= x) vs x^2 = " + num(fit.slope) + " (< 0) over " +
              std::to_string(fit.fitted_points) + " thresholds, " + std::to_string(samples.size()) + " samples"};
}

Outcome ito_drift_sign() {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> modes(1, 64);
  double minimum = INFINITY;
  for (int trial = 0; trial < 1000; ++trial) {
    SpectralState u(modes(rng));
    const double decay = 0.5 + (trial % 4) * 0.5;
    for (int k = 1; k <= u.num_modes(); ++k)
      u.coeffs[k - 1] = std::complex<double>(g(rng), g(rng)) / std::pow(k, decay);
    minimum = std::min(minimum, ito_charge_drift(u, build_covariance(modes(rng), 1.0)));
  }
  // A product u * sin(k pi x) of nonzero sine series is never a finite sine
  // series, so the only fully resolved products are the trivial ones.
  const auto u = sine_initial_spectral(16);
  const double zero_noise = ito_charge_drift(u, build_covariance(16, 0.0));
  const double zero_state = ito_charge_drift(SpectralState(16), build_covariance(16, 1.0));
  const double coarse = ito_charge_drift(sine_initial_spectral(8), build_covariance(4, 1.0));
  const double fine = ito_charge_drift(sine_initial_spectral(64), build_covariance(4, 1.0));
  const bool ok = minimum >= 0.0 && zero_noise == 0.0 && zero_state == 0.0 && fine < coarse;
  return {ok, "min over 1000 states " + num(minimum) + " (>= 0); eps=0 -> " + num(zero_noise) +
                  ", u=0 -> " + num(zero_state) + "; sin(pi x), K=4: N=8 " + num(coarse) + ", N=64 " + num(fine)};
}

Outcome determinism() {
  const auto cfg = parse_config("preset = desk-time\n");
  std::string reference;
  bool same = true;
  for (int workers : {1, 4, 8}) {
    auto setup = cfg.setup;
    setup.workers = workers;
    std::ostringstream out;
    write_error_table(strong_error_time(setup, cfg.resolutions, cfg.reference_steps), out);
    if (reference.empty())
      reference = out.str();
    else
      same = same && out.str() == reference;
  }
  return {same, "converge-time CSV at workers 1, 4, 8 is " + std::string(same ? "" : "not ") + "byte-identical"};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"charge_conservation", charge_conservation},
      {"energy_invariance", energy_invariance},
      {"linear_oracle", linear_oracle},
      {"temporal_order", temporal_order},
      {"spatial_order", spatial_order},
      {"exponential_moments", exponential_moments},
      {"gaussian_tail", gaussian_tail},
      {"ito_drift_sign", ito_drift_sign},
      {"determinism", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (argc > 1 && std::none_of(argv + 1, argv + argc, [&](const char* a) { return c.name == std::string(a); }))
      continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %-20s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
