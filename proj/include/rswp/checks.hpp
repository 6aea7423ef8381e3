#pragma once

// Solver self-checks with closed-form expectations: energy conservation,
// numerical phase velocity and absorber reflection.

#include <algorithm>
#include <cmath>
#include <vector>

#include "rswp/boundaries.hpp"
#include "rswp/constants.hpp"
#include "rswp/fdtd2d.hpp"
#include "rswp/fdtd3d.hpp"
#include "rswp/grid.hpp"
#include "rswp/harness.hpp"
#include "rswp/oracles.hpp"
#include "rswp/presets.hpp"
#include "rswp/run.hpp"

namespace rswp::check {

namespace detail {

inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t q = 0; q < x.size(); ++q) {
    sx += x[q];
    sy += y[q];
    sxx += x[q] * x[q];
    sxy += x[q] * y[q];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

/// Relative change of the discrete field energy over `steps` free steps in
/// a closed, lossless PEC box after a short pulse has been injected.
inline double pec_box_energy_drift(std::size_t n = 24, std::size_t steps = 1000) {
  const double d = 1.0 * kMm;
  const auto g = uniform_grid(n, n, n, d, Material::vacuum(), 0, false);
  const double dt = cfl_dt(d, 0.99, 3);
  Fdtd3D<double> s(g, dt, cpml_profile(6, 3.0, 1e-6, d));
  const std::size_t c = s.node(n / 2, n / 2, n / 2);
  const double t0 = 40 * dt, tw = 10 * dt;
  for (std::size_t q = 0; q < 100; ++q) {
    s.step();
    const double t = (q + 1) * dt;
    s.add_to_ez(c, std::exp(-((t - t0) / tw) * ((t - t0) / tw)));
  }
  const double e0 = s.conserved_energy();
  for (std::size_t q = 0; q < steps; ++q) s.step();
  return std::abs(s.conserved_energy() - e0) / e0;
}

/// Relative phase-velocity error along a grid axis of a CW wave in vacuum at
/// `cells_per_lambda`, from the phase slope of the outgoing cylindrical wave
/// of a 2D line source (large-argument Hankel phase removed).
inline double vacuum_phase_velocity_error(double cells_per_lambda) {
  require(cells_per_lambda >= 10.0, "phase velocity check: need at least 10 cells per wavelength");
  const double f = 30 * kGHz;
  const double lam = kC0 / f;
  const double d = lam / cells_per_lambda;
  const int L = 12;
  const auto cells = [&](double w) { return static_cast<std::size_t>(std::llround(w * cells_per_lambda)); };
  const std::size_t nx = cells(11.0) + 2 * L, ny = cells(5.0) + 2 * L;
  auto g = uniform_grid(nx, ny, 1, d, Material::vacuum(), L, true);
  const double dt = run_dt(d, 0.99, 2, f);
  Fdtd2D<double> s(g, dt, cpml_profile(L, 3.0, 1e-8, d, 1.0, f));
  const std::size_t is = L + cells(1.5), js = ny / 2;
  Transducer src;
  src.f0 = f;
  src.ramp_periods = 5.0;
  std::vector<Probe> probes;
  const std::size_t i0 = is + cells(4.0), i1 = is + cells(8.0);
  for (std::size_t i = i0; i <= i1; ++i) {
    probes.push_back({"x", {g.origin.x + i * d, g.origin.y + js * d, 0.0}, ProbeComponent::En, ProbeLine::Free, 0.0});
  }
  StopRule stop;
  stop.window_periods = 5.0;
  stop.min_periods = 25.0;
  stop.steady_tol_db = 1e-3;
  stop.max_steps = static_cast<std::size_t>(std::lround(60.0 / (f * dt)));
  const auto rec = run(s, {{is, js, 0, 1.0}}, src, probes, stop);

  const double k0 = 2.0 * kPi / lam;
  std::vector<double> r, ph;
  double prev = 0.0, unwrap = 0.0;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const double raw = -std::arg(rec.probes[p].phasor);
    if (p > 0) {
      double step = raw - prev;
      while (step < -kPi) step += 2.0 * kPi;
      while (step > kPi) step -= 2.0 * kPi;
      unwrap += step;
    } else {
      unwrap = raw;
    }
    prev = raw;
    const double dist = (i0 + p - is) * d;
    r.push_back(dist);
    ph.push_back(unwrap + 1.0 / (8.0 * k0 * dist));
  }
  return std::abs(k0 / detail::slope(r, ph) - 1.0);
}

/// Peak reflected field from the +x absorber relative to the peak incident
/// field, in dB, for a broadband pulse centered on f0 hitting the layer
/// head-on. The reflection is isolated by subtracting a run in a domain long
/// enough that its own boundary echo arrives after the observation window.
inline double cpml_normal_reflection_db(int layers = 10, double cells_per_lambda = 20.0) {
  const double f = 30 * kGHz;
  const double d = kC0 / f / cells_per_lambda;
  const double dt = cfl_dt(d, 0.99, 2);
  const std::size_t gap = 60, ny = 160, extra = 600;
  const std::size_t nx = 2 * layers + 40 + gap;
  const auto spec = cpml_profile(layers, 3.0, 1e-6, d, 1.0, f);
  auto g_test = uniform_grid(nx, ny, 1, d, Material::vacuum(), layers, true);
  auto g_ref = uniform_grid(nx + extra, ny, 1, d, Material::vacuum(), layers, true);
  Fdtd2D<double> a(g_test, dt, spec), b(g_ref, dt, spec);
  const std::size_t is = layers + 40, js = ny / 2, ip = is + gap / 2;
  const std::size_t sa = a.node(is, js, 0), sb = b.node(is, js, 0);
  const std::size_t pa = a.node(ip, js, 0), pb = b.node(ip, js, 0);
  const double tw = 1.0 / (f * 1.5), t0 = 4.0 * tw;
  // Echo from the far end of the reference domain arrives after this.
  const auto window = static_cast<std::size_t>((extra + gap) * d / kC0 / dt);
  double inc = 0.0, refl = 0.0;
  for (std::size_t q = 0; q < window; ++q) {
    a.step();
    b.step();
    const double t = (q + 1) * dt;
    const double x = (t - t0) / tw;
    const double v = std::exp(-x * x) * std::sin(2.0 * kPi * f * (t - t0));
    a.add_to_ez(sa, v);
    b.add_to_ez(sb, v);
    const double ea = a.field(Component::Ez)[pa], eb = b.field(Component::Ez)[pb];
    inc = std::max(inc, std::abs(eb));
    refl = std::max(refl, std::abs(ea - eb));
  }
  return 20.0 * std::log10(refl / inc);
}

struct ModeLaunch {
  double beta = 0.0;         // measured, rad/m
  double beta_oracle = 0.0;  // tm0_grounded_slab
  double decay = 0.0;        // measured 1/e height above the slab, m
  double decay_oracle = 0.0;
  std::size_t cells = 0;
  std::size_t steps = 0;
  double wall_seconds = 0.0;
  bool steady = false;
};

/// Full 3D run of the bare grounded slab driven by a TM0-profiled aperture.
/// beta comes from the phase slope along the axis between 3 and `length`
/// wavelengths; the decay height from a log-linear fit of |Ez| from 0.5 mm
/// up to one decay length above the slab, 2 wavelengths before the end.
inline ModeLaunch tm0_launch_3d(double length_lambda = 8.0, double delta = 0.25 * kMm, std::size_t threads = 1) {
  require(length_lambda >= 5.0, "tm0_launch_3d: need at least 5 wavelengths of path");
  PresetOptions o;
  o.mode = SolverMode::ThreeD;
  o.delta = delta;
  o.path_lambda = length_lambda;
  o.air_above_bars = 14.0 * kMm;
  RswpScene s = make_preset("surface_only", o);
  s.name = "tm0_launch";
  s.source.profile = SourceProfile::Tm0Mode;
  s.solver.max_periods = 120.0;

  const auto sol = oracle::tm0_grounded_slab(s.slab.eps_r, s.slab.thickness, s.source.f0);
  const double lam = s.lambda0(), top = s.slab_top();
  const double h_ref = 1.0 / sol.alpha0;
  s.probes.probes.clear();
  std::vector<double> xs, zs;
  for (double x = 3.0 * lam; x <= length_lambda * lam + 1e-12; x += delta) {
    xs.push_back(x);
    s.probes.probes.push_back({"x", {x, 0.0, top + 1.0 * kMm}, ProbeComponent::En, ProbeLine::Free, x / lam});
  }
  const double xz = (length_lambda - 2.0) * lam;
  for (double z = 0.5 * kMm; z <= 0.5 * kMm + h_ref + 1e-12; z += delta) {
    zs.push_back(z);
    s.probes.probes.push_back({"z", {xz, 0.0, top + z}, ProbeComponent::En, ProbeLine::Free, xz / lam});
  }
  SimulationOptions opt;
  opt.threads = threads;
  const Simulation sim = simulate(s, opt);

  std::vector<double> ph, lnm;
  double prev = 0.0, acc = 0.0;
  for (std::size_t q = 0; q < xs.size(); ++q) {
    const double raw = -std::arg(sim.rows[q].phasor);
    double step = q ? raw - prev : raw;
    if (q) {
      while (step < -kPi) step += 2.0 * kPi;
      while (step > kPi) step -= 2.0 * kPi;
    }
    acc = q ? acc + step : raw;
    prev = raw;
    ph.push_back(acc);
  }
  for (std::size_t q = 0; q < zs.size(); ++q) lnm.push_back(std::log(std::abs(sim.rows[xs.size() + q].phasor)));

  ModeLaunch m;
  m.beta = detail::slope(xs, ph);
  m.beta_oracle = sol.beta;
  m.decay = -1.0 / detail::slope(zs, lnm);
  m.decay_oracle = h_ref;
  m.cells = sim.cells;
  m.steps = sim.record.steps;
  m.wall_seconds = sim.record.wall_seconds;
  m.steady = sim.record.steady;
  return m;
}

}  // namespace rswp::check
