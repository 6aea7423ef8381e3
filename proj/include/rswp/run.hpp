#pragma once

// Time-stepping orchestration: CFL, soft-source drive, probe DFT windows,
// steady-state detection and blow-up guard.

#include <chrono>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "rswp/constants.hpp"
#include "rswp/error.hpp"
#include "rswp/excitation.hpp"
#include "rswp/fdtd3d.hpp"
#include "rswp/instrumentation.hpp"
#include "rswp/scene.hpp"

namespace rswp {

/// Courant limit for cubic cells: safety * delta / (c sqrt(dims)).
inline double cfl_dt(double delta, double safety, int dims = 3) {
  require(delta > 0.0, "cfl_dt: delta must be positive");
  require(safety > 0.0 && safety <= 1.0, "cfl_dt: safety must lie in (0, 1]");
  require(dims == 2 || dims == 3, "cfl_dt: dims must be 2 or 3");
  return safety * delta / (kC0 * std::sqrt(double(dims)));
}

/// Largest dt below the CFL bound that divides the source period into a
/// whole number of steps, so DFT windows cover exact periods.
inline double run_dt(double delta, double safety, int dims, double f0, int* steps_per_period = nullptr) {
  const double T = 1.0 / f0;
  const int n = static_cast<int>(std::ceil(T / cfl_dt(delta, safety, dims) - 1e-9));
  if (steps_per_period) *steps_per_period = n;
  return T / n;
}

inline constexpr double kBlowUpFactor = 1e6;
/// Probes weaker than this fraction of the strongest probe are left out of
/// the steady-state test (their dB swings are rounding noise).
inline constexpr double kSteadyRelFloor = 1e-6;

/// True iff every probe's magnitude changed by less than tol_db between the
/// last two windows. Probes below rel_floor * (strongest probe) in both
/// windows are exempt, including probes that stay exactly zero (inside a
/// PEC region). With rel_floor = 0 a zero probe blocks convergence.
inline bool steady_state_check(const std::vector<std::vector<double>>& windows, double tol_db,
                               double rel_floor = 0.0) {
  require(windows.size() >= 2, "steady_state_check: need at least two completed windows");
  const auto& a = windows[windows.size() - 2];
  const auto& b = windows.back();
  require(a.size() == b.size(), "steady_state_check: probe count changed between windows");
  double peak = 0.0;
  for (double m : b) peak = std::max(peak, m);
  const double floor = rel_floor * peak;
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (a[p] < floor && b[p] < floor) continue;
    if (a[p] == 0.0 || b[p] == 0.0) {
      if (a[p] == 0.0 && b[p] == 0.0 && peak == 0.0) continue;
      return false;
    }
    if (std::abs(20.0 * std::log10(b[p] / a[p])) >= tol_db) return false;
  }
  return true;
}

struct StopRule {
  std::size_t max_steps = 0;
  double window_periods = 10.0;
  double steady_tol_db = 0.1;
  double min_periods = 0.0;  // no steady verdict before this time
  bool stop_when_steady = true;
};

/// A plane of E nodes whose phasors are accumulated alongside the probes.
struct SliceRequest {
  Component component = Component::Ez;
  SliceAxis axis = SliceAxis::Z;
  std::size_t offset = 0;
  FieldSlice result;  // filled with the last completed window
};

struct RunRecord {
  std::size_t steps = 0;
  double wall_seconds = 0.0;
  bool steady = false;
  double dt = 0.0;
  int steps_per_period = 0;
  std::vector<ProbeRecord> probes;
  std::vector<std::vector<double>> window_mags;  // per window, per probe |phasor|
  std::vector<double> field_max;                  // max |E| at each period end
  std::string diagnostic;

  std::vector<Phasor> phasors() const {
    std::vector<Phasor> out;
    for (const auto& p : probes) out.push_back(p.phasor);
    return out;
  }
};

template <class Solver>
RunRecord run(Solver& solver, const std::vector<SourceNode>& sources, const Transducer& src,
              const std::vector<Probe>& probes, const StopRule& stop, std::vector<SliceRequest>* slices = nullptr) {
  using Real = std::remove_reference_t<decltype(solver.field(Component::Ez)[0])>;
  const auto t_start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.dt = solver.dt();
  const double T = 1.0 / src.f0;
  rec.steps_per_period = static_cast<int>(std::lround(T / rec.dt));
  if (std::abs(rec.steps_per_period * rec.dt - T) > 1e-9 * T) {
    throw PreconditionError("run: dt must divide the source period (use run_dt)");
  }
  const std::size_t N = static_cast<std::size_t>(rec.steps_per_period);
  require(stop.window_periods >= 1.0 && std::abs(stop.window_periods - std::round(stop.window_periods)) < 1e-12,
          "run: DFT window must be a whole number of periods");
  const auto window_periods = std::llround(stop.window_periods);
  const std::size_t window_steps = N * std::size_t(window_periods);
  const std::size_t first_window = N * static_cast<std::size_t>(std::ceil(src.ramp_periods - 1e-9));
  const auto min_step = static_cast<std::size_t>(std::ceil(stop.min_periods * N - 1e-9));

  std::vector<std::size_t> src_idx;
  std::vector<double> src_w;
  for (const auto& s : sources) {
    src_idx.push_back(solver.node(s.i, s.j, s.k));
    src_w.push_back(s.weight);
  }
  std::vector<PointStencil> stencils;
  for (const auto& p : probes) {
    const Component c = p.component == ProbeComponent::En       ? Component::Ez
                        : p.component == ProbeComponent::EtLong ? Component::Ex
                                                                : Component::Ey;
    stencils.push_back(solver.stencil(c, p.position));
    ProbeRecord r;
    r.id = p.id;
    r.f0 = src.f0;
    r.dt = rec.dt;
    rec.probes.push_back(std::move(r));
  }

  struct SliceAcc {
    std::vector<std::size_t> idx;
    std::vector<std::complex<double>> acc;
    std::uint32_t nx = 0, ny = 0;
  };
  std::vector<SliceAcc> slice_acc;
  if (slices) {
    const auto d = solver.dims();
    for (auto& s : *slices) {
      SliceAcc a;
      const std::size_t n0 = d[0] + 1, n1 = d[1] + 1, n2 = d[2] + 1;
      auto push = [&](std::size_t i, std::size_t j, std::size_t k) { a.idx.push_back(solver.node(i, j, k)); };
      if (s.axis == SliceAxis::Z) {
        a.nx = std::uint32_t(n0);
        a.ny = std::uint32_t(n1);
        for (std::size_t j = 0; j < n1; ++j)
          for (std::size_t i = 0; i < n0; ++i) push(i, j, s.offset);
      } else if (s.axis == SliceAxis::Y) {
        a.nx = std::uint32_t(n0);
        a.ny = std::uint32_t(n2);
        for (std::size_t k = 0; k < n2; ++k)
          for (std::size_t i = 0; i < n0; ++i) push(i, s.offset, k);
      } else {
        a.nx = std::uint32_t(n1);
        a.ny = std::uint32_t(n2);
        for (std::size_t k = 0; k < n2; ++k)
          for (std::size_t j = 0; j < n1; ++j) push(s.offset, j, k);
      }
      a.acc.assign(a.idx.size(), {});
      slice_acc.push_back(std::move(a));
    }
  }

  const double limit = kBlowUpFactor * std::abs(src.amplitude);
  const double w0 = 2.0 * kPi * src.f0;
  std::size_t in_window = 0;

  for (std::size_t n = 0; n < stop.max_steps; ++n) {
    solver.step();
    const std::size_t step = n + 1;
    const double t = double(step) * rec.dt;
    const double drive = aperture_waveform(t, src);
    for (std::size_t q = 0; q < src_idx.size(); ++q) solver.add_to_ez(src_idx[q], static_cast<Real>(src_w[q] * drive));

    if (step > first_window) {
      // Phase reduced modulo the period keeps cos/sin exact over long runs.
      const double ph = w0 * (double((step) % N) * rec.dt);
      const double c = std::cos(ph), s = std::sin(ph);
      for (std::size_t p = 0; p < stencils.size(); ++p) {
        dft_accumulate(rec.probes[p], solver.sample(stencils[p]), c, s);
      }
      for (std::size_t q = 0; q < slice_acc.size(); ++q) {
        auto& a = slice_acc[q];
        const auto& f = solver.field((*slices)[q].component);
        const std::complex<double> tw(c * rec.dt, s * rec.dt);
        for (std::size_t m = 0; m < a.idx.size(); ++m) a.acc[m] += double(f[a.idx[m]]) * tw;
      }
      ++in_window;
    }

    if (step % N == 0) {
      const double fm = solver.max_abs_field();
      rec.field_max.push_back(fm);
      if (!(fm <= limit)) {
        rec.steps = step;
        rec.diagnostic = "blow-up at step " + std::to_string(step) + ": max |E| = " + std::to_string(fm);
        throw BlowUpError(rec.diagnostic);
      }
    }

    if (in_window == window_steps) {
      std::vector<double> mags;
      for (auto& r : rec.probes) {
        r.phasor = window_phasor(r, double(window_periods));
        r.finalized = true;
        r.window_history.push_back(r.phasor);
        mags.push_back(std::abs(r.phasor));
        r.reset_window();
      }
      rec.window_mags.push_back(std::move(mags));
      for (std::size_t q = 0; q < slice_acc.size(); ++q) {
        auto& a = slice_acc[q];
        auto& out = (*slices)[q].result;
        out.axis = (*slices)[q].axis;
        out.offset = (*slices)[q].offset;
        out.component = static_cast<std::uint32_t>((*slices)[q].component);
        out.nx = a.nx;
        out.ny = a.ny;
        out.spacing = solver.grid().delta;
        out.values.resize(a.acc.size());
        const double scale = 2.0 / (double(window_periods) * T);
        for (std::size_t m = 0; m < a.acc.size(); ++m) {
          out.values[m] = scale * a.acc[m];
          a.acc[m] = {};
        }
      }
      in_window = 0;
      if (rec.window_mags.size() >= 2 && step >= min_step &&
          steady_state_check(rec.window_mags, stop.steady_tol_db, kSteadyRelFloor)) {
        rec.steady = true;
        if (stop.stop_when_steady) {
          rec.steps = step;
          break;
        }
      } else {
        rec.steady = false;
      }
    }
    rec.steps = step;
  }
  if (!rec.steady && stop.max_steps > 0) {
    rec.diagnostic = "no steady state within " + std::to_string(stop.max_steps) + " steps";
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rec;
}

}  // namespace rswp
