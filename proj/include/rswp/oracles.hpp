#pragma once

// Closed-form and root-finding references for the grounded slab. These
// validate the solver and supply the effective index used by the 2D mode.

#include <cmath>
#include <string>

#include "rswp/constants.hpp"
#include "rswp/error.hpp"

namespace rswp::oracle {

/// Bound TM0 mode of a dielectric slab on a ground plane.
struct DispersionSolution {
  double f = 0.0;       // Hz
  double beta = 0.0;    // rad/m
  double n_eff = 0.0;   // beta / k0
  double alpha0 = 0.0;  // Np/m, decay into the air
  double kx1 = 0.0;     // rad/m, transverse wavenumber inside the slab
  double eps_r = 1.0;
  double thickness = 0.0;  // m

  double k0() const { return free_space_wavenumber(f); }
  /// Relative residual of kx1*tan(kx1*d) = eps_r*alpha0.
  double residual() const {
    const double lhs = kx1 * std::tan(kx1 * thickness);
    const double rhs = eps_r * alpha0;
    return std::abs(lhs - rhs) / std::abs(rhs);
  }
};

inline constexpr int kBisectionMaxIter = 2000;

/// Solves kx1*tan(kx1*d) = eps_r*alpha0 with kx1^2 + alpha0^2 =
/// (eps_r - 1)*k0^2 by bisection on alpha0. Bisecting on alpha0 rather than
/// beta keeps the near-cutoff case (alpha0 << k0) well conditioned.
inline DispersionSolution tm0_grounded_slab(double eps_r, double d, double f) {
  require(eps_r > 1.0, "tm0_grounded_slab: eps_r must exceed 1");
  require(d > 0.0, "tm0_grounded_slab: slab thickness must be positive");
  require(f > 0.0, "tm0_grounded_slab: frequency must be positive");

  const double k0 = free_space_wavenumber(f);
  const double v2 = (eps_r - 1.0) * k0 * k0;
  auto kx1_of = [&](double a) { return std::sqrt(std::max(v2 - a * a, 0.0)); };
  auto g = [&](double a) {
    const double kx = kx1_of(a);
    return kx * std::tan(kx * d) - eps_r * a;
  };

  // TM0 lives on the first tangent branch: kx1*d < pi/2.
  double lo = 0.0;
  const double kx_branch = kPi / (2.0 * d);
  if (v2 > kx_branch * kx_branch) lo = std::sqrt(v2 - kx_branch * kx_branch);
  double hi = std::sqrt(v2);
  lo = std::nextafter(lo, hi);
  hi = std::nextafter(hi, lo);

  if (!(g(lo) > 0.0 && g(hi) < 0.0)) {
    throw Error("tm0_grounded_slab: failed to bracket a bound TM0 root");
  }
  for (int it = 0; it < kBisectionMaxIter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket is one ulp wide
    if (g(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  DispersionSolution s;
  s.f = f;
  s.alpha0 = 0.5 * (lo + hi);
  s.beta = std::sqrt(k0 * k0 + s.alpha0 * s.alpha0);
  s.n_eff = s.beta / k0;
  s.kx1 = kx1_of(s.alpha0);
  s.eps_r = eps_r;
  s.thickness = d;
  return s;
}

/// Air-side decay constant of a TM surface wave over a reactive plane,
/// alpha0 = k0 * Xs / eta0.
inline double impedance_wave_decay(double xs_ohm, double f) {
  require(xs_ohm >= 0.0, "impedance_wave_decay: reactance must be non-negative");
  return free_space_wavenumber(f) * xs_ohm / kEta0;
}

/// Thin-slab inductive reactance (eta0/sqrt(eps_r)) * tan(k0*sqrt(eps_r)*d).
inline double surface_impedance_slab(double eps_r, double d, double f) {
  require(eps_r >= 1.0 && d >= 0.0, "surface_impedance_slab: bad slab parameters");
  const double n = std::sqrt(eps_r);
  const double arg = free_space_wavenumber(f) * n * d;
  if (arg >= kPi / 2.0) {
    throw PreconditionError("surface_impedance_slab: k0*sqrt(eps_r)*d reaches the tan singularity");
  }
  return kEta0 / n * std::tan(arg);
}

inline double skin_depth(double sigma, double f) {
  require(sigma > 0.0, "skin_depth: conductivity must be positive");
  require(f > 0.0, "skin_depth: frequency must be positive");
  return 1.0 / std::sqrt(kPi * f * kMu0 * sigma);
}

/// Amplitude loss in dB of a cylindrical wave between radii r1 and r2.
inline double spreading_db(double r1, double r2) {
  require(r1 > 0.0 && r2 >= r1, "spreading_db: need 0 < r1 <= r2");
  return 10.0 * std::log10(r2 / r1);
}

/// Attenuation (Np/m) of the TM0 mode from dielectric loss, by first-order
/// perturbation eps_r -> eps_r(1 - j tan_delta): alpha = eps_r tan_delta dbeta/deps_r.
inline double tm0_dielectric_attenuation(double eps_r, double tan_delta, double d, double f) {
  require(tan_delta >= 0.0, "tm0_dielectric_attenuation: tan_delta must be non-negative");
  if (tan_delta == 0.0) return 0.0;
  const double h = 1e-4 * (eps_r - 1.0);
  const double bp = tm0_grounded_slab(eps_r + h, d, f).beta;
  const double bm = tm0_grounded_slab(eps_r - h, d, f).beta;
  return eps_r * tan_delta * (bp - bm) / (2.0 * h);
}

}  // namespace rswp::oracle
