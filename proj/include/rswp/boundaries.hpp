#pragma once

// Update coefficients for lossy media and the CPML grading profiles.

#include <cmath>
#include <vector>

#include "rswp/constants.hpp"
#include "rswp/error.hpp"
#include "rswp/scene.hpp"

namespace rswp {

/// E-update coefficients: E <- ca*E + cb*(curl H), with the curl taken as
/// plain neighbour differences (cb carries the 1/delta).
struct UpdateCoeffs {
  double ca = 1.0;
  double cb = 0.0;
};

inline UpdateCoeffs lossy_coeffs(double eps_r, double sigma, double dt, double delta) {
  require(dt > 0.0 && delta > 0.0, "lossy_coeffs: dt and delta must be positive");
  const double eps = kEps0 * eps_r;
  const double loss = sigma * dt / (2.0 * eps);
  return {(1.0 - loss) / (1.0 + loss), dt / (eps * delta) / (1.0 + loss)};
}

/// Coefficients for `m` at frequency f: dielectric loss enters as the
/// equivalent conductivity omega*eps0*eps_r*tan_delta; PEC pins E to zero.
inline UpdateCoeffs lossy_coeffs(const Material& m, double dt, double delta, double f) {
  if (m.is_pec()) return {0.0, 0.0};
  return lossy_coeffs(m.eps_r, m.effective_sigma(f), dt, delta);
}

struct CpmlSpec {
  int layers = 10;
  double order = 3.0;
  double r0 = 1e-6;
  double kappa_max = 5.0;
  double alpha_max = 0.0;  // S/m, complex-frequency shift at the inner edge
  double sigma_max = 0.0;  // S/m, from the reflection formula

  /// Grading at normalized depth rho in [0, 1] (0 = inner edge).
  double sigma(double rho) const { return sigma_max * std::pow(rho, order); }
  double kappa(double rho) const { return 1.0 + (kappa_max - 1.0) * std::pow(rho, order); }
  double alpha(double rho) const { return alpha_max * (1.0 - rho); }
};

/// Polynomial-graded CPML for a layer of `layers` cells of size `delta`
/// matched to a background of relative permittivity `eps_r_bg`:
/// sigma_max = -(m+1) ln(R0) / (2 eta L).
inline CpmlSpec cpml_profile(int layers, double order, double r0, double delta, double eps_r_bg = 1.0,
                             double f0 = 30e9, double kappa_max = 5.0) {
  require(layers >= 6, "cpml_profile: need at least 6 layers");
  require(r0 > 0.0 && r0 < 1.0, "cpml_profile: R0 must lie in (0, 1)");
  require(order >= 1.0, "cpml_profile: grading order must be >= 1");
  CpmlSpec s;
  s.layers = layers;
  s.order = order;
  s.r0 = r0;
  s.kappa_max = kappa_max;
  const double eta = kEta0 / std::sqrt(eps_r_bg);
  s.sigma_max = -(order + 1.0) * std::log(r0) / (2.0 * eta * layers * delta);
  // A small CFS shift keeps the layer well behaved for the slow, grazing
  // parts of the spectrum without hurting absorption near f0.
  s.alpha_max = 0.05 * 2.0 * kPi * f0 * kEps0 * eps_r_bg;
  return s;
}

/// Per-axis recursive-convolution coefficients. Index q refers to integer
/// nodes (E positions along this axis) for the `*_n` arrays and to half
/// nodes q + 1/2 (H positions) for the `*_h` arrays.
struct CpmlAxis {
  std::vector<double> b_n, c_n, inv_kappa_n;
  std::vector<double> b_h, c_h, inv_kappa_h;
  int lo_layers = 0, hi_layers = 0;
  std::size_t cells = 0;

  CpmlAxis() = default;
  CpmlAxis(std::size_t n, int lo, int hi, const CpmlSpec& spec, double dt, double eps_r_bg)
      : lo_layers(lo), hi_layers(hi), cells(n) {
    b_n.assign(n + 1, 0.0);
    c_n.assign(n + 1, 0.0);
    inv_kappa_n.assign(n + 1, 1.0);
    b_h.assign(n, 0.0);
    c_h.assign(n, 0.0);
    inv_kappa_h.assign(n, 1.0);
    const double eps = kEps0 * eps_r_bg;
    auto fill = [&](double pos, double& b, double& c, double& ik) {
      double rho = 0.0;
      if (lo > 0 && pos < lo) rho = (lo - pos) / lo;
      if (hi > 0 && pos > double(n) - hi) rho = (pos - (double(n) - hi)) / hi;
      rho = std::min(rho, 1.0);
      if (rho <= 0.0) return;
      const double sg = spec.sigma(rho), kp = spec.kappa(rho), al = spec.alpha(rho);
      b = std::exp(-(sg / kp + al) * dt / eps);
      c = sg > 0.0 ? sg / (sg * kp + kp * kp * al) * (b - 1.0) : 0.0;
      ik = 1.0 / kp;
    };
    for (std::size_t q = 0; q <= n; ++q) fill(double(q), b_n[q], c_n[q], inv_kappa_n[q]);
    for (std::size_t q = 0; q < n; ++q) fill(q + 0.5, b_h[q], c_h[q], inv_kappa_h[q]);
  }

  bool in_layer_n(std::size_t q) const { return q < std::size_t(lo_layers) || q > cells - hi_layers; }
};

}  // namespace rswp
