#pragma once

// Transducer drive: a ramped CW waveform applied as a soft E_z source over
// the aperture rectangle.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "rswp/constants.hpp"
#include "rswp/error.hpp"
#include "rswp/grid.hpp"
#include "rswp/oracles.hpp"
#include "rswp/scene.hpp"

namespace rswp {

/// Raised-cosine envelope rising from 0 to 1 over `ramp_periods` periods.
inline double ramp_envelope(double t, double f0, double ramp_periods) {
  const double tr = ramp_periods / f0;
  if (t <= 0.0) return 0.0;
  if (t >= tr) return 1.0;
  return 0.5 * (1.0 - std::cos(kPi * t / tr));
}

/// A * g(t) * sin(2 pi f0 t).
inline double aperture_waveform(double t, const Transducer& src) {
  require(t >= 0.0, "aperture_waveform: t must be non-negative");
  return src.amplitude * ramp_envelope(t, src.f0, src.ramp_periods) * std::sin(2.0 * kPi * src.f0 * t);
}

/// Relative E_z amplitude of the TM0 mode at height z above the slab top:
/// exp(-alpha0 z) in air; inside the slab (-d <= z < 0) the cosine
/// standing profile divided by eps_r (continuity of normal D).
inline double mode_profile(const std::optional<oracle::DispersionSolution>& dispersion, double z) {
  if (!dispersion) throw PreconditionError("mode_profile: dispersion not solved");
  const auto& s = *dispersion;
  if (z >= 0.0) return std::exp(-s.alpha0 * z);
  require(z >= -s.thickness, "mode_profile: z below the ground plane");
  return std::cos(s.kx1 * (z + s.thickness)) / std::cos(s.kx1 * s.thickness) / s.eps_r;
}

/// One driven E_z node: grid node indices plus a weight multiplying the
/// waveform.
struct SourceNode {
  std::size_t i = 0, j = 0, k = 0;
  double weight = 1.0;
};

/// Drive nodes for the aperture on `grid`. The aperture is a rectangle
/// normal to `src.facing` through `src.center`; its width runs along the
/// surface and its height up from the slab top. E_z sits at nodes (i, j)
/// and half-node heights k + 1/2.
inline std::vector<SourceNode> source_footprint(const MaterialGrid& grid, const Transducer& src,
                                                double slab_top,
                                                const std::optional<oracle::DispersionSolution>& disp = {}) {
  const double d = grid.delta;
  const bool along_x = std::abs(src.facing.x) > 0.5;
  if (std::abs(src.facing.x * src.facing.y) > 1e-12) {
    throw PreconditionError("source_footprint: aperture must face a grid axis");
  }
  auto node = [&](double v, double o) { return static_cast<long>(std::llround((v - o) / d)); };
  std::vector<SourceNode> out;
  const long ic = node(src.center.x, grid.origin.x);
  const long jc = node(src.center.y, grid.origin.y);
  const double half_w = 0.5 * src.aperture_width;
  std::vector<std::pair<long, long>> columns;
  if (along_x) {
    for (long j = 0; j <= long(grid.ny); ++j) {
      const double y = grid.origin.y + j * d;
      if (std::abs(y - src.center.y) <= half_w + 1e-12) columns.emplace_back(ic, j);
    }
  } else {
    for (long i = 0; i <= long(grid.nx); ++i) {
      const double x = grid.origin.x + i * d;
      if (std::abs(x - src.center.x) <= half_w + 1e-12) columns.emplace_back(i, jc);
    }
  }
  const bool mode = src.profile == SourceProfile::Tm0Mode;
  const double z_lo = mode ? 0.0 : slab_top;
  const double z_hi = slab_top + src.aperture_height;
  for (auto [i, j] : columns) {
    if (i <= 0 || j <= 0 || i >= long(grid.nx) || j >= long(grid.ny)) continue;
    if (grid.two_d) {
      out.push_back({std::size_t(i), std::size_t(j), 0, 1.0});
      continue;
    }
    for (std::size_t k = 0; k < grid.nz; ++k) {
      const double z = grid.origin.z + (k + 0.5) * d;
      if (z < z_lo || z > z_hi) continue;
      const double w = mode ? mode_profile(disp, z - slab_top) : 1.0;
      out.push_back({std::size_t(i), std::size_t(j), k, w});
    }
  }
  if (out.empty()) throw PreconditionError("source_footprint: aperture covers no grid nodes");
  return out;
}

}  // namespace rswp
