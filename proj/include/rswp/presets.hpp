#pragma once

// Built-in experiment presets with the platform's published parameters.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rswp/constants.hpp"
#include "rswp/error.hpp"
#include "rswp/scene.hpp"

namespace rswp {

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"straight_galinstan", "straight_copper", "pec_walls", "surface_only",
                                              "l_turn_galinstan"};
  return names;
}

inline bool is_preset(const std::string& name) {
  const auto& n = preset_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

/// Knobs a preset leaves open. Lengths in free-space wavelengths.
struct PresetOptions {
  SolverMode mode = SolverMode::TwoD;
  double path_lambda = 50.0;   // straight presets
  double leg1_lambda = 35.0;   // L-turn
  double leg2_lambda = 15.0;
  double delta = 0.25 * kMm;
  double lead_in_lambda = 1.0;  // rows behind the source when not run into the absorber
  bool walls_into_absorber = true;
  double margin_lambda = 1.5;   // clearance between probes/geometry and absorber
  double air_above_bars = 10.0 * kMm;  // 3D only
  bool mitered = false;
  bool row_sep_is_inner_gap = true;
  bool straight_control = false;  // L-turn preset replaced by a straight path of the same length
};

namespace detail {

inline void fit_domain(RswpScene& s, double margin) {
  double x0 = s.source.center.x, x1 = x0, y0 = s.source.center.y, y1 = y0;
  auto grow = [&](Vec2 p, double pad) {
    x0 = std::min(x0, p.x - pad);
    x1 = std::max(x1, p.x + pad);
    y0 = std::min(y0, p.y - pad);
    y1 = std::max(y1, p.y + pad);
  };
  for (const auto& p : s.probes.probes) grow(p.position.xy(), 0.0);
  // The channel cross-section around every path vertex stays inside.
  for (const auto& v : s.fill.path.vertices) grow(v, 0.5 * s.lattice.row_center_sep() + s.lattice.radius);
  grow(s.source.center.xy(), 0.5 * s.source.aperture_width);
  s.domain.lo = {x0 - margin, y0 - margin, 0.0};
  s.domain.hi = {x1 + margin, y1 + margin, s.slab_top() + s.lattice.height};
}

/// Distance from `p` along `dir` to the far side of the absorber.
inline double run_out(const RswpScene& s, Vec2 p, Vec2 dir) {
  const double pad = (s.solver.cpml_layers + 2) * s.solver.delta;
  double t = 0.0;
  if (dir.x > 0.5) t = s.domain.hi.x - p.x;
  if (dir.x < -0.5) t = p.x - s.domain.lo.x;
  if (dir.y > 0.5) t = s.domain.hi.y - p.y;
  if (dir.y < -0.5) t = p.y - s.domain.lo.y;
  return std::max(t, 0.0) + pad;
}

}  // namespace detail

/// Rebuilds the path, probes, domain and fill of `s` from its lattice and
/// the named layout. Fill materials must already resolve in `s.materials`.
/// With `walls_into_absorber` the rows continue through the absorber at
/// both ends of the path, so the channel has no open ends inside the domain.
inline void apply_layout(RswpScene& s, const std::string& layout, const std::string& material, WallMode mode,
                         const PresetOptions& o) {
  const double lam = s.lambda0();
  s.lattice.row_sep_is_inner_gap = o.row_sep_is_inner_gap;
  const Vec2 start = s.lattice.origin;
  const Vec2 ax = s.lattice.axis;
  s.fill = FillPattern{};
  double tilt_extent;
  if (layout == "straight" || layout == "none") {
    s.fill.path.vertices = {start, start + (o.path_lambda * lam) * ax};
    tilt_extent = o.path_lambda;
  } else if (layout == "l_turn") {
    const Vec2 c = start + (o.leg1_lambda * lam) * ax;
    s.fill.path.vertices = {start, c, c + (o.leg2_lambda * lam) * s.lattice.normal()};
    tilt_extent = o.leg1_lambda;
  } else {
    throw ValidationError("fill.pattern", "unknown layout '" + layout + "'");
  }
  s.probes = gen_probe_lines(s.fill.path, lam, s.slab_top(), 1.0, 5.0, tilt_extent);
  detail::fit_domain(s, o.margin_lambda * lam);
  s.domain.hi.z = s.slab_top() + s.lattice.height + o.air_above_bars;
  if (layout == "none") return;

  const auto& v = s.fill.path.vertices;
  const Vec2 last_dir = (1.0 / (v.back() - v[v.size() - 2]).norm()) * (v.back() - v[v.size() - 2]);
  const double lead_in = o.walls_into_absorber ? detail::run_out(s, start, -1.0 * ax) : o.lead_in_lambda * lam;
  const double lead_out = o.walls_into_absorber ? detail::run_out(s, v.back(), last_dir) : 0.0;
  BarLattice lat = s.lattice;
  lat.origin = start - lead_in * ax;
  const Pathway path = s.fill.path;
  if (layout == "straight") {
    s.fill = gen_straight(lat, lam, o.path_lambda + (lead_in + lead_out) / lam, material, s.materials, mode);
  } else {
    s.fill = gen_l_turn(lat, lam, o.leg1_lambda + lead_in / lam, o.leg2_lambda + lead_out / lam, material,
                        s.materials, mode, o.mitered);
  }
  s.fill.path = path;
}

/// Scene for one of the built-in presets.
inline RswpScene make_preset(const std::string& name, const PresetOptions& o = {}) {
  if (!is_preset(name)) throw ValidationError("scenario", "unknown scenario '" + name + "'");
  RswpScene s;
  s.name = name;
  s.solver.mode = o.mode;
  s.solver.delta = o.delta;
  s.source.center = {0.0, 0.0, s.slab_top() + 0.5 * s.source.aperture_height};
  if (name == "straight_galinstan") {
    apply_layout(s, "straight", "galinstan", WallMode::DiscreteBars, o);
  } else if (name == "straight_copper") {
    apply_layout(s, "straight", "copper", WallMode::DiscreteBars, o);
  } else if (name == "pec_walls") {
    apply_layout(s, "straight", "pec", WallMode::ContinuousWall, o);
  } else if (name == "surface_only") {
    apply_layout(s, "none", "", WallMode::DiscreteBars, o);
  } else {
    if (o.straight_control) {
      PresetOptions so = o;
      so.path_lambda = o.leg1_lambda + o.leg2_lambda;
      apply_layout(s, "straight", "galinstan", WallMode::DiscreteBars, so);
    } else {
      apply_layout(s, "l_turn", "galinstan", WallMode::DiscreteBars, o);
    }
  }
  s.validate();
  return s;
}

}  // namespace rswp
