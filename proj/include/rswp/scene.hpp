#pragma once

// Declarative description of a reconfigurable surface-wave experiment:
// grounded slab, conductive bar lattice with a fill pattern, aperture
// source and probe lines. All quantities are SI.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rswp/constants.hpp"
#include "rswp/error.hpp"
#include "rswp/vec.hpp"

namespace rswp {

// ---------------------------------------------------------------------------
// Materials

enum class MaterialKind { Vacuum, Dielectric, Conductor, PEC };

struct Material {
  MaterialKind kind = MaterialKind::Vacuum;
  double eps_r = 1.0;
  double sigma = 0.0;      // S/m
  double tan_delta = 0.0;  // dielectrics only

  static Material vacuum() { return {}; }
  static Material dielectric(double eps_r, double tan_delta) {
    return {MaterialKind::Dielectric, eps_r, 0.0, tan_delta};
  }
  static Material conductor(double sigma) { return {MaterialKind::Conductor, 1.0, sigma, 0.0}; }
  static Material pec() { return {MaterialKind::PEC, 1.0, 0.0, 0.0}; }

  bool is_pec() const { return kind == MaterialKind::PEC; }

  /// Conductivity seen by a narrowband run at f: conductor sigma plus the
  /// dielectric loss folded in as omega*eps0*eps_r*tan_delta.
  double effective_sigma(double f) const {
    return sigma + 2.0 * kPi * f * kEps0 * eps_r * tan_delta;
  }

  void validate(const std::string& where) const {
    if (!(eps_r >= 1.0)) throw ValidationError(where + ".eps_r", "relative permittivity must be >= 1");
    if (!(sigma >= 0.0)) throw ValidationError(where + ".sigma", "conductivity must be >= 0");
    if (!(tan_delta >= 0.0)) throw ValidationError(where + ".tan_delta", "loss tangent must be >= 0");
    if (kind == MaterialKind::PEC && (eps_r != 1.0 || sigma != 0.0 || tan_delta != 0.0)) {
      throw ValidationError(where, "PEC takes no other parameters");
    }
    if (kind != MaterialKind::Dielectric && tan_delta != 0.0) {
      throw ValidationError(where + ".tan_delta", "loss tangent applies to dielectrics only");
    }
  }
};

inline constexpr double kSigmaGalinstan = 3.46e6;
inline constexpr double kSigmaCopper = 59.6e6;

using MaterialTable = std::map<std::string, Material>;

inline MaterialTable default_materials() {
  return {
      {"vacuum", Material::vacuum()},
      {"air", Material::vacuum()},
      {"galinstan", Material::conductor(kSigmaGalinstan)},
      {"copper", Material::conductor(kSigmaCopper)},
      {"pec", Material::pec()},
  };
}

// ---------------------------------------------------------------------------
// Geometry

struct Slab {
  double eps_r = 2.2;
  double tan_delta = 0.0009;  // RT5880 datasheet value
  double thickness = 1.0 * kMm;

  Material material() const { return Material::dielectric(eps_r, tan_delta); }
};

struct BarLattice {
  double height = 5.0 * kMm;   // above the slab top
  double radius = 1.0 * kMm;
  double pitch = 4.0 * kMm;    // center-to-center along a row
  double row_sep = 6.0 * kMm;  // transverse spacing of the two rows
  bool row_sep_is_inner_gap = false;
  Vec2 origin{0.0, 0.0};  // channel axis at slot 0
  Vec2 axis{1.0, 0.0};    // unit, along the channel

  /// Center-to-center distance between the rows, whichever reading of
  /// `row_sep` is in force.
  double row_center_sep() const { return row_sep_is_inner_gap ? row_sep + 2.0 * radius : row_sep; }
  Vec2 normal() const { return axis.perp(); }

  void validate() const {
    if (!(height > 0.0)) throw ValidationError("lattice.height", "must be positive");
    if (!(radius > 0.0)) throw ValidationError("lattice.radius", "must be positive");
    if (!(2.0 * radius < pitch + 1e-12 * pitch)) {
      throw ValidationError("lattice.pitch", "bars in a row overlap (need 2r < w)");
    }
    if (!(row_center_sep() > 2.0 * radius)) {
      throw ValidationError("lattice.row_sep", "rows overlap (need l > 2r)");
    }
    if (std::abs(axis.norm() - 1.0) > 1e-9) throw ValidationError("lattice.axis", "must be a unit vector");
  }
};

enum class WallMode { DiscreteBars, ContinuousWall };

/// One filled bar. `row` 0 is the left row (+normal side), 1 the right.
/// `center` is the resolved surface-plane position.
struct BarSite {
  int row = 0;
  int slot = 0;
  std::string material;
  Vec2 center;
};

/// Solid sheet standing on the slab, used in ContinuousWall mode.
struct WallSegment {
  Vec2 a;
  Vec2 b;
  double thickness = 0.0;
  std::string material;
};

/// Channel centerline as a polyline starting at the source.
struct Pathway {
  std::vector<Vec2> vertices;

  double length() const {
    double s = 0.0;
    for (std::size_t i = 1; i < vertices.size(); ++i) s += (vertices[i] - vertices[i - 1]).norm();
    return s;
  }
  /// Point at arc length s (clamped to the ends).
  Vec2 at(double s) const {
    for (std::size_t i = 1; i < vertices.size(); ++i) {
      const Vec2 d = vertices[i] - vertices[i - 1];
      const double len = d.norm();
      if (s <= len || i + 1 == vertices.size()) {
        const double t = std::clamp(s / len, 0.0, 1.0);
        return vertices[i - 1] + t * d;
      }
      s -= len;
    }
    return vertices.empty() ? Vec2{} : vertices.front();
  }
  /// Arc length of each interior vertex (corners).
  std::vector<double> corner_arc_lengths() const {
    std::vector<double> out;
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < vertices.size(); ++i) {
      s += (vertices[i] - vertices[i - 1]).norm();
      out.push_back(s);
    }
    return out;
  }
};

struct FillPattern {
  std::vector<BarSite> sites;
  std::vector<WallSegment> walls;
  WallMode wall_mode = WallMode::DiscreteBars;
  Pathway path;

  bool empty() const { return sites.empty() && walls.empty(); }
  std::size_t bar_count() const { return sites.size(); }
};

enum class SourceProfile { Uniform, Tm0Mode };

struct Transducer {
  double aperture_height = 2.84 * kMm;
  double aperture_width = 5.89 * kMm;
  Vec3 center{0.0, 0.0, 0.0};  // z filled in so the aperture rests on the slab
  Vec2 facing{1.0, 0.0};        // aperture normal in the surface plane
  double f0 = 30.0 * kGHz;
  double ramp_periods = 10.0;
  double amplitude = 1.0;  // V/m
  SourceProfile profile = SourceProfile::Uniform;

  double period() const { return 1.0 / f0; }
  double ramp_time() const { return ramp_periods / f0; }
};

enum class ProbeComponent { En, EtLong, EtTrans };
enum class ProbeLine { InPath, Tilted, Free };

inline const char* to_string(ProbeLine l) {
  switch (l) {
    case ProbeLine::InPath: return "in_path";
    case ProbeLine::Tilted: return "tilted";
    case ProbeLine::Free: return "free";
  }
  return "?";
}

struct Probe {
  std::string id;
  Vec3 position;
  ProbeComponent component = ProbeComponent::En;
  ProbeLine line = ProbeLine::Free;
  double dist_lambda = 0.0;  // arc length (in-path) or radius (tilted)
};

struct ProbeSet {
  std::vector<Probe> probes;
  double spacing_lambda = 1.0;
  double tilt_deg = 5.0;
  double height = 1.0 * kMm;  // above the slab top
  ProbeComponent component = ProbeComponent::En;
};

enum class SolverMode { TwoD, ThreeD };

inline const char* to_string(SolverMode m) { return m == SolverMode::TwoD ? "2d" : "3d"; }

struct SolverSettings {
  double delta = 0.25 * kMm;
  double safety = 0.99;
  int cpml_layers = 10;
  SolverMode mode = SolverMode::TwoD;
  double max_periods = 400.0;
  double steady_tol_db = 0.1;
  double dft_window_periods = 10.0;
};

struct Box {
  Vec3 lo;
  Vec3 hi;

  bool contains(Vec3 p, double margin = 0.0) const {
    return p.x >= lo.x + margin && p.x <= hi.x - margin && p.y >= lo.y + margin &&
           p.y <= hi.y - margin && p.z >= lo.z && p.z <= hi.z - margin;
  }
};

struct RswpScene {
  std::string name = "custom";
  Slab slab;
  BarLattice lattice;
  FillPattern fill;
  Transducer source;
  ProbeSet probes;
  Box domain;
  MaterialTable materials = default_materials();
  double surface_reactance = 130.0;  // ohm, validation scenario only
  SolverSettings solver;

  double lambda0() const { return free_space_wavelength(source.f0); }
  double slab_top() const { return slab.thickness; }

  const Material& material(const std::string& name) const {
    auto it = materials.find(name);
    if (it == materials.end()) throw ValidationError("materials." + name, "unknown material");
    return it->second;
  }

  /// Checks every invariant; throws ValidationError naming the field.
  void validate() const {
    if (!(slab.thickness > 0.0)) throw ValidationError("slab.thickness", "must be positive");
    slab.material().validate("slab");
    for (const auto& [n, m] : materials) m.validate("materials." + n);
    lattice.validate();
    for (const auto& s : fill.sites) {
      (void)material(s.material);
      if (s.row != 0 && s.row != 1) throw ValidationError("fill.sites", "row index must be 0 or 1");
    }
    for (const auto& w : fill.walls) (void)material(w.material);
    if (!(source.f0 > 0.0)) throw ValidationError("source.f0", "must be positive");
    if (!(source.ramp_periods >= 1.0)) throw ValidationError("source.ramp_periods", "must be >= 1");
    if (!(source.aperture_height > 0.0 && source.aperture_width > 0.0)) {
      throw ValidationError("source.aperture", "aperture must be non-empty");
    }
    if (std::abs(source.center.z - 0.5 * source.aperture_height - slab_top()) > 1e-9) {
      throw ValidationError("source.center", "aperture must rest on the slab top");
    }
    if (!(probes.spacing_lambda > 0.0)) throw ValidationError("probes.spacing_lambda", "must be positive");
    if (!(solver.delta > 0.0)) throw ValidationError("solver.delta", "must be positive");
    if (!(solver.safety > 0.0 && solver.safety <= 1.0)) throw ValidationError("solver.safety", "must lie in (0, 1]");
    if (solver.cpml_layers < 6) throw ValidationError("solver.cpml_layers", "need at least 6 layers");
    if (!(solver.steady_tol_db > 0.0)) throw ValidationError("solver.steady_tol_db", "must be positive");
    if (!(domain.hi.x > domain.lo.x && domain.hi.y > domain.lo.y && domain.hi.z > domain.lo.z)) {
      throw ValidationError("domain", "empty box");
    }
    if (domain.lo.z != 0.0) throw ValidationError("domain", "ground plane must sit at z = 0");
    const double margin = lambda0() * (1.0 - 1e-9);
    for (const auto& p : probes.probes) {
      if (!domain.contains(p.position, margin)) {
        throw ValidationError("probes." + p.id, "probe closer than 1 lambda to the absorber");
      }
    }
    if (!domain.contains(source.center, margin)) {
      throw ValidationError("source.center", "source closer than 1 lambda to the absorber");
    }
  }
};

// ---------------------------------------------------------------------------
// Pattern generators

namespace detail {

inline void check_material(const MaterialTable& table, const std::string& name) {
  if (!table.contains(name)) throw ValidationError("fill.material", "unknown material '" + name + "'");
}

inline Vec2 lattice_point(const BarLattice& lat, double u, double v) {
  return lat.origin + u * lat.axis + v * lat.normal();
}

/// Bars on the segment a->b (inclusive of a), at most `pitch` apart, with
/// the end point included.
inline std::vector<Vec2> fill_segment(Vec2 a, Vec2 b, double pitch, bool include_a) {
  std::vector<Vec2> out;
  const double len = (b - a).norm();
  const int n = static_cast<int>(std::ceil(len / pitch - 1e-9));
  for (int i = include_a ? 0 : 1; i <= n; ++i) out.push_back(a + (n == 0 ? 0.0 : double(i) / n) * (b - a));
  return out;
}

}  // namespace detail

/// Number of slots per row for a straight run of `length` metres.
inline int straight_slot_count(double length, double pitch) {
  return static_cast<int>(std::floor(length / pitch + 1e-9)) + 1;
}

/// Two parallel rows along the lattice axis from slot 0, covering
/// `length_lambda` free-space wavelengths.
inline FillPattern gen_straight(const BarLattice& lat, double lambda0, double length_lambda,
                                const std::string& material, const MaterialTable& table,
                                WallMode mode = WallMode::DiscreteBars) {
  require(length_lambda >= 1.0, "gen_straight: length must be at least 1 lambda");
  detail::check_material(table, material);
  const double length = length_lambda * lambda0;
  const double half = 0.5 * lat.row_center_sep();
  FillPattern fp;
  fp.wall_mode = mode;
  fp.path.vertices = {lat.origin, detail::lattice_point(lat, length, 0.0)};
  if (mode == WallMode::ContinuousWall) {
    for (double v : {half, -half}) {
      fp.walls.push_back({detail::lattice_point(lat, 0.0, v), detail::lattice_point(lat, length, v),
                          2.0 * lat.radius, material});
    }
    return fp;
  }
  const int slots = straight_slot_count(length, lat.pitch);
  for (int row = 0; row < 2; ++row) {
    const double v = row == 0 ? half : -half;
    for (int s = 0; s < slots; ++s) {
      fp.sites.push_back({row, s, material, detail::lattice_point(lat, s * lat.pitch, v)});
    }
  }
  return fp;
}

/// Right-angled left turn: leg 1 along the axis, leg 2 along the normal.
///
/// Corner rule: the outer row runs unbroken through the outer corner point,
/// with closure bars filling any gap wider than one pitch; each inner row
/// stops one pitch short of the inner corner point. `mitered` replaces the
/// outer corner with a 45-degree chamfer.
inline FillPattern gen_l_turn(const BarLattice& lat, double lambda0, double leg1_lambda,
                              double leg2_lambda, const std::string& material,
                              const MaterialTable& table, WallMode mode = WallMode::DiscreteBars,
                              bool mitered = false) {
  require(leg1_lambda >= 1.0 && leg2_lambda >= 1.0, "gen_l_turn: legs must be at least 1 lambda");
  detail::check_material(table, material);
  const double l1 = leg1_lambda * lambda0;
  const double l2 = leg2_lambda * lambda0;
  const double half = 0.5 * lat.row_center_sep();
  const double w = lat.pitch;
  // Local (u, v): u along leg 1, v along leg 2.
  auto P = [&](double u, double v) { return detail::lattice_point(lat, u, v); };

  FillPattern fp;
  fp.wall_mode = mode;
  fp.path.vertices = {P(0, 0), P(l1, 0), P(l1, l2)};

  const Vec2 inner_corner{l1 - half, half};
  const Vec2 outer_corner{l1 + half, -half};
  const double chamfer = mitered ? half : 0.0;  // chamfer leg length along each wall

  if (mode == WallMode::ContinuousWall) {
    const double t = 2.0 * lat.radius;
    fp.walls.push_back({P(0, half), P(inner_corner.x, inner_corner.y), t, material});
    fp.walls.push_back({P(inner_corner.x, inner_corner.y), P(l1 - half, l2), t, material});
    if (mitered) {
      const Vec2 a{outer_corner.x - chamfer, outer_corner.y};
      const Vec2 b{outer_corner.x, outer_corner.y + chamfer};
      fp.walls.push_back({P(0, -half), P(a.x, a.y), t, material});
      fp.walls.push_back({P(a.x, a.y), P(b.x, b.y), t, material});
      fp.walls.push_back({P(b.x, b.y), P(l1 + half, l2), t, material});
    } else {
      fp.walls.push_back({P(0, -half), P(outer_corner.x, outer_corner.y), t, material});
      fp.walls.push_back({P(outer_corner.x, outer_corner.y), P(l1 + half, l2), t, material});
    }
    return fp;
  }

  auto add = [&](int row, int slot, double u, double v) {
    fp.sites.push_back({row, slot, material, P(u, v)});
  };

  const int n1 = straight_slot_count(l1, w);
  const int n2 = straight_slot_count(l2, w);
  // Leg 1: left row (0) is inner, right row (1) is outer.
  for (int s = 0; s < n1; ++s) {
    const double u = s * w;
    if (u <= inner_corner.x - w + 1e-12) add(0, s, u, half);
  }
  double last_outer_u = 0.0;
  for (int s = 0; s < n1; ++s) {
    const double u = s * w;
    if (u <= outer_corner.x - chamfer + 1e-12) {
      add(1, s, u, -half);
      last_outer_u = u;
    }
  }
  // Leg 2 runs along +v from the corner; inner row at u = l1 - half.
  int slot = n1;
  for (int s = 0; s < n2; ++s) {
    const double v = s * w;
    if (v >= inner_corner.y + w - 1e-12) add(0, slot + s, inner_corner.x, v);
  }
  double first_outer_v = -1.0;
  for (int s = 0; s < n2; ++s) {
    const double v = s * w;
    if (v >= outer_corner.y + chamfer - 1e-12) {
      if (first_outer_v < -0.5) first_outer_v = v;
      add(1, slot + s, outer_corner.x, v);
    }
  }
  // Closure bars along the outer wall: last leg-1 bar -> corner -> first leg-2 bar.
  int closure_slot = n1 + n2;
  const Vec2 a{last_outer_u, -half};
  const Vec2 b{outer_corner.x, first_outer_v};
  std::vector<Vec2> knots{a};
  if (mitered) {
    knots.push_back({outer_corner.x - chamfer, outer_corner.y});
    knots.push_back({outer_corner.x, outer_corner.y + chamfer});
  } else {
    knots.push_back(outer_corner);
  }
  knots.push_back(b);
  for (std::size_t k = 1; k < knots.size(); ++k) {
    auto seg = detail::fill_segment(knots[k - 1], knots[k], w, false);
    // The final knot is an existing leg-2 bar.
    if (k + 1 == knots.size() && !seg.empty()) seg.pop_back();
    for (const Vec2& q : seg) {
      if ((q - a).norm() < 1e-12) continue;
      add(1, closure_slot++, q.x, q.y);
    }
  }
  return fp;
}

/// In-path probes every `spacing_lambda` along the centerline from one
/// spacing to the path end, plus a tilted ray at `tilt_deg` from the first
/// leg's axis anchored at the path start, at the same radial spacing.
inline ProbeSet gen_probe_lines(const Pathway& path, double lambda0, double slab_top,
                                double spacing_lambda, double tilt_deg,
                                double tilt_extent_lambda = -1.0,
                                double height = 1.0 * kMm,
                                ProbeComponent component = ProbeComponent::En) {
  require(spacing_lambda > 0.0, "gen_probe_lines: spacing must be positive");
  require(path.vertices.size() >= 2, "gen_probe_lines: path needs at least two vertices");
  ProbeSet ps;
  ps.spacing_lambda = spacing_lambda;
  ps.tilt_deg = tilt_deg;
  ps.height = height;
  ps.component = component;
  const double z = slab_top + height;
  const double total_lambda = path.length() / lambda0;
  const int n = static_cast<int>(std::floor(total_lambda / spacing_lambda + 1e-9));
  for (int i = 1; i <= n; ++i) {
    const double d = i * spacing_lambda;
    const Vec2 p = path.at(d * lambda0);
    ps.probes.push_back({"p" + std::to_string(i), {p.x, p.y, z}, component, ProbeLine::InPath, d});
  }
  const double extent = tilt_extent_lambda > 0.0 ? tilt_extent_lambda
                                                 : (path.vertices[1] - path.vertices[0]).norm() / lambda0;
  const Vec2 start = path.vertices[0];
  const Vec2 dir0 = (path.vertices[1] - path.vertices[0]);
  const Vec2 axis = (1.0 / dir0.norm()) * dir0;
  const double th = tilt_deg * kPi / 180.0;
  // Rotate toward the right-hand side (away from a left turn).
  const Vec2 ray{axis.x * std::cos(th) + axis.y * std::sin(th), -axis.x * std::sin(th) + axis.y * std::cos(th)};
  const int nt = static_cast<int>(std::floor(extent / spacing_lambda + 1e-9));
  for (int i = 1; i <= nt; ++i) {
    const double d = i * spacing_lambda;
    const Vec2 p = start + (d * lambda0) * ray;
    ps.probes.push_back({"t" + std::to_string(i), {p.x, p.y, z}, component, ProbeLine::Tilted, d});
  }
  return ps;
}

}  // namespace rswp
