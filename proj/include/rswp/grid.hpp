#pragma once

// Voxelization of a scene onto a uniform Yee lattice. A cell (i, j, k)
// spans [origin + (i,j,k)*delta, origin + (i+1,j+1,k+1)*delta]; its
// material is whichever region contains the cell center.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rswp/constants.hpp"
#include "rswp/error.hpp"
#include "rswp/oracles.hpp"
#include "rswp/scene.hpp"

namespace rswp {

enum Face : int { XLo = 0, XHi, YLo, YHi, ZLo, ZHi };

/// What sits just outside each face of the grid.
enum class FaceKind { Cpml, Pec };

struct MaterialGrid {
  std::size_t nx = 0, ny = 0, nz = 0;
  double delta = 0.0;
  Vec3 origin;  // world position of node (0, 0, 0)
  bool two_d = false;
  double f0 = 0.0;  // frequency at which dielectric loss is folded into sigma

  std::vector<Material> materials;  // indexed by material id
  std::vector<std::string> material_names;
  std::vector<std::uint8_t> cell;   // material id, index (i*ny + j)*nz + k

  std::array<int, 6> pml{};  // absorber thickness in cells per face
  std::array<FaceKind, 6> face{FaceKind::Cpml, FaceKind::Cpml, FaceKind::Cpml,
                               FaceKind::Cpml, FaceKind::Pec,  FaceKind::Cpml};
  double background_eps_r = 1.0;  // medium the absorber is matched to

  std::vector<double> bar_cells;  // cross-section cell count of each filled bar

  std::size_t cell_count() const { return nx * ny * nz; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * ny + j) * nz + k; }
  std::uint8_t at(std::size_t i, std::size_t j, std::size_t k) const { return cell[index(i, j, k)]; }
  Vec3 cell_center(std::size_t i, std::size_t j, std::size_t k) const {
    return {origin.x + (i + 0.5) * delta, origin.y + (j + 0.5) * delta,
            two_d ? 0.0 : origin.z + (k + 0.5) * delta};
  }

  std::size_t material_id(const std::string& name) const {
    for (std::size_t m = 0; m < material_names.size(); ++m)
      if (material_names[m] == name) return m;
    throw Error("MaterialGrid: no material '" + name + "'");
  }

  /// FNV-1a over dims, spacing, material parameters and cell ids.
  std::uint64_t checksum() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* p, std::size_t n) {
      const auto* b = static_cast<const unsigned char*>(p);
      for (std::size_t q = 0; q < n; ++q) {
        h ^= b[q];
        h *= 1099511628211ull;
      }
    };
    const std::uint64_t dims[3] = {nx, ny, nz};
    mix(dims, sizeof dims);
    mix(&delta, sizeof delta);
    for (const auto& m : materials) {
      mix(&m.eps_r, sizeof m.eps_r);
      mix(&m.sigma, sizeof m.sigma);
      mix(&m.tan_delta, sizeof m.tan_delta);
    }
    mix(cell.data(), cell.size());
    return h;
  }
};

/// Effective-index medium standing in for the grounded slab in the 2D mode:
/// eps = n_eff^2 and a conductivity reproducing the TM0 dielectric-loss
/// attenuation.
inline Material effective_medium_2d(const Slab& slab, double f) {
  const auto sol = oracle::tm0_grounded_slab(slab.eps_r, slab.thickness, f);
  const double alpha_d = oracle::tm0_dielectric_attenuation(slab.eps_r, slab.tan_delta, slab.thickness, f);
  const double eps = sol.n_eff * sol.n_eff;
  // Plane wave in a low-loss medium: alpha = sigma * eta0 / (2 n).
  const double sigma = 2.0 * sol.n_eff * alpha_d / kEta0;
  return Material::dielectric(eps, sigma / (2.0 * kPi * f * kEps0 * eps));
}

namespace detail {

inline double dist_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double len2 = d.x * d.x + d.y * d.y;
  double t = len2 > 0.0 ? ((p.x - a.x) * d.x + (p.y - a.y) * d.y) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

}  // namespace detail

/// Voxelizes `scene` at spacing `delta`. The grid covers the scene domain
/// plus `solver.cpml_layers` absorber cells on every open face; the bottom
/// face is the PEC ground plane in 3D.
/// Homogeneous grid of one material with `layers` absorber cells on every
/// face (none on the z faces in 2D, none below in 3D when `ground`). With
/// layers = 0 the grid is a closed PEC box.
inline MaterialGrid uniform_grid(std::size_t nx, std::size_t ny, std::size_t nz, double delta, const Material& m,
                                 int layers, bool two_d, bool ground = false) {
  require(nx > 0 && ny > 0 && nz > 0 && delta > 0.0, "uniform_grid: empty grid");
  require(!two_d || nz == 1, "uniform_grid: a 2D grid has nz = 1");
  MaterialGrid g;
  g.nx = nx;
  g.ny = ny;
  g.nz = nz;
  g.delta = delta;
  g.two_d = two_d;
  g.f0 = 30e9;
  g.materials = {m};
  g.material_names = {"background"};
  g.background_eps_r = m.eps_r;
  g.cell.assign(g.cell_count(), 0);
  const int zl = two_d || ground ? 0 : layers;
  g.pml = {layers, layers, layers, layers, zl, two_d ? 0 : layers};
  for (int f = 0; f < 6; ++f) g.face[f] = g.pml[f] > 0 ? FaceKind::Cpml : FaceKind::Pec;
  return g;
}

inline MaterialGrid voxelize(const RswpScene& scene, double delta) {
  require(delta > 0.0, "voxelize: spacing must be positive");
  const double lam = scene.lambda0();
  const bool two_d = scene.solver.mode == SolverMode::TwoD;
  if (delta > lam / (15.0 * std::sqrt(scene.slab.eps_r)) * (1.0 + 1e-9)) {
    throw PreconditionError("voxelize: resolution too coarse (need delta <= lambda0 / (15 sqrt(eps_r)))");
  }
  if (!scene.fill.empty() && scene.lattice.radius < 2.0 * delta * (1.0 - 1e-9)) {
    throw PreconditionError("voxelize: resolution too coarse (bar radius spans fewer than 2 cells)");
  }

  MaterialGrid g;
  g.delta = delta;
  g.two_d = two_d;
  g.f0 = scene.source.f0;
  const int L = scene.solver.cpml_layers;

  // Snap the interior to the global lattice of multiples of delta.
  auto snap_lo = [&](double v) { return std::floor(v / delta + 1e-9) * delta; };
  auto snap_hi = [&](double v) { return std::ceil(v / delta - 1e-9) * delta; };
  const double x0 = snap_lo(scene.domain.lo.x), x1 = snap_hi(scene.domain.hi.x);
  const double y0 = snap_lo(scene.domain.lo.y), y1 = snap_hi(scene.domain.hi.y);
  const auto nxi = static_cast<std::size_t>(std::llround((x1 - x0) / delta));
  const auto nyi = static_cast<std::size_t>(std::llround((y1 - y0) / delta));
  g.pml = {L, L, L, L, 0, two_d ? 0 : L};
  g.nx = nxi + 2 * L;
  g.ny = nyi + 2 * L;
  if (two_d) {
    g.nz = 1;
    g.face[ZLo] = g.face[ZHi] = FaceKind::Pec;  // unused
  } else {
    const double z1 = snap_hi(scene.domain.hi.z);
    g.nz = static_cast<std::size_t>(std::llround(z1 / delta)) + L;
  }
  g.origin = {x0 - L * delta, y0 - L * delta, 0.0};

  // Material table: background(s) first, then every fill material.
  if (two_d) {
    g.materials.push_back(effective_medium_2d(scene.slab, scene.source.f0));
    g.material_names.push_back("slab_effective");
    g.background_eps_r = g.materials[0].eps_r;
  } else {
    g.materials.push_back(Material::vacuum());
    g.material_names.push_back("vacuum");
    g.materials.push_back(scene.slab.material());
    g.material_names.push_back("slab");
  }
  auto id_for = [&](const std::string& name) -> std::uint8_t {
    for (std::size_t m = 0; m < g.material_names.size(); ++m)
      if (g.material_names[m] == name) return static_cast<std::uint8_t>(m);
    g.materials.push_back(scene.material(name));
    g.material_names.push_back(name);
    if (g.materials.size() > 255) throw Error("voxelize: too many materials");
    return static_cast<std::uint8_t>(g.materials.size() - 1);
  };

  g.cell.assign(g.cell_count(), 0);
  const double top = scene.slab_top();
  if (!two_d) {
    for (std::size_t i = 0; i < g.nx; ++i)
      for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t k = 0; k < g.nz; ++k)
          if (g.origin.z + (k + 0.5) * delta < top) g.cell[g.index(i, j, k)] = 1;
  }

  auto k_range = [&](double zlo, double zhi) {
    std::size_t ka = g.nz, kb = 0;
    for (std::size_t k = 0; k < g.nz; ++k) {
      const double zc = g.origin.z + (k + 0.5) * delta;
      if (two_d || (zc > zlo && zc < zhi)) {
        ka = std::min(ka, k);
        kb = std::max(kb, k + 1);
      }
    }
    return std::pair{ka, kb};
  };
  const auto [ka, kb] = k_range(top, top + scene.lattice.height);

  // Stamp every cell whose center lies within the footprint; `inside`
  // tests a surface-plane point, `bb` bounds the footprint.
  auto stamp = [&](std::uint8_t id, Vec2 bb_lo, Vec2 bb_hi, auto inside) {
    const auto i0 = static_cast<long>(std::floor((bb_lo.x - g.origin.x) / delta)) - 1;
    const auto i1 = static_cast<long>(std::ceil((bb_hi.x - g.origin.x) / delta)) + 1;
    const auto j0 = static_cast<long>(std::floor((bb_lo.y - g.origin.y) / delta)) - 1;
    const auto j1 = static_cast<long>(std::ceil((bb_hi.y - g.origin.y) / delta)) + 1;
    std::size_t count = 0;
    for (long i = std::max(i0, 0L); i < std::min<long>(i1, static_cast<long>(g.nx)); ++i)
      for (long j = std::max(j0, 0L); j < std::min<long>(j1, static_cast<long>(g.ny)); ++j) {
        const Vec2 c{g.origin.x + (i + 0.5) * delta, g.origin.y + (j + 0.5) * delta};
        if (!inside(c)) continue;
        ++count;
        for (std::size_t k = ka; k < kb; ++k) g.cell[g.index(i, j, k)] = id;
      }
    return count;
  };

  const double r = scene.lattice.radius;
  for (const auto& bar : scene.fill.sites) {
    const std::uint8_t id = id_for(bar.material);
    const Vec2 c = bar.center;
    const auto n = stamp(id, {c.x - r, c.y - r}, {c.x + r, c.y + r}, [&](Vec2 p) {
      const double dx = p.x - c.x, dy = p.y - c.y;
      return dx * dx + dy * dy < r * r;
    });
    g.bar_cells.push_back(static_cast<double>(n));
  }
  for (const auto& w : scene.fill.walls) {
    const std::uint8_t id = id_for(w.material);
    const double h = 0.5 * w.thickness;
    stamp(id, {std::min(w.a.x, w.b.x) - h, std::min(w.a.y, w.b.y) - h},
          {std::max(w.a.x, w.b.x) + h, std::max(w.a.y, w.b.y) + h},
          [&](Vec2 p) { return detail::dist_to_segment(p, w.a, w.b) < h; });
  }
  return g;
}

}  // namespace rswp
