#pragma once

// Full 3D Yee solver. Node (i, j, k) sits at origin + (i, j, k)*delta;
// Ex lives at (i+1/2, j, k), Ey at (i, j+1/2, k), Ez at (i, j, k+1/2),
// Hx at (i, j+1/2, k+1/2), Hy at (i+1/2, j, k+1/2), Hz at (i+1/2, j+1/2, k).
// All six arrays share one (nx+1)(ny+1)(nz+1) layout. Tangential E on the
// outer faces stays zero (PEC behind the absorbers, ground at z = 0).

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "rswp/boundaries.hpp"
#include "rswp/constants.hpp"
#include "rswp/error.hpp"
#include "rswp/grid.hpp"
#include "rswp/parallel.hpp"

namespace rswp {

enum class Component { Ex = 0, Ey, Ez, Hx, Hy, Hz };

/// Interpolation stencil for a point sample: up to 8 (index, weight) pairs.
struct PointStencil {
  Component component = Component::Ez;
  std::array<std::size_t, 8> index{};
  std::array<double, 8> weight{};
  int count = 0;
};

namespace detail {

/// Classifies each E edge by the average (eps_r, sigma) of the cells it
/// touches; an edge touching PEC is PEC. Returns the class table.
struct EdgeClassTable {
  std::vector<UpdateCoeffs> coeffs;
  std::map<std::pair<double, double>, std::uint8_t> lookup;
  std::uint8_t pec = 0;

  EdgeClassTable() {
    coeffs.push_back({0.0, 0.0});
    pec = 0;
  }
  std::uint8_t classify(double eps_r, double sigma, double dt, double delta) {
    const auto key = std::make_pair(eps_r, sigma);
    if (auto it = lookup.find(key); it != lookup.end()) return it->second;
    if (coeffs.size() >= 255) throw Error("too many distinct edge materials");
    coeffs.push_back(lossy_coeffs(eps_r, sigma, dt, delta));
    const auto id = static_cast<std::uint8_t>(coeffs.size() - 1);
    lookup.emplace(key, id);
    return id;
  }
};

}  // namespace detail

template <class Real = float>
class Fdtd3D {
 public:
  Fdtd3D(const MaterialGrid& grid, double dt, const CpmlSpec& cpml, ThreadPool* pool = nullptr)
      : g_(grid), dt_(dt), pool_(pool) {
    require(!grid.two_d, "Fdtd3D: grid is two-dimensional");
    require(dt > 0.0, "Fdtd3D: dt must be positive");
    nx_ = grid.nx;
    ny_ = grid.ny;
    nz_ = grid.nz;
    sy_ = nz_ + 1;
    sx_ = (ny_ + 1) * sy_;
    const std::size_t n = (nx_ + 1) * sx_;
    for (auto* a : {&ex_, &ey_, &ez_, &hx_, &hy_, &hz_}) a->assign(n, Real(0));
    db_ = static_cast<Real>(dt / (kMu0 * grid.delta));
    build_coefficients();
    build_cpml(cpml);
  }

  double dt() const { return dt_; }
  const MaterialGrid& grid() const { return g_; }
  std::size_t steps() const { return steps_; }

  std::vector<Real>& field(Component c) {
    switch (c) {
      case Component::Ex: return ex_;
      case Component::Ey: return ey_;
      case Component::Ez: return ez_;
      case Component::Hx: return hx_;
      case Component::Hy: return hy_;
      case Component::Hz: return hz_;
    }
    return ez_;
  }
  const std::vector<Real>& field(Component c) const { return const_cast<Fdtd3D*>(this)->field(c); }

  std::size_t node(std::size_t i, std::size_t j, std::size_t k) const { return i * sx_ + j * sy_ + k; }
  std::array<std::size_t, 3> dims() const { return {nx_, ny_, nz_}; }

  /// Edge coefficients of E component c (0..2) at a node.
  UpdateCoeffs e_coeffs(int c, std::size_t idx) const { return table_.coeffs[cls_[c][idx]]; }
  bool is_pec_edge(int c, std::size_t idx) const { return cls_[c][idx] == table_.pec; }

  /// Advances H by one half step and E by one full step (E ends at t = (n+1)dt).
  void step() {
    update_h();
    update_e();
    ++steps_;
  }

  void add_to_ez(std::size_t idx, Real v) { ez_[idx] += v; }

  /// Trilinear stencil for component `c` at world point p.
  PointStencil stencil(Component c, Vec3 p) const {
    static constexpr double off[6][3] = {{0.5, 0, 0}, {0, 0.5, 0}, {0, 0, 0.5},
                                         {0, 0.5, 0.5}, {0.5, 0, 0.5}, {0.5, 0.5, 0}};
    const auto ci = static_cast<int>(c);
    const double d = g_.delta;
    const double fx = (p.x - g_.origin.x) / d - off[ci][0];
    const double fy = (p.y - g_.origin.y) / d - off[ci][1];
    const double fz = (p.z - g_.origin.z) / d - off[ci][2];
    const auto i0 = static_cast<std::size_t>(std::floor(fx));
    const auto j0 = static_cast<std::size_t>(std::floor(fy));
    const auto k0 = static_cast<std::size_t>(std::floor(fz));
    require(fx >= 0 && fy >= 0 && fz >= 0 && i0 + 1 <= nx_ && j0 + 1 <= ny_ && k0 + 1 <= nz_,
            "stencil: point outside the grid");
    const double tx = fx - i0, ty = fy - j0, tz = fz - k0;
    PointStencil s;
    s.component = c;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int e = 0; e < 2; ++e) {
          s.index[s.count] = node(i0 + a, j0 + b, k0 + e);
          s.weight[s.count] = (a ? tx : 1 - tx) * (b ? ty : 1 - ty) * (e ? tz : 1 - tz);
          ++s.count;
        }
    return s;
  }

  double sample(const PointStencil& s) const {
    const auto& f = field(s.component);
    double v = 0.0;
    for (int q = 0; q < s.count; ++q) v += s.weight[q] * double(f[s.index[q]]);
    return v;
  }

  /// Largest |E| over the grid; NaN reports as +inf.
  double max_abs_field() const {
    double m = 0.0;
    for (const auto* a : {&ex_, &ey_, &ez_}) {
      for (Real v : *a) {
        const double av = std::abs(double(v));
        if (!(av <= m)) m = std::isnan(av) ? INFINITY : av;
      }
    }
    return m;
  }

  /// Discrete energy conserved by the lossless Yee scheme:
  /// 1/2 sum eps E^n.E^n + 1/2 sum mu H^{n-1/2}.H^{n+1/2}, in joules.
  /// The look-ahead H omits CPML terms; use in closed, lossless setups.
  double conserved_energy() const {
    const double dv = g_.delta * g_.delta * g_.delta;
    double we = 0.0, wh = 0.0;
    for (int c = 0; c < 3; ++c) {
      const auto& f = field(Component(c));
      for (std::size_t q = 0; q < f.size(); ++q) {
        const auto& cf = table_.coeffs[cls_[c][q]];
        if (cf.cb == 0.0) continue;
        // cb = dt/(eps*delta) for lossless edges.
        const double eps = dt_ / (cf.cb * g_.delta);
        we += eps * double(f[q]) * double(f[q]);
      }
    }
    const double db = double(db_);
    for (std::size_t i = 0; i <= nx_; ++i)
      for (std::size_t j = 0; j <= ny_; ++j)
        for (std::size_t k = 0; k <= nz_; ++k) {
          const std::size_t q = node(i, j, k);
          if (j < ny_ && k < nz_) {
            const double h = hx_[q];
            const double hn = h - db * ((ez_[q + sy_] - ez_[q]) - (ey_[q + 1] - ey_[q]));
            wh += h * hn;
          }
          if (i < nx_ && k < nz_) {
            const double h = hy_[q];
            const double hn = h - db * ((ex_[q + 1] - ex_[q]) - (ez_[q + sx_] - ez_[q]));
            wh += h * hn;
          }
          if (i < nx_ && j < ny_) {
            const double h = hz_[q];
            const double hn = h - db * ((ey_[q + sx_] - ey_[q]) - (ex_[q + sy_] - ex_[q]));
            wh += h * hn;
          }
        }
    return 0.5 * dv * (we + kMu0 * wh);
  }

  /// Zeroes tangential E wherever the mask marks an edge. `mask` is indexed
  /// like the field arrays, one entry per (component, node).
  void apply_pec_mask(const std::array<std::vector<std::uint8_t>, 3>& mask) {
    for (int c = 0; c < 3; ++c) {
      if (mask[c].empty()) continue;
      require(mask[c].size() == ex_.size(), "apply_pec_mask: mask size mismatch");
      for (std::size_t q = 0; q < mask[c].size(); ++q)
        if (mask[c][q]) cls_[c][q] = table_.pec;
      auto& f = field(Component(c));
      for (std::size_t q = 0; q < f.size(); ++q)
        if (mask[c][q]) f[q] = Real(0);
    }
  }

 private:
  void for_range(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (pool_) pool_->parallel_for(n, fn);
    else if (n) fn(0, n);
  }

  void build_coefficients() {
    const double d = g_.delta;
    std::vector<UpdateCoeffs> mat(g_.materials.size());
    std::vector<double> eps(g_.materials.size()), sig(g_.materials.size());
    std::vector<bool> pec(g_.materials.size());
    for (std::size_t m = 0; m < g_.materials.size(); ++m) {
      eps[m] = g_.materials[m].eps_r;
      sig[m] = g_.materials[m].effective_sigma(g_.f0);
      pec[m] = g_.materials[m].is_pec();
    }
    for (auto& c : cls_) c.assign(ex_.size(), table_.pec);
    auto cell = [&](long i, long j, long k) { return g_.at(std::size_t(i), std::size_t(j), std::size_t(k)); };
    auto classify4 = [&](std::array<std::uint8_t, 4> ids) {
      double e = 0.0, s = 0.0;
      for (auto id : ids) {
        if (pec[id]) return table_.pec;
        e += eps[id];
        s += sig[id];
      }
      return table_.classify(e / 4.0, s / 4.0, dt_, d);
    };
    const long NX = long(nx_), NY = long(ny_), NZ = long(nz_);
    for (long i = 0; i <= NX; ++i)
      for (long j = 0; j <= NY; ++j)
        for (long k = 0; k <= NZ; ++k) {
          const std::size_t q = node(i, j, k);
          if (i < NX && j > 0 && j < NY && k > 0 && k < NZ)
            cls_[0][q] = classify4({cell(i, j - 1, k - 1), cell(i, j, k - 1), cell(i, j - 1, k), cell(i, j, k)});
          if (j < NY && i > 0 && i < NX && k > 0 && k < NZ)
            cls_[1][q] = classify4({cell(i - 1, j, k - 1), cell(i, j, k - 1), cell(i - 1, j, k), cell(i, j, k)});
          if (k < NZ && i > 0 && i < NX && j > 0 && j < NY)
            cls_[2][q] = classify4({cell(i - 1, j - 1, k), cell(i, j - 1, k), cell(i - 1, j, k), cell(i, j, k)});
        }
    ca_.clear();
    cb_.clear();
    for (const auto& c : table_.coeffs) {
      ca_.push_back(static_cast<Real>(c.ca));
      cb_.push_back(static_cast<Real>(c.cb));
    }
  }

  // --- CPML bookkeeping -----------------------------------------------------

  static void collect(const std::vector<double>& b, const std::vector<double>& c, std::vector<std::size_t>& idx,
                      std::vector<Real>& bb, std::vector<Real>& cc) {
    for (std::size_t q = 0; q < b.size(); ++q) {
      if (c[q] != 0.0 || b[q] != 0.0) {
        idx.push_back(q);
        bb.push_back(static_cast<Real>(b[q]));
        cc.push_back(static_cast<Real>(c[q]));
      }
    }
  }

  struct AxisPml {
    std::vector<std::size_t> e_idx, h_idx;
    std::vector<Real> e_b, e_c, h_b, h_c;
    std::vector<Real> ik_n, ik_h;  // 1/kappa on nodes and half nodes
    // Two psi arrays per side, sized |idx| * plane.
    std::vector<Real> psi_e1, psi_e2, psi_h1, psi_h2;
  };

  void build_cpml(const CpmlSpec& spec) {
    const std::array<std::size_t, 3> n{nx_, ny_, nz_};
    const std::array<std::pair<int, int>, 3> lay{std::pair{g_.pml[XLo], g_.pml[XHi]},
                                                 std::pair{g_.pml[YLo], g_.pml[YHi]},
                                                 std::pair{g_.pml[ZLo], g_.pml[ZHi]}};
    for (int a = 0; a < 3; ++a) {
      CpmlAxis ax(n[a], lay[a].first, lay[a].second, spec, dt_, g_.background_eps_r);
      auto& p = pml_[a];
      collect(ax.b_n, ax.c_n, p.e_idx, p.e_b, p.e_c);
      collect(ax.b_h, ax.c_h, p.h_idx, p.h_b, p.h_c);
      for (double v : ax.inv_kappa_n) p.ik_n.push_back(static_cast<Real>(v));
      for (double v : ax.inv_kappa_h) p.ik_h.push_back(static_cast<Real>(v));
      const std::size_t plane = ex_.size() / (n[a] + 1);
      p.psi_e1.assign(p.e_idx.size() * plane, Real(0));
      p.psi_e2.assign(p.e_idx.size() * plane, Real(0));
      p.psi_h1.assign(p.h_idx.size() * plane, Real(0));
      p.psi_h2.assign(p.h_idx.size() * plane, Real(0));
    }
  }

  // --- updates ----------------------------------------------------------------

  void update_h() {
    const Real db = db_;
    const Real* ikx = pml_[0].ik_h.data();
    const Real* iky = pml_[1].ik_h.data();
    const Real* ikz = pml_[2].ik_h.data();
    for_range(nx_ + 1, [&](std::size_t ib, std::size_t ie) {
      for (std::size_t i = ib; i < ie; ++i)
        for (std::size_t j = 0; j <= ny_; ++j) {
          const std::size_t row = node(i, j, 0);
          Real* __restrict hx = hx_.data() + row;
          Real* __restrict hy = hy_.data() + row;
          Real* __restrict hz = hz_.data() + row;
          const Real* ex = ex_.data() + row;
          const Real* ey = ey_.data() + row;
          const Real* ez = ez_.data() + row;
          if (j < ny_) {
            const Real ky = iky[j];
            for (std::size_t k = 0; k < nz_; ++k)
              hx[k] -= db * (ky * (ez[k + sy_] - ez[k]) - ikz[k] * (ey[k + 1] - ey[k]));
          }
          if (i < nx_) {
            const Real kx = ikx[i];
            for (std::size_t k = 0; k < nz_; ++k)
              hy[k] -= db * (ikz[k] * (ex[k + 1] - ex[k]) - kx * (ez[k + sx_] - ez[k]));
            if (j < ny_) {
              const Real ky = iky[j];
              for (std::size_t k = 0; k <= nz_; ++k)
                hz[k] -= db * (kx * (ey[k + sx_] - ey[k]) - ky * (ex[k + sy_] - ex[k]));
            }
          }
        }
    });
    cpml_h();
  }

  void update_e() {
    const Real* ikx = pml_[0].ik_n.data();
    const Real* iky = pml_[1].ik_n.data();
    const Real* ikz = pml_[2].ik_n.data();
    const Real* ca = ca_.data();
    const Real* cb = cb_.data();
    for_range(nx_ + 1, [&](std::size_t ib, std::size_t ie) {
      for (std::size_t i = ib; i < ie; ++i)
        for (std::size_t j = 0; j <= ny_; ++j) {
          const std::size_t row = node(i, j, 0);
          Real* __restrict ex = ex_.data() + row;
          Real* __restrict ey = ey_.data() + row;
          Real* __restrict ez = ez_.data() + row;
          const Real* hx = hx_.data() + row;
          const Real* hy = hy_.data() + row;
          const Real* hz = hz_.data() + row;
          const std::uint8_t* cx = cls_[0].data() + row;
          const std::uint8_t* cy = cls_[1].data() + row;
          const std::uint8_t* cz = cls_[2].data() + row;
          if (i < nx_ && j > 0 && j < ny_) {
            const Real ky = iky[j];
            for (std::size_t k = 1; k < nz_; ++k)
              ex[k] = ca[cx[k]] * ex[k] + cb[cx[k]] * (ky * (hz[k] - hz[k - sy_]) - ikz[k] * (hy[k] - hy[k - 1]));
          }
          if (i > 0 && i < nx_ && j < ny_) {
            const Real kx = ikx[i];
            for (std::size_t k = 1; k < nz_; ++k)
              ey[k] = ca[cy[k]] * ey[k] + cb[cy[k]] * (ikz[k] * (hx[k] - hx[k - 1]) - kx * (hz[k] - hz[k - sx_]));
          }
          if (i > 0 && i < nx_ && j > 0 && j < ny_) {
            const Real kx = ikx[i], ky = iky[j];
            for (std::size_t k = 0; k < nz_; ++k)
              ez[k] = ca[cz[k]] * ez[k] + cb[cz[k]] * (kx * (hy[k] - hy[k - sx_]) - ky * (hx[k] - hx[k - sy_]));
          }
        }
    });
    cpml_e();
  }

  // psi recursions. For axis a the derivative along a of the two fields
  // transverse to it; `plane` enumerates the two other indices.

  void cpml_h() {
    const Real db = db_;
    // x: Hy gets -(-dEz/dx) and Hz gets -(dEy/dx).
    {
      auto& p = pml_[0];
      for_range(p.h_idx.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t s = b; s < e; ++s) {
          const std::size_t i = p.h_idx[s];
          const Real bb = p.h_b[s], cc = p.h_c[s];
          for (std::size_t j = 0; j <= ny_; ++j)
            for (std::size_t k = 0; k <= nz_; ++k) {
              const std::size_t q = node(i, j, k), pq = s * sx_ + j * sy_ + k;
              if (k < nz_) {
                Real& ps = p.psi_h1[pq];
                ps = bb * ps + cc * (ez_[q + sx_] - ez_[q]);
                hy_[q] += db * ps;
              }
              if (j < ny_) {
                Real& ps = p.psi_h2[pq];
                ps = bb * ps + cc * (ey_[q + sx_] - ey_[q]);
                hz_[q] -= db * ps;
              }
            }
        }
      });
    }
    // y: Hx gets -(dEz/dy), Hz gets -(-dEx/dy).
    {
      auto& p = pml_[1];
      for_range(nx_ + 1, [&](std::size_t ib, std::size_t ie) {
        for (std::size_t i = ib; i < ie; ++i)
          for (std::size_t s = 0; s < p.h_idx.size(); ++s) {
            const std::size_t j = p.h_idx[s];
            const Real bb = p.h_b[s], cc = p.h_c[s];
            for (std::size_t k = 0; k <= nz_; ++k) {
              const std::size_t q = node(i, j, k), pq = (s * (nx_ + 1) + i) * sy_ + k;
              if (k < nz_) {
                Real& ps = p.psi_h1[pq];
                ps = bb * ps + cc * (ez_[q + sy_] - ez_[q]);
                hx_[q] -= db * ps;
              }
              if (i < nx_) {
                Real& ps = p.psi_h2[pq];
                ps = bb * ps + cc * (ex_[q + sy_] - ex_[q]);
                hz_[q] += db * ps;
              }
            }
          }
      });
    }
    // z: Hx gets -(-dEy/dz), Hy gets -(dEx/dz).
    {
      auto& p = pml_[2];
      for_range(nx_ + 1, [&](std::size_t ib, std::size_t ie) {
        for (std::size_t i = ib; i < ie; ++i)
          for (std::size_t j = 0; j <= ny_; ++j)
            for (std::size_t s = 0; s < p.h_idx.size(); ++s) {
              const std::size_t k = p.h_idx[s];
              const Real bb = p.h_b[s], cc = p.h_c[s];
              const std::size_t q = node(i, j, k), pq = (s * (nx_ + 1) + i) * (ny_ + 1) + j;
              if (j < ny_) {
                Real& ps = p.psi_h1[pq];
                ps = bb * ps + cc * (ey_[q + 1] - ey_[q]);
                hx_[q] += db * ps;
              }
              if (i < nx_) {
                Real& ps = p.psi_h2[pq];
                ps = bb * ps + cc * (ex_[q + 1] - ex_[q]);
                hy_[q] -= db * ps;
              }
            }
      });
    }
  }

  void cpml_e() {
    const Real* cb = cb_.data();
    // x: Ey gets cb*(-psi(dHz/dx)), Ez gets cb*(+psi(dHy/dx)).
    {
      auto& p = pml_[0];
      for_range(p.e_idx.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t s = b; s < e; ++s) {
          const std::size_t i = p.e_idx[s];
          if (i == 0 || i >= nx_) continue;
          const Real bb = p.e_b[s], cc = p.e_c[s];
          for (std::size_t j = 0; j <= ny_; ++j)
            for (std::size_t k = 0; k <= nz_; ++k) {
              const std::size_t q = node(i, j, k), pq = s * sx_ + j * sy_ + k;
              if (j < ny_ && k > 0 && k < nz_) {
                Real& ps = p.psi_e1[pq];
                ps = bb * ps + cc * (hz_[q] - hz_[q - sx_]);
                ey_[q] -= cb[cls_[1][q]] * ps;
              }
              if (j > 0 && j < ny_ && k < nz_) {
                Real& ps = p.psi_e2[pq];
                ps = bb * ps + cc * (hy_[q] - hy_[q - sx_]);
                ez_[q] += cb[cls_[2][q]] * ps;
              }
            }
        }
      });
    }
    // y: Ex gets +psi(dHz/dy), Ez gets -psi(dHx/dy).
    {
      auto& p = pml_[1];
      for_range(nx_ + 1, [&](std::size_t ib, std::size_t ie) {
        for (std::size_t i = ib; i < ie; ++i)
          for (std::size_t s = 0; s < p.e_idx.size(); ++s) {
            const std::size_t j = p.e_idx[s];
            if (j == 0 || j >= ny_) continue;
            const Real bb = p.e_b[s], cc = p.e_c[s];
            for (std::size_t k = 0; k <= nz_; ++k) {
              const std::size_t q = node(i, j, k), pq = (s * (nx_ + 1) + i) * sy_ + k;
              if (i < nx_ && k > 0 && k < nz_) {
                Real& ps = p.psi_e1[pq];
                ps = bb * ps + cc * (hz_[q] - hz_[q - sy_]);
                ex_[q] += cb[cls_[0][q]] * ps;
              }
              if (i > 0 && i < nx_ && k < nz_) {
                Real& ps = p.psi_e2[pq];
                ps = bb * ps + cc * (hx_[q] - hx_[q - sy_]);
                ez_[q] -= cb[cls_[2][q]] * ps;
              }
            }
          }
      });
    }
    // z: Ex gets -psi(dHy/dz), Ey gets +psi(dHx/dz).
    {
      auto& p = pml_[2];
      for_range(nx_ + 1, [&](std::size_t ib, std::size_t ie) {
        for (std::size_t i = ib; i < ie; ++i)
          for (std::size_t j = 0; j <= ny_; ++j)
            for (std::size_t s = 0; s < p.e_idx.size(); ++s) {
              const std::size_t k = p.e_idx[s];
              if (k == 0 || k >= nz_) continue;
              const Real bb = p.e_b[s], cc = p.e_c[s];
              const std::size_t q = node(i, j, k), pq = (s * (nx_ + 1) + i) * (ny_ + 1) + j;
              if (i < nx_ && j > 0 && j < ny_) {
                Real& ps = p.psi_e1[pq];
                ps = bb * ps + cc * (hy_[q] - hy_[q - 1]);
                ex_[q] -= cb[cls_[0][q]] * ps;
              }
              if (i > 0 && i < nx_ && j < ny_) {
                Real& ps = p.psi_e2[pq];
                ps = bb * ps + cc * (hx_[q] - hx_[q - 1]);
                ey_[q] += cb[cls_[1][q]] * ps;
              }
            }
      });
    }
  }

  const MaterialGrid& g_;
  double dt_;
  ThreadPool* pool_;
  std::size_t nx_ = 0, ny_ = 0, nz_ = 0, sx_ = 0, sy_ = 0;
  std::size_t steps_ = 0;
  std::vector<Real> ex_, ey_, ez_, hx_, hy_, hz_;
  std::array<std::vector<std::uint8_t>, 3> cls_;
  detail::EdgeClassTable table_;
  std::vector<Real> ca_, cb_;
  Real db_{};
  std::array<AxisPml, 3> pml_;
};

}  // namespace rswp
