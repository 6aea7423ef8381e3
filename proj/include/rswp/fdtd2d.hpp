#pragma once

// Effective-index 2D solver in the surface plane (TM to z: Ez, Hx, Hy).
// Ez at nodes (i, j), Hx at (i, j+1/2), Hy at (i+1/2, j); all three arrays
// share the (nx+1)(ny+1) layout. Ez on the outer ring stays zero.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "rswp/boundaries.hpp"
#include "rswp/constants.hpp"
#include "rswp/error.hpp"
#include "rswp/fdtd3d.hpp"
#include "rswp/grid.hpp"
#include "rswp/parallel.hpp"

namespace rswp {

template <class Real = double>
class Fdtd2D {
 public:
  Fdtd2D(const MaterialGrid& grid, double dt, const CpmlSpec& cpml, ThreadPool* pool = nullptr)
      : g_(grid), dt_(dt), pool_(pool) {
    require(grid.two_d, "Fdtd2D: grid is three-dimensional");
    require(dt > 0.0, "Fdtd2D: dt must be positive");
    nx_ = grid.nx;
    ny_ = grid.ny;
    sx_ = ny_ + 1;
    const std::size_t n = (nx_ + 1) * sx_;
    ez_.assign(n, Real(0));
    hx_.assign(n, Real(0));
    hy_.assign(n, Real(0));
    db_ = static_cast<Real>(dt / (kMu0 * grid.delta));
    build_coefficients();
    build_cpml(cpml);
  }

  double dt() const { return dt_; }
  const MaterialGrid& grid() const { return g_; }
  std::size_t steps() const { return steps_; }
  std::size_t node(std::size_t i, std::size_t j, std::size_t = 0) const { return i * sx_ + j; }
  std::array<std::size_t, 3> dims() const { return {nx_, ny_, 1}; }

  std::vector<Real>& field(Component c) {
    switch (c) {
      case Component::Hx: return hx_;
      case Component::Hy: return hy_;
      case Component::Ez: return ez_;
      default: break;
    }
    throw PreconditionError("Fdtd2D: only Ez, Hx, Hy exist in the 2D mode");
  }
  const std::vector<Real>& field(Component c) const { return const_cast<Fdtd2D*>(this)->field(c); }

  UpdateCoeffs e_coeffs(std::size_t idx) const { return coeffs_[cls_[idx]]; }

  void step() {
    update_h();
    update_e();
    ++steps_;
  }

  void add_to_ez(std::size_t idx, Real v) { ez_[idx] += v; }

  /// Bilinear stencil for Ez at the surface-plane position of p.
  PointStencil stencil(Component c, Vec3 p) const {
    require(c == Component::Ez, "Fdtd2D: probes sample Ez only");
    const double d = g_.delta;
    const double fx = (p.x - g_.origin.x) / d;
    const double fy = (p.y - g_.origin.y) / d;
    const auto i0 = static_cast<std::size_t>(std::floor(fx));
    const auto j0 = static_cast<std::size_t>(std::floor(fy));
    require(fx >= 0 && fy >= 0 && i0 + 1 <= nx_ && j0 + 1 <= ny_, "stencil: point outside the grid");
    const double tx = fx - i0, ty = fy - j0;
    PointStencil s;
    s.component = c;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        s.index[s.count] = node(i0 + a, j0 + b);
        s.weight[s.count] = (a ? tx : 1 - tx) * (b ? ty : 1 - ty);
        ++s.count;
      }
    return s;
  }

  double sample(const PointStencil& s) const {
    double v = 0.0;
    for (int q = 0; q < s.count; ++q) v += s.weight[q] * double(ez_[s.index[q]]);
    return v;
  }

  double max_abs_field() const {
    double m = 0.0;
    for (Real v : ez_) {
      const double av = std::abs(double(v));
      if (!(av <= m)) m = std::isnan(av) ? INFINITY : av;
    }
    return m;
  }

  /// Lossless-scheme invariant per unit height (J/m); see Fdtd3D.
  double conserved_energy() const {
    const double da = g_.delta * g_.delta;
    double we = 0.0, wh = 0.0;
    for (std::size_t q = 0; q < ez_.size(); ++q) {
      const auto& cf = coeffs_[cls_[q]];
      if (cf.cb == 0.0) continue;
      we += dt_ / (cf.cb * g_.delta) * double(ez_[q]) * double(ez_[q]);
    }
    const double db = double(db_);
    for (std::size_t i = 0; i <= nx_; ++i)
      for (std::size_t j = 0; j <= ny_; ++j) {
        const std::size_t q = node(i, j);
        if (j < ny_) {
          const double h = hx_[q];
          wh += h * (h - db * (ez_[q + 1] - ez_[q]));
        }
        if (i < nx_) {
          const double h = hy_[q];
          wh += h * (h + db * (ez_[q + sx_] - ez_[q]));
        }
      }
    return 0.5 * da * (we + kMu0 * wh);
  }

 private:
  void for_range(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (pool_) pool_->parallel_for(n, fn);
    else if (n) fn(0, n);
  }

  void build_coefficients() {
    detail::EdgeClassTable table;
    std::vector<double> eps, sig;
    std::vector<bool> pec;
    for (const auto& m : g_.materials) {
      eps.push_back(m.eps_r);
      sig.push_back(m.effective_sigma(g_.f0));
      pec.push_back(m.is_pec());
    }
    cls_.assign(ez_.size(), table.pec);
    for (std::size_t i = 1; i < nx_; ++i)
      for (std::size_t j = 1; j < ny_; ++j) {
        const std::uint8_t ids[4] = {g_.at(i - 1, j - 1, 0), g_.at(i, j - 1, 0), g_.at(i - 1, j, 0), g_.at(i, j, 0)};
        double e = 0.0, s = 0.0;
        bool is_pec = false;
        for (auto id : ids) {
          is_pec = is_pec || pec[id];
          e += eps[id];
          s += sig[id];
        }
        cls_[node(i, j)] = is_pec ? table.pec : table.classify(e / 4.0, s / 4.0, dt_, g_.delta);
      }
    coeffs_ = table.coeffs;
    for (const auto& c : coeffs_) {
      ca_.push_back(static_cast<Real>(c.ca));
      cb_.push_back(static_cast<Real>(c.cb));
    }
  }

  struct AxisPml {
    std::vector<std::size_t> e_idx, h_idx;
    std::vector<Real> e_b, e_c, h_b, h_c, ik_n, ik_h;
    std::vector<Real> psi_e, psi_h;
  };

  void build_cpml(const CpmlSpec& spec) {
    const std::array<std::size_t, 2> n{nx_, ny_};
    const std::array<std::pair<int, int>, 2> lay{std::pair{g_.pml[XLo], g_.pml[XHi]},
                                                 std::pair{g_.pml[YLo], g_.pml[YHi]}};
    for (int a = 0; a < 2; ++a) {
      CpmlAxis ax(n[a], lay[a].first, lay[a].second, spec, dt_, g_.background_eps_r);
      auto& p = pml_[a];
      for (std::size_t q = 0; q < ax.b_n.size(); ++q)
        if (ax.b_n[q] != 0.0 || ax.c_n[q] != 0.0) {
          p.e_idx.push_back(q);
          p.e_b.push_back(static_cast<Real>(ax.b_n[q]));
          p.e_c.push_back(static_cast<Real>(ax.c_n[q]));
        }
      for (std::size_t q = 0; q < ax.b_h.size(); ++q)
        if (ax.b_h[q] != 0.0 || ax.c_h[q] != 0.0) {
          p.h_idx.push_back(q);
          p.h_b.push_back(static_cast<Real>(ax.b_h[q]));
          p.h_c.push_back(static_cast<Real>(ax.c_h[q]));
        }
      for (double v : ax.inv_kappa_n) p.ik_n.push_back(static_cast<Real>(v));
      for (double v : ax.inv_kappa_h) p.ik_h.push_back(static_cast<Real>(v));
      const std::size_t other = (a == 0 ? ny_ : nx_) + 1;
      p.psi_e.assign(p.e_idx.size() * other, Real(0));
      p.psi_h.assign(p.h_idx.size() * other, Real(0));
    }
  }

  void update_h() {
    const Real db = db_;
    const Real* ikx = pml_[0].ik_h.data();
    const Real* iky = pml_[1].ik_h.data();
    for_range(nx_ + 1, [&](std::size_t ib, std::size_t ie) {
      for (std::size_t i = ib; i < ie; ++i) {
        Real* __restrict hx = hx_.data() + node(i, 0);
        Real* __restrict hy = hy_.data() + node(i, 0);
        const Real* ez = ez_.data() + node(i, 0);
        for (std::size_t j = 0; j < ny_; ++j) hx[j] -= db * iky[j] * (ez[j + 1] - ez[j]);
        if (i < nx_) {
          const Real kx = ikx[i];
          for (std::size_t j = 0; j <= ny_; ++j) hy[j] += db * kx * (ez[j + sx_] - ez[j]);
        }
      }
    });
    // x-layers: Hy += db*psi(dEz/dx); y-layers: Hx -= db*psi(dEz/dy).
    auto& px = pml_[0];
    for_range(px.h_idx.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t s = b; s < e; ++s) {
        const std::size_t i = px.h_idx[s];
        const Real bb = px.h_b[s], cc = px.h_c[s];
        for (std::size_t j = 0; j <= ny_; ++j) {
          const std::size_t q = node(i, j);
          Real& ps = px.psi_h[s * (ny_ + 1) + j];
          ps = bb * ps + cc * (ez_[q + sx_] - ez_[q]);
          hy_[q] += db * ps;
        }
      }
    });
    auto& py = pml_[1];
    for_range(nx_ + 1, [&](std::size_t ib, std::size_t ie) {
      for (std::size_t i = ib; i < ie; ++i)
        for (std::size_t s = 0; s < py.h_idx.size(); ++s) {
          const std::size_t j = py.h_idx[s];
          const std::size_t q = node(i, j);
          Real& ps = py.psi_h[s * (nx_ + 1) + i];
          ps = py.h_b[s] * ps + py.h_c[s] * (ez_[q + 1] - ez_[q]);
          hx_[q] -= db * ps;
        }
    });
  }

  void update_e() {
    const Real* ikx = pml_[0].ik_n.data();
    const Real* iky = pml_[1].ik_n.data();
    const Real* ca = ca_.data();
    const Real* cb = cb_.data();
    for_range(nx_ + 1, [&](std::size_t ib, std::size_t ie) {
      for (std::size_t i = std::max<std::size_t>(ib, 1); i < std::min(ie, nx_); ++i) {
        Real* __restrict ez = ez_.data() + node(i, 0);
        const Real* hx = hx_.data() + node(i, 0);
        const Real* hy = hy_.data() + node(i, 0);
        const std::uint8_t* c = cls_.data() + node(i, 0);
        const Real kx = ikx[i];
        for (std::size_t j = 1; j < ny_; ++j)
          ez[j] = ca[c[j]] * ez[j] + cb[c[j]] * (kx * (hy[j] - hy[j - sx_]) - iky[j] * (hx[j] - hx[j - 1]));
      }
    });
    // x-layers: Ez += cb*psi(dHy/dx); y-layers: Ez -= cb*psi(dHx/dy).
    auto& px = pml_[0];
    for_range(px.e_idx.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t s = b; s < e; ++s) {
        const std::size_t i = px.e_idx[s];
        if (i == 0 || i >= nx_) continue;
        const Real bb = px.e_b[s], cc = px.e_c[s];
        for (std::size_t j = 1; j < ny_; ++j) {
          const std::size_t q = node(i, j);
          Real& ps = px.psi_e[s * (ny_ + 1) + j];
          ps = bb * ps + cc * (hy_[q] - hy_[q - sx_]);
          ez_[q] += cb[cls_[q]] * ps;
        }
      }
    });
    auto& py = pml_[1];
    for_range(nx_ + 1, [&](std::size_t ib, std::size_t ie) {
      for (std::size_t i = std::max<std::size_t>(ib, 1); i < std::min(ie, nx_); ++i)
        for (std::size_t s = 0; s < py.e_idx.size(); ++s) {
          const std::size_t j = py.e_idx[s];
          if (j == 0 || j >= ny_) continue;
          const std::size_t q = node(i, j);
          Real& ps = py.psi_e[s * (nx_ + 1) + i];
          ps = py.e_b[s] * ps + py.e_c[s] * (hx_[q] - hx_[q - 1]);
          ez_[q] -= cb[cls_[q]] * ps;
        }
    });
  }

  const MaterialGrid& g_;
  double dt_;
  ThreadPool* pool_;
  std::size_t nx_ = 0, ny_ = 0, sx_ = 0;
  std::size_t steps_ = 0;
  std::vector<Real> ez_, hx_, hy_;
  std::vector<std::uint8_t> cls_;
  std::vector<UpdateCoeffs> coeffs_;
  std::vector<Real> ca_, cb_;
  Real db_{};
  std::array<AxisPml, 2> pml_;
};

}  // namespace rswp
