#pragma once

// Scenario runs and the dB metrics extracted from their probe tables.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rswp/boundaries.hpp"
#include "rswp/error.hpp"
#include "rswp/excitation.hpp"
#include "rswp/fdtd2d.hpp"
#include "rswp/fdtd3d.hpp"
#include "rswp/grid.hpp"
#include "rswp/instrumentation.hpp"
#include "rswp/oracles.hpp"
#include "rswp/parallel.hpp"
#include "rswp/presets.hpp"
#include "rswp/run.hpp"
#include "rswp/scene.hpp"

namespace rswp {

inline constexpr double kCpmlOrder = 3.0;
inline constexpr double kCpmlR0 = 1e-6;
inline constexpr double kReferenceLambda = 5.0;  // in-path dB is relative to this probe

struct SimulationOptions {
  std::size_t threads = 1;
  double amplitude_scale = 1.0;
  std::vector<SliceRequest>* slices = nullptr;
  std::size_t max_steps = 0;  // 0: derived from solver.max_periods
};

struct Simulation {
  RunRecord record;
  std::vector<ProbeRow> rows;
  std::size_t cells = 0;
};

namespace detail {

template <class Solver>
Simulation drive(Solver& solver, const RswpScene& scene, const MaterialGrid& grid,
                 const std::vector<SourceNode>& nodes, const SimulationOptions& opt) {
  Transducer src = scene.source;
  src.amplitude *= opt.amplitude_scale;
  StopRule stop;
  const double periods = scene.solver.max_periods;
  const std::size_t spp = std::size_t(std::lround(1.0 / (src.f0 * solver.dt())));
  stop.max_steps = opt.max_steps ? opt.max_steps : std::size_t(std::ceil(periods)) * spp;
  stop.window_periods = scene.solver.dft_window_periods;
  stop.steady_tol_db = scene.solver.steady_tol_db;
  // The slowest in-path wavefront must have crossed the domain before a
  // steady verdict is meaningful.
  const double span = std::hypot(scene.domain.hi.x - scene.domain.lo.x, scene.domain.hi.y - scene.domain.lo.y);
  stop.min_periods = src.ramp_periods + span / scene.lambda0() * grid.background_eps_r;
  Simulation sim;
  sim.record = run(solver, nodes, src, scene.probes.probes, stop, opt.slices);
  sim.cells = grid.nx * grid.ny * grid.nz;
  for (std::size_t p = 0; p < scene.probes.probes.size(); ++p) {
    const auto& pr = scene.probes.probes[p];
    sim.rows.push_back({pr.id, pr.line, pr.dist_lambda, pr.position, sim.record.probes[p].phasor, 0.0});
  }
  return sim;
}

}  // namespace detail

/// Voxelizes and runs `scene` until steady state (or the period budget).
inline Simulation simulate(const RswpScene& scene, const SimulationOptions& opt = {}) {
  scene.validate();
  const MaterialGrid grid = voxelize(scene, scene.solver.delta);
  const bool two_d = scene.solver.mode == SolverMode::TwoD;
  const double dt = run_dt(grid.delta, scene.solver.safety, two_d ? 2 : 3, scene.source.f0);
  const CpmlSpec cpml = cpml_profile(scene.solver.cpml_layers, kCpmlOrder, kCpmlR0, grid.delta,
                                     grid.background_eps_r, scene.source.f0);
  std::optional<oracle::DispersionSolution> disp;
  if (scene.source.profile == SourceProfile::Tm0Mode) {
    const Material sm = scene.slab.material();
    disp = oracle::tm0_grounded_slab(sm.eps_r, scene.slab.thickness, scene.source.f0);
  }
  const auto nodes = source_footprint(grid, scene.source, scene.slab_top(), disp);
  ThreadPool pool(std::max<std::size_t>(1, opt.threads));
  if (two_d) {
    Fdtd2D<double> solver(grid, dt, cpml, &pool);
    return detail::drive(solver, scene, grid, nodes, opt);
  }
  Fdtd3D<float> solver(grid, dt, cpml, &pool);
  return detail::drive(solver, scene, grid, nodes, opt);
}

// ---------------------------------------------------------------------------
// Metrics

struct ScenarioMetrics {
  std::map<double, double> gain_vs_baseline_at;  // distance (lambda) -> dB
  double drop_over_path = 0.0;
  double leakage_floor = 0.0;
  std::optional<double> turn_loss;
};

struct ScenarioResult {
  std::string scenario;
  SolverMode mode = SolverMode::TwoD;
  double delta = 0.0;
  double path_lambda = 0.0;
  std::vector<double> corners_lambda;  // arc length of each path corner
  double row_sep = 0.0;                // row-center separation, m
  std::vector<ProbeRow> rows;
  ScenarioMetrics metrics;
  std::size_t steps = 0;
  bool steady = false;
  double wall_seconds = 0.0;
  std::size_t cells = 0;
};

namespace detail {

inline const ProbeRow* find_row(const std::vector<ProbeRow>& rows, ProbeLine line, double dist) {
  for (const auto& r : rows) {
    if (r.line == line && std::abs(r.dist_lambda - dist) < 1e-6) return &r;
  }
  return nullptr;
}

/// -inf for a probe that saw no field (e.g. inside a PEC wall).
inline double mag_db(const ProbeRow& r) { return 20.0 * std::log10(std::abs(r.phasor)); }

}  // namespace detail

/// In-path dB at `dist` relative to in-path dB at `ref`.
inline double in_path_db(const ScenarioResult& r, double dist, double ref = kReferenceLambda) {
  const auto* a = detail::find_row(r.rows, ProbeLine::InPath, dist);
  const auto* b = detail::find_row(r.rows, ProbeLine::InPath, ref);
  if (!a || !b) throw PreconditionError("in_path_db: no in-path probe at the requested distance");
  return detail::mag_db(*a) - detail::mag_db(*b);
}

inline double last_in_path_lambda(const ScenarioResult& r) {
  double d = -1.0;
  for (const auto& row : r.rows)
    if (row.line == ProbeLine::InPath) d = std::max(d, row.dist_lambda);
  if (d < 0.0) throw PreconditionError("no in-path probes");
  return d;
}

/// dB lost between the reference probe and the last in-path probe.
inline double drop_over_path(const ScenarioResult& r) { return -in_path_db(r, last_in_path_lambda(r)); }

/// Loss across a corner at `corner_lambda`: in-path dB at corner - 2 lambda
/// minus in-path dB at corner + 2 lambda.
inline double turn_loss(const ScenarioResult& r, std::optional<double> corner_lambda = {}) {
  double c;
  if (corner_lambda) {
    c = *corner_lambda;
  } else {
    if (r.corners_lambda.empty()) throw PreconditionError("turn_loss: scenario has no corner");
    c = r.corners_lambda.front();
  }
  const auto* before = detail::find_row(r.rows, ProbeLine::InPath, c - 2.0);
  const auto* after = detail::find_row(r.rows, ProbeLine::InPath, c + 2.0);
  if (!before || !after) throw PreconditionError("turn_loss: missing corner probes");
  return detail::mag_db(*before) - detail::mag_db(*after);
}

/// Median of tilted-probe dB relative to the in-path probe at the same
/// distance, over tilted probes further than one row separation from the
/// path centerline. Returns NaN when no probe qualifies.
inline double leakage_floor(const ScenarioResult& r) {
  std::vector<double> v;
  for (const auto& t : r.rows) {
    if (t.line != ProbeLine::Tilted) continue;
    const auto* p = detail::find_row(r.rows, ProbeLine::InPath, t.dist_lambda);
    if (!p) continue;
    const double offset = (t.position - p->position).xy().norm();
    if (offset <= r.row_sep) continue;
    v.push_back(detail::mag_db(t) - detail::mag_db(*p));
  }
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Least-squares slope of in-path dB over [from, to] (lambda), scaled to
/// the interval length: the fitted dB change across it.
inline double leg_change_db(const ScenarioResult& r, double from, double to) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& row : r.rows) {
    if (row.line != ProbeLine::InPath || row.dist_lambda < from - 1e-9 || row.dist_lambda > to + 1e-9) continue;
    const double x = row.dist_lambda, y = detail::mag_db(row);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw PreconditionError("leg_change_db: need two in-path probes in range");
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return slope * (to - from);
}

/// Per-distance in-path dB of `result` minus `baseline`. Both runs share the
/// source amplitude, so absolute magnitudes are comparable.
inline std::map<double, double> compare(const ScenarioResult& result, const ScenarioResult& baseline) {
  std::map<double, double> out;
  std::size_t a = 0, b = 0;
  for (const auto& r : result.rows) a += r.line == ProbeLine::InPath;
  for (const auto& r : baseline.rows) b += r.line == ProbeLine::InPath;
  if (a != b) throw PreconditionError("compare: probe grids differ");
  for (const auto& r : result.rows) {
    if (r.line != ProbeLine::InPath) continue;
    const auto* q = detail::find_row(baseline.rows, ProbeLine::InPath, r.dist_lambda);
    if (!q) throw PreconditionError("compare: probe grids differ");
    // Difference of logs before scaling, so identical inputs give exactly 0
    // even with contracted multiply-adds.
    out[r.dist_lambda] = 20.0 * (std::log10(std::abs(r.phasor)) - std::log10(std::abs(q->phasor)));
  }
  return out;
}

/// Fills the per-scenario metrics (everything except baseline gains).
inline void compute_metrics(ScenarioResult& r) {
  for (auto& row : r.rows) {
    if (row.line == ProbeLine::Tilted) {
      const auto* p = detail::find_row(r.rows, ProbeLine::InPath, kReferenceLambda);
      row.db = p ? detail::mag_db(row) - detail::mag_db(*p) : 0.0;
    } else {
      row.db = in_path_db(r, row.dist_lambda);
    }
  }
  r.metrics.drop_over_path = drop_over_path(r);
  r.metrics.leakage_floor = leakage_floor(r);
  if (!r.corners_lambda.empty()) r.metrics.turn_loss = turn_loss(r);
}

inline void attach_gain(ScenarioResult& r, const ScenarioResult& baseline) {
  const auto d = compare(r, baseline);
  for (double at : {35.0, 50.0}) {
    auto it = d.find(at);
    if (it != d.end()) r.metrics.gain_vs_baseline_at[at] = it->second;
  }
}

inline ScenarioResult make_result(const RswpScene& scene, const Simulation& sim) {
  ScenarioResult r;
  r.scenario = scene.name;
  r.mode = scene.solver.mode;
  r.delta = scene.solver.delta;
  r.path_lambda = scene.fill.path.length() / scene.lambda0();
  for (double s : scene.fill.path.corner_arc_lengths()) r.corners_lambda.push_back(s / scene.lambda0());
  r.row_sep = scene.lattice.row_center_sep();
  r.rows = sim.rows;
  r.steps = sim.record.steps;
  r.steady = sim.record.steady;
  r.wall_seconds = sim.record.wall_seconds;
  r.cells = sim.cells;
  compute_metrics(r);
  return r;
}

inline ScenarioResult run_scene(const RswpScene& scene, const SimulationOptions& opt = {}) {
  return make_result(scene, simulate(scene, opt));
}

inline ScenarioResult run_paper_scenario(const std::string& name, const PresetOptions& preset,
                                         const SimulationOptions& opt = {}) {
  return run_scene(make_preset(name, preset), opt);
}

// ---------------------------------------------------------------------------
// Resource estimate

inline constexpr double kLargeGridCells = 1e8;

struct ResourceEstimate {
  std::size_t nx = 0, ny = 0, nz = 0;
  std::size_t cells = 0;
  double bytes = 0.0;
  std::size_t steps = 0;  // expected, to a steady verdict
};

inline ResourceEstimate estimate(const RswpScene& scene) {
  const double d = scene.solver.delta;
  const int L = scene.solver.cpml_layers;
  const bool two_d = scene.solver.mode == SolverMode::TwoD;
  auto span = [&](double lo, double hi) {
    return static_cast<std::size_t>(std::ceil(hi / d - 1e-9) - std::floor(lo / d + 1e-9));
  };
  ResourceEstimate e;
  e.nx = span(scene.domain.lo.x, scene.domain.hi.x) + 2 * L;
  e.ny = span(scene.domain.lo.y, scene.domain.hi.y) + 2 * L;
  e.nz = two_d ? 1 : span(0.0, scene.domain.hi.z) + L;
  e.cells = e.nx * e.ny * e.nz;
  // Six float fields in 3D, three double fields in 2D; absorber state ~15%.
  e.bytes = double(e.cells) * (two_d ? 3 * 8 : 6 * 4) * 1.15;
  int spp = 0;
  run_dt(d, scene.solver.safety, two_d ? 2 : 3, scene.source.f0, &spp);
  const double reach = std::hypot(scene.domain.hi.x - scene.domain.lo.x, scene.domain.hi.y - scene.domain.lo.y);
  const double eps = two_d ? effective_medium_2d(scene.slab, scene.source.f0).eps_r : 1.0;
  const double periods = std::min(scene.solver.max_periods, scene.source.ramp_periods +
                                                                reach / scene.lambda0() * eps +
                                                                2.0 * scene.solver.dft_window_periods);
  e.steps = static_cast<std::size_t>(std::ceil(periods)) * std::size_t(spp);
  return e;
}

// ---------------------------------------------------------------------------
// Output files

inline std::string delta_tag(double delta) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%gmm", delta / kMm);
  return buf;
}

inline nlohmann::json metrics_json(const ScenarioResult& r) {
  nlohmann::json gains = nlohmann::json::object();
  for (auto [d, v] : r.metrics.gain_vs_baseline_at) {
    char key[32];
    std::snprintf(key, sizeof key, "%g", d);
    gains[key] = v;
  }
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json m{{"gain_vs_baseline_at", gains},
                   {"drop_over_path", num(r.metrics.drop_over_path)},
                   {"leakage_floor", num(r.metrics.leakage_floor)},
                   {"turn_loss", r.metrics.turn_loss ? num(*r.metrics.turn_loss) : nlohmann::json(nullptr)}};
  return {{"scenario", r.scenario},  {"mode", to_string(r.mode)}, {"delta_mm", r.delta / kMm},
          {"path_lambda", r.path_lambda}, {"steps", r.steps},     {"steady", r.steady},
          {"cells", r.cells},         {"metrics", m}};
}

/// Writes <out>/<scenario>/<mode>_<delta>.csv and metrics.json next to it.
inline std::filesystem::path write_result(const ScenarioResult& r, const std::filesystem::path& out) {
  const auto dir = out / r.scenario;
  const auto csv = dir / (std::string(to_string(r.mode)) + "_" + delta_tag(r.delta) + ".csv");
  write_file_atomic(csv, probe_csv(r.scenario, r.rows));
  write_file_atomic(dir / "metrics.json", metrics_json(r).dump(2) + "\n");
  return csv;
}

}  // namespace rswp
