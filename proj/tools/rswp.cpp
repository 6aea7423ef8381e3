// rswp command-line driver: run scenarios, self-checks and estimates.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rswp/rswp.hpp"

namespace fs = std::filesystem;
using namespace rswp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonArgs {
  std::string scenario;
  std::string scene_file;
  std::string mode = "2d";
  double delta_mm = 0.25;
  double path_lambda = 50.0;
  unsigned threads = default_thread_count();
  std::string out;
  std::string slice;
  bool check_determinism = false;
};

void print_scenarios(std::ostream& os) {
  os << "available scenarios:\n"
     << "  straight_galinstan  two rows of galinstan bars along a straight path\n"
     << "  straight_copper     same path with copper bars\n"
     << "  pec_walls           same path with continuous PEC walls\n"
     << "  surface_only        bare slab, no confinement\n"
     << "  l_turn_galinstan    galinstan bars along a 35+15 lambda right-angled turn\n";
}

fs::path output_root(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("RSWP_OUT"); env && *env) return env;
  return "results";
}

SolverMode parse_mode(const std::string& m) {
  if (m == "2d") return SolverMode::TwoD;
  if (m == "3d") return SolverMode::ThreeD;
  throw UsageError("--mode must be 2d or 3d");
}

RswpScene build_scene(const CommonArgs& a) {
  if (a.scenario.empty() == a.scene_file.empty()) throw UsageError("give exactly one of --scenario or --scene");
  if (!a.scene_file.empty()) return load_scene(a.scene_file);
  if (!is_preset(a.scenario)) throw UsageError("unknown scenario '" + a.scenario + "'");
  PresetOptions o;
  o.mode = parse_mode(a.mode);
  o.delta = a.delta_mm * kMm;
  o.path_lambda = a.path_lambda;
  return make_preset(a.scenario, o);
}

/// "z=2.0" -> plane normal to z at 2 mm.
SliceRequest parse_slice(const std::string& spec, const RswpScene& scene) {
  const auto eq = spec.find('=');
  if (eq != 1 || spec.size() < 3) throw UsageError("--slice expects <axis>=<mm>, e.g. z=2");
  double mm = 0.0;
  try {
    mm = std::stod(spec.substr(2));
  } catch (const std::logic_error&) {
    throw UsageError("--slice: bad coordinate in '" + spec + "'");
  }
  const MaterialGrid g = voxelize(scene, scene.solver.delta);
  SliceRequest r;
  auto index = [&](double v, double origin, std::size_t n) {
    const long q = std::lround((v - origin) / g.delta);
    if (q < 0 || q > long(n)) throw UsageError("--slice: plane lies outside the grid");
    return std::size_t(q);
  };
  const double v = mm * kMm;
  switch (spec[0]) {
    case 'x': r.axis = SliceAxis::X; r.offset = index(v, g.origin.x, g.nx); break;
    case 'y': r.axis = SliceAxis::Y; r.offset = index(v, g.origin.y, g.ny); break;
    case 'z': r.axis = SliceAxis::Z; r.offset = g.two_d ? 0 : index(v - 0.5 * g.delta, g.origin.z, g.nz - 1); break;
    default: throw UsageError("--slice axis must be x, y or z");
  }
  if (g.two_d && r.axis != SliceAxis::Z) throw UsageError("--slice: 2D runs only have the z plane");
  return r;
}

void attach_baseline(ScenarioResult& r, const fs::path& root) {
  if (r.scenario == "surface_only") return;
  const auto base = root / "surface_only" / (std::string(to_string(r.mode)) + "_" + delta_tag(r.delta) + ".csv");
  if (!fs::exists(base)) return;
  std::ifstream is(base);
  std::ostringstream ss;
  ss << is.rdbuf();
  ScenarioResult b;
  b.rows = parse_probe_csv(ss.str());
  try {
    attach_gain(r, b);
  } catch (const PreconditionError& e) {
    std::cerr << "note: baseline " << base << " not comparable: " << e.what() << "\n";
  }
}

int cmd_run(const CommonArgs& a, bool require_slice) {
  const RswpScene scene = build_scene(a);
  if (require_slice && a.slice.empty()) throw UsageError("slice needs --slice <axis>=<mm>");
  const auto est = estimate(scene);
  if (double(est.cells) > kLargeGridCells) {
    std::cerr << "warning: " << est.cells << " cells (" << est.bytes / 1e9 << " GB) exceeds the 1e8-cell guideline\n";
  }
  std::vector<SliceRequest> slices;
  if (!a.slice.empty()) slices.push_back(parse_slice(a.slice, scene));
  SimulationOptions opt;
  opt.threads = a.threads;
  opt.slices = slices.empty() ? nullptr : &slices;
  ScenarioResult r = run_scene(scene, opt);
  const fs::path root = output_root(a.out);
  attach_baseline(r, root);
  const auto csv = write_result(r, root);
  std::cout << "wrote " << csv.string() << " (" << r.steps << " steps, " << r.wall_seconds << " s)\n";
  for (const auto& s : slices) {
    const auto path = root / r.scenario /
                      (std::string(to_string(r.mode)) + "_" + delta_tag(r.delta) + "_slice_" + a.slice + "mm.raster");
    write_slice(s.result, path);
    std::cout << "wrote " << path.string() << "\n";
  }
  std::cout << metrics_json(r)["metrics"].dump() << "\n";

  int status = kExitOk;
  if (!r.steady) {
    std::cerr << "error: no steady state within the period budget\n";
    status = kExitFail;
  }
  if (a.check_determinism) {
    SimulationOptions one = opt;
    one.threads = 1;
    one.slices = nullptr;
    const ScenarioResult r1 = run_scene(scene, one);
    const bool same = probe_csv(r.scenario, r.rows) == probe_csv(r1.scenario, r1.rows);
    std::cout << "determinism (" << a.threads << " vs 1 threads): " << (same ? "identical" : "DIFFERENT") << "\n";
    if (!same) status = kExitFail;
  }
  return status;
}

int cmd_validate() {
  const auto sol = oracle::tm0_grounded_slab(2.2, 1.0 * kMm, 30 * kGHz);
  std::printf("grounded slab TM0 (eps_r 2.2, d 1 mm, 30 GHz)\n");
  std::printf("  beta        %.4f rad/m\n", sol.beta);
  std::printf("  n_eff       %.6f\n", sol.n_eff);
  std::printf("  alpha0      %.3f Np/m (1/e height %.3f mm)\n", sol.alpha0, 1e3 / sol.alpha0);
  std::printf("  residual    %.3e\n", sol.residual());
  std::printf("impedance surface, Xs = 130 ohm\n");
  std::printf("  alpha0      %.3f Np/m\n", oracle::impedance_wave_decay(130.0, 30 * kGHz));
  std::printf("skin depth at 30 GHz\n");
  std::printf("  galinstan   %.4f um\n", oracle::skin_depth(kSigmaGalinstan, 30 * kGHz) * 1e6);
  std::printf("  copper      %.4f um\n", oracle::skin_depth(kSigmaCopper, 30 * kGHz) * 1e6);
  std::printf("spreading 5 -> 50 lambda  %.4f dB\n\n", oracle::spreading_db(5.0, 50.0));

  bool ok = true;
  auto line = [&](const char* name, bool pass, const std::string& detail) {
    ok = ok && pass;
    std::printf("%s  %-34s %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
  };
  char buf[160];
  std::snprintf(buf, sizeof buf, "residual %.2e", sol.residual());
  line("dispersion residual < 1e-10", std::abs(sol.residual()) < 1e-10, buf);
  const double drift = check::pec_box_energy_drift();
  std::snprintf(buf, sizeof buf, "drift %.3e per 1000 steps", drift);
  line("PEC box energy drift < 0.1%", drift < 1e-3, buf);
  const double e20 = check::vacuum_phase_velocity_error(20.0);
  const double e40 = check::vacuum_phase_velocity_error(40.0);
  std::snprintf(buf, sizeof buf, "%.4f%% at 20 cells, %.4f%% at 40 cells (ratio %.2f)", 100 * e20, 100 * e40,
                e20 / e40);
  line("phase velocity error < 0.5%, ~4x", e20 < 5e-3 && e20 / e40 > 3.0 && e20 / e40 < 5.0, buf);
  const double refl = check::cpml_normal_reflection_db();
  std::snprintf(buf, sizeof buf, "%.1f dB", refl);
  line("CPML normal reflection < -50 dB", refl < -50.0, buf);
  return ok ? kExitOk : kExitFail;
}

fs::path calibration_file(const fs::path& root) { return root / ".calibration.json"; }

/// Cell-updates per second of this machine for `mode`, measured once and
/// cached under the output root.
double throughput(SolverMode mode, const fs::path& root, unsigned threads) {
  const auto path = calibration_file(root);
  const std::string key = std::string(to_string(mode)) + "_t" + std::to_string(threads);
  nlohmann::json cache = nlohmann::json::object();
  if (fs::exists(path)) {
    std::ifstream is(path);
    try {
      cache = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception&) {
      cache = nlohmann::json::object();
    }
    if (cache.contains(key) && cache[key].is_number()) return cache[key].get<double>();
  }
  ThreadPool pool(threads);
  const double d = 0.25 * kMm;
  const std::size_t steps = 40;
  double rate;
  const auto t0 = std::chrono::steady_clock::now();
  if (mode == SolverMode::TwoD) {
    const auto g = uniform_grid(600, 600, 1, d, Material::dielectric(1.13, 0.0), 10, true);
    Fdtd2D<double> s(g, cfl_dt(d, 0.99, 2), cpml_profile(10, 3.0, 1e-6, d, 1.13), &pool);
    for (std::size_t q = 0; q < steps; ++q) s.step();
    rate = double(g.cell_count()) * steps;
  } else {
    const auto g = uniform_grid(90, 90, 90, d, Material::vacuum(), 10, false, true);
    Fdtd3D<float> s(g, cfl_dt(d, 0.99, 3), cpml_profile(10, 3.0, 1e-6, d), &pool);
    for (std::size_t q = 0; q < steps; ++q) s.step();
    rate = double(g.cell_count()) * steps;
  }
  rate /= std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  cache[key] = rate;
  try {
    write_file_atomic(path, cache.dump(2) + "\n");
  } catch (const IoError&) {
    // Read-only output root: the estimate is still valid, just not cached.
  }
  return rate;
}

int cmd_estimate(const CommonArgs& a) {
  const RswpScene scene = build_scene(a);
  const auto e = estimate(scene);
  const double rate = throughput(scene.solver.mode, output_root(a.out), a.threads);
  std::printf("scene        %s (%s, delta %.3g mm)\n", scene.name.c_str(), to_string(scene.solver.mode),
              scene.solver.delta / kMm);
  std::printf("grid         %zu x %zu x %zu = %zu cells\n", e.nx, e.ny, e.nz, e.cells);
  std::printf("memory       %.3f GB\n", e.bytes / 1e9);
  std::printf("steps        %zu (expected to steady state)\n", e.steps);
  std::printf("throughput   %.3g cell-steps/s (%u threads)\n", rate, a.threads);
  std::printf("runtime      %.1f s projected\n", double(e.cells) * double(e.steps) / rate);
  if (double(e.cells) > kLargeGridCells) std::printf("warning: grid exceeds the 1e8-cell guideline\n");
  return kExitOk;
}

void add_scene_flags(CLI::App* c, CommonArgs& a) {
  c->add_option("--scenario", a.scenario, "built-in scenario name (see `rswp scenarios`)");
  c->add_option("--scene", a.scene_file, "scene description file (JSON, mm/GHz)")->check(CLI::ExistingFile);
  c->add_option("--mode", a.mode, "solver mode: 2d (effective index) or 3d")->capture_default_str();
  c->add_option("--delta-mm", a.delta_mm, "cell size in mm")->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--path-lambda", a.path_lambda, "straight path length in free-space wavelengths")
      ->capture_default_str()
      ->check(CLI::Range(1.0, 1000.0));
  c->add_option("--threads", a.threads, "worker threads (default: all cores)")
      ->capture_default_str()
      ->check(CLI::Range(1u, 1024u));
  c->add_option("--out", a.out, "output root (default: $RSWP_OUT or ./results)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconfigurable surface-wave platform FDTD simulator"};
  app.require_subcommand(1);
  CommonArgs a;

  auto* run = app.add_subcommand("run", "run a scenario to steady state and write probe tables");
  add_scene_flags(run, a);
  run->add_option("--slice", a.slice, "also write a phasor raster of plane <axis>=<mm>, e.g. z=2");
  run->add_flag("--check-determinism", a.check_determinism,
                "rerun single-threaded and require byte-identical probe tables");

  auto* slice = app.add_subcommand("slice", "run a scenario and write a phasor raster of one plane");
  add_scene_flags(slice, a);
  slice->add_option("--slice", a.slice, "plane <axis>=<mm>, e.g. z=2")->required();

  auto* est = app.add_subcommand("estimate", "print cell count, memory and projected runtime");
  add_scene_flags(est, a);

  app.add_subcommand("validate", "run the oracle and solver self-check suite");
  app.add_subcommand("scenarios", "list built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand("scenarios")) {
      print_scenarios(std::cout);
      return kExitOk;
    }
    if (app.got_subcommand("validate")) return cmd_validate();
    if (app.got_subcommand("estimate")) return cmd_estimate(a);
    if (app.got_subcommand("slice")) return cmd_run(a, true);
    return cmd_run(a, false);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    print_scenarios(std::cerr);
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "invalid scene: " << e.what() << "\n";
    return kExitFail;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
