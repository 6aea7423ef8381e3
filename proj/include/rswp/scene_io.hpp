#pragma once

// JSON scene files. Lengths in mm, frequencies in GHz, conductivity in S/m.

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "rswp/constants.hpp"
#include "rswp/error.hpp"
#include "rswp/presets.hpp"
#include "rswp/scene.hpp"

namespace rswp {

namespace detail {

using nlohmann::json;

inline void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ValidationError(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
    }
  }
}

inline bool has(const json& obj, const char* key) { return obj.contains(key) && !obj.at(key).is_null(); }

inline double number(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ParseError(where + "." + key + ": expected a number");
  return v.get<double>();
}

inline void opt_number(const json& obj, const char* key, const std::string& where, double& out, double scale = 1.0) {
  if (has(obj, key)) out = number(obj, key, where) * scale;
}

inline void opt_bool(const json& obj, const char* key, const std::string& where, bool& out) {
  if (!has(obj, key)) return;
  if (!obj.at(key).is_boolean()) throw ParseError(where + "." + key + ": expected true or false");
  out = obj.at(key).get<bool>();
}

inline std::string text(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ParseError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline std::vector<double> numbers(const json& obj, const char* key, const std::string& where, std::size_t n) {
  const auto& v = obj.at(key);
  if (!v.is_array() || v.size() != n) {
    throw ParseError(where + "." + key + ": expected an array of " + std::to_string(n) + " numbers");
  }
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ParseError(where + "." + key + ": expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline Material parse_material(const json& m, const std::string& where) {
  only_keys(m, where, {"kind", "eps_r", "sigma", "tan_delta"});
  const std::string kind = text(m, "kind", where);
  Material out;
  if (kind == "vacuum") out.kind = MaterialKind::Vacuum;
  else if (kind == "dielectric") out.kind = MaterialKind::Dielectric;
  else if (kind == "conductor") out.kind = MaterialKind::Conductor;
  else if (kind == "pec") out.kind = MaterialKind::PEC;
  else throw ValidationError(where + ".kind", "unknown material kind '" + kind + "'");
  opt_number(m, "eps_r", where, out.eps_r);
  opt_number(m, "sigma", where, out.sigma);
  opt_number(m, "tan_delta", where, out.tan_delta);
  out.validate(where);
  return out;
}

struct LayoutChoice {
  std::string layout = "straight";
  std::string material = "galinstan";
  WallMode mode = WallMode::DiscreteBars;
};

inline LayoutChoice preset_layout(const std::string& name) {
  if (name == "straight_copper") return {"straight", "copper", WallMode::DiscreteBars};
  if (name == "pec_walls") return {"straight", "pec", WallMode::ContinuousWall};
  if (name == "surface_only") return {"none", "", WallMode::DiscreteBars};
  if (name == "l_turn_galinstan") return {"l_turn", "galinstan", WallMode::DiscreteBars};
  return {};
}

}  // namespace detail

/// Builds a scene from parsed JSON. A "scenario" key names a preset whose
/// layout supplies the defaults; every other key overrides it.
inline RswpScene scene_from_json(const nlohmann::json& j) {
  using namespace detail;
  only_keys(j, "", {"scenario", "name", "domain", "slab", "lattice", "fill", "source", "probes", "materials",
                    "solver", "surface_reactance"});
  RswpScene s;
  LayoutChoice lc;
  if (has(j, "scenario")) {
    const std::string name = text(j, "scenario", "");
    if (!is_preset(name)) throw ValidationError("scenario", "unknown scenario '" + name + "'");
    s.name = name;
    lc = preset_layout(name);
  }
  if (has(j, "name")) s.name = text(j, "name", "");
  opt_number(j, "surface_reactance", "", s.surface_reactance);

  if (has(j, "materials")) {
    const auto& m = j.at("materials");
    if (!m.is_object()) throw ParseError("materials: expected an object");
    for (auto it = m.begin(); it != m.end(); ++it) {
      s.materials[it.key()] = parse_material(it.value(), "materials." + it.key());
    }
  }

  if (has(j, "slab")) {
    const auto& v = j.at("slab");
    only_keys(v, "slab", {"eps_r", "tan_delta", "thickness"});
    opt_number(v, "eps_r", "slab", s.slab.eps_r);
    opt_number(v, "tan_delta", "slab", s.slab.tan_delta);
    opt_number(v, "thickness", "slab", s.slab.thickness, kMm);
    s.slab.material().validate("slab");
  }

  PresetOptions po;
  if (has(j, "lattice")) {
    const auto& v = j.at("lattice");
    only_keys(v, "lattice", {"height", "radius", "pitch", "row_sep", "row_sep_is_inner_gap", "origin", "axis"});
    opt_number(v, "height", "lattice", s.lattice.height, kMm);
    opt_number(v, "radius", "lattice", s.lattice.radius, kMm);
    opt_number(v, "pitch", "lattice", s.lattice.pitch, kMm);
    opt_number(v, "row_sep", "lattice", s.lattice.row_sep, kMm);
    opt_bool(v, "row_sep_is_inner_gap", "lattice", po.row_sep_is_inner_gap);
    if (has(v, "origin")) {
      const auto o = numbers(v, "origin", "lattice", 2);
      s.lattice.origin = {o[0] * kMm, o[1] * kMm};
    }
    if (has(v, "axis")) {
      const auto a = numbers(v, "axis", "lattice", 2);
      s.lattice.axis = {a[0], a[1]};
    }
  }
  s.lattice.row_sep_is_inner_gap = po.row_sep_is_inner_gap;
  s.lattice.validate();

  if (has(j, "source")) {
    const auto& v = j.at("source");
    only_keys(v, "source",
              {"aperture_height", "aperture_width", "f0", "ramp_periods", "amplitude", "profile"});
    opt_number(v, "aperture_height", "source", s.source.aperture_height, kMm);
    opt_number(v, "aperture_width", "source", s.source.aperture_width, kMm);
    opt_number(v, "f0", "source", s.source.f0, kGHz);
    opt_number(v, "ramp_periods", "source", s.source.ramp_periods);
    opt_number(v, "amplitude", "source", s.source.amplitude);
    if (has(v, "profile")) {
      const std::string p = text(v, "profile", "source");
      if (p == "uniform") s.source.profile = SourceProfile::Uniform;
      else if (p == "tm0") s.source.profile = SourceProfile::Tm0Mode;
      else throw ValidationError("source.profile", "expected 'uniform' or 'tm0'");
    }
  }
  // The source sits at the path start facing along the channel.
  s.source.center = {s.lattice.origin.x, s.lattice.origin.y, s.slab_top() + 0.5 * s.source.aperture_height};
  s.source.facing = s.lattice.axis;

  if (has(j, "solver")) {
    const auto& v = j.at("solver");
    only_keys(v, "solver",
              {"delta", "safety", "cpml_layers", "mode", "max_periods", "steady_tol_db", "dft_window_periods"});
    opt_number(v, "delta", "solver", s.solver.delta, kMm);
    opt_number(v, "safety", "solver", s.solver.safety);
    if (has(v, "cpml_layers")) {
      if (!v.at("cpml_layers").is_number_integer()) throw ParseError("solver.cpml_layers: expected an integer");
      s.solver.cpml_layers = v.at("cpml_layers").get<int>();
    }
    if (has(v, "mode")) {
      const std::string m = text(v, "mode", "solver");
      if (m == "2d") s.solver.mode = SolverMode::TwoD;
      else if (m == "3d") s.solver.mode = SolverMode::ThreeD;
      else throw ValidationError("solver.mode", "expected '2d' or '3d'");
    }
    opt_number(v, "max_periods", "solver", s.solver.max_periods);
    opt_number(v, "steady_tol_db", "solver", s.solver.steady_tol_db);
    opt_number(v, "dft_window_periods", "solver", s.solver.dft_window_periods);
  }
  po.mode = s.solver.mode;
  po.delta = s.solver.delta;

  if (has(j, "fill")) {
    const auto& v = j.at("fill");
    only_keys(v, "fill", {"pattern", "material", "wall_mode", "path_lambda", "leg1_lambda", "leg2_lambda",
                          "mitered", "walls_into_absorber"});
    if (has(v, "pattern")) lc.layout = text(v, "pattern", "fill");
    if (has(v, "material")) lc.material = text(v, "material", "fill");
    if (has(v, "wall_mode")) {
      const std::string m = text(v, "wall_mode", "fill");
      if (m == "bars") lc.mode = WallMode::DiscreteBars;
      else if (m == "continuous") lc.mode = WallMode::ContinuousWall;
      else throw ValidationError("fill.wall_mode", "expected 'bars' or 'continuous'");
    }
    opt_number(v, "path_lambda", "fill", po.path_lambda);
    opt_number(v, "leg1_lambda", "fill", po.leg1_lambda);
    opt_number(v, "leg2_lambda", "fill", po.leg2_lambda);
    opt_bool(v, "mitered", "fill", po.mitered);
    opt_bool(v, "walls_into_absorber", "fill", po.walls_into_absorber);
  }
  if (lc.layout != "none" && !s.materials.count(lc.material)) {
    throw ValidationError("fill.material", "unknown material '" + lc.material + "'");
  }
  apply_layout(s, lc.layout, lc.material, lc.mode, po);

  if (has(j, "probes")) {
    const auto& v = j.at("probes");
    only_keys(v, "probes", {"spacing_lambda", "tilt_deg", "height", "component"});
    ProbeSet ps = s.probes;
    opt_number(v, "spacing_lambda", "probes", ps.spacing_lambda);
    opt_number(v, "tilt_deg", "probes", ps.tilt_deg);
    opt_number(v, "height", "probes", ps.height, kMm);
    if (has(v, "component")) {
      const std::string c = text(v, "component", "probes");
      if (c == "En") ps.component = ProbeComponent::En;
      else if (c == "Et_long") ps.component = ProbeComponent::EtLong;
      else if (c == "Et_trans") ps.component = ProbeComponent::EtTrans;
      else throw ValidationError("probes.component", "expected En, Et_long or Et_trans");
    }
    if (!(ps.spacing_lambda > 0.0)) throw ValidationError("probes.spacing_lambda", "must be positive");
    const double extent = lc.layout == "l_turn" ? po.leg1_lambda : po.path_lambda;
    s.probes = gen_probe_lines(s.fill.path, s.lambda0(), s.slab_top(), ps.spacing_lambda, ps.tilt_deg, extent,
                               ps.height, ps.component);
  }

  if (has(j, "domain")) {
    const auto& v = j.at("domain");
    only_keys(v, "domain", {"lo", "hi"});
    const auto lo = numbers(v, "lo", "domain", 3);
    const auto hi = numbers(v, "hi", "domain", 3);
    s.domain.lo = {lo[0] * kMm, lo[1] * kMm, lo[2] * kMm};
    s.domain.hi = {hi[0] * kMm, hi[1] * kMm, hi[2] * kMm};
  }

  s.validate();
  return s;
}

inline RswpScene parse_scene(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("scene: ") + e.what());
  }
  try {
    return scene_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scene: ") + e.what());
  }
}

inline RswpScene load_scene(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open scene file " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_scene(ss.str());
}

}  // namespace rswp
