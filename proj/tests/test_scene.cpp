#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "rswp/presets.hpp"
#include "rswp/scene.hpp"
#include "rswp/scene_io.hpp"

using namespace rswp;

namespace {

const double kLam = free_space_wavelength(30 * kGHz);
const MaterialTable kTable = default_materials();

std::set<std::pair<long, long>> site_keys(const FillPattern& fp, bool mirror) {
  std::set<std::pair<long, long>> out;
  for (const auto& s : fp.sites) {
    const double y = mirror ? -s.center.y : s.center.y;
    out.insert({std::lround(s.center.x * 1e9), std::lround(y * 1e9)});
  }
  return out;
}

}  // namespace

TEST(Material, Validation) {
  EXPECT_NO_THROW(Material::dielectric(2.2, 0.0009).validate("m"));
  EXPECT_THROW(Material::dielectric(0.5, 0.0).validate("m"), ValidationError);
  Material bad = Material::conductor(-1.0);
  EXPECT_THROW(bad.validate("m"), ValidationError);
  Material pec = Material::pec();
  pec.sigma = 1.0;
  EXPECT_THROW(pec.validate("m"), ValidationError);
}

TEST(Lattice, PitchBoundary) {
  BarLattice lat;
  lat.pitch = 3.0 * kMm;
  EXPECT_NO_THROW(lat.validate());
  lat.pitch = 1.9 * kMm;
  EXPECT_THROW(lat.validate(), ValidationError);
}

TEST(Lattice, RowSeparationReadings) {
  BarLattice lat;
  EXPECT_DOUBLE_EQ(lat.row_center_sep(), 6.0 * kMm);
  lat.row_sep_is_inner_gap = true;
  EXPECT_DOUBLE_EQ(lat.row_center_sep(), 8.0 * kMm);
}

TEST(GenStraight, SlotCountFormula) {
  const auto fp = gen_straight(BarLattice{}, kLam, 50.0, "galinstan", kTable);
  const int slots = static_cast<int>(std::floor(50.0 * kLam / (4.0 * kMm))) + 1;
  EXPECT_EQ(slots, 125);
  EXPECT_EQ(fp.bar_count(), std::size_t(2 * slots));
  for (const auto& s : fp.sites) EXPECT_EQ(s.material, "galinstan");
}

TEST(GenStraight, NominalWavelengthGives126Slots) {
  // With lambda0 rounded to 10 mm the same formula gives floor(500/4)+1.
  const auto fp = gen_straight(BarLattice{}, 10.0 * kMm, 50.0, "galinstan", kTable);
  EXPECT_EQ(fp.bar_count(), 252u);
}

TEST(GenStraight, MirrorSymmetric) {
  for (double len : {1.0, 7.5, 50.0}) {
    const auto fp = gen_straight(BarLattice{}, kLam, len, "copper", kTable);
    EXPECT_EQ(site_keys(fp, false), site_keys(fp, true)) << len;
  }
}

TEST(GenStraight, Preconditions) {
  EXPECT_THROW(gen_straight(BarLattice{}, kLam, 0.0, "galinstan", kTable), PreconditionError);
  EXPECT_THROW(gen_straight(BarLattice{}, kLam, 5.0, "unobtainium", kTable), ValidationError);
}

TEST(GenStraight, ContinuousWallsHaveNoSlots) {
  const auto fp = gen_straight(BarLattice{}, kLam, 50.0, "pec", kTable, WallMode::ContinuousWall);
  EXPECT_TRUE(fp.sites.empty());
  ASSERT_EQ(fp.walls.size(), 2u);
  EXPECT_NEAR((fp.walls[0].b - fp.walls[0].a).norm(), 50.0 * kLam, 1e-12);
  EXPECT_NEAR(std::abs(fp.walls[0].a.y - fp.walls[1].a.y), 6.0 * kMm, 1e-12);
}

TEST(GenLTurn, PaperGeometryCount) {
  const auto fp = gen_l_turn(BarLattice{}, kLam, 35.0, 15.0, "galinstan", kTable);
  const auto a = gen_straight(BarLattice{}, kLam, 35.0, "galinstan", kTable).bar_count();
  const auto b = gen_straight(BarLattice{}, kLam, 15.0, "galinstan", kTable).bar_count();
  EXPECT_EQ(a, 176u);
  EXPECT_EQ(b, 76u);
  // Each inner row loses one slot at the corner; two closure bars bridge
  // the outer corner.
  EXPECT_EQ(fp.bar_count(), a + b - 4 + 2);
  EXPECT_NEAR(fp.path.length(), 50.0 * kLam, 1e-12);
}

TEST(GenLTurn, MinimalPecCorner) {
  const auto fp = gen_l_turn(BarLattice{}, kLam, 1.0, 1.0, "pec", kTable, WallMode::ContinuousWall);
  EXPECT_EQ(fp.walls.size(), 4u);
  const auto m = gen_l_turn(BarLattice{}, kLam, 1.0, 1.0, "pec", kTable, WallMode::ContinuousWall, true);
  EXPECT_EQ(m.walls.size(), 5u);
}

TEST(GenLTurn, ChannelKeepsItsWidth) {
  const BarLattice lat;
  const auto fp = gen_l_turn(lat, kLam, 35.0, 15.0, "galinstan", kTable);
  // No bar intrudes into the swept channel cross-section.
  const double clear = 0.5 * lat.row_sep - lat.radius;
  for (const auto& s : fp.sites) {
    double dmin = 1e9;
    const auto& v = fp.path.vertices;
    for (std::size_t q = 1; q < v.size(); ++q) {
      const Vec2 d = v[q] - v[q - 1];
      const double t = std::clamp(((s.center - v[q - 1]).x * d.x + (s.center - v[q - 1]).y * d.y) /
                                      (d.x * d.x + d.y * d.y),
                                  0.0, 1.0);
      dmin = std::min(dmin, (s.center - (v[q - 1] + t * d)).norm());
    }
    EXPECT_GE(dmin - lat.radius, clear - 1e-12);
  }
}

TEST(GenLTurn, RejectsShortLegs) {
  EXPECT_THROW(gen_l_turn(BarLattice{}, kLam, 0.5, 15.0, "galinstan", kTable), PreconditionError);
}

TEST(Probes, InPathCountAndTiltGeometry) {
  Pathway p{{{0.0, 0.0}, {50.0 * kLam, 0.0}}};
  const auto ps = gen_probe_lines(p, kLam, 1.0 * kMm, 1.0, 5.0);
  std::size_t in_path = 0;
  for (const auto& pr : ps.probes) {
    if (pr.line == ProbeLine::InPath) ++in_path;
    EXPECT_DOUBLE_EQ(pr.position.z, 2.0 * kMm);
  }
  EXPECT_EQ(in_path, 50u);
  const auto t35 = std::find_if(ps.probes.begin(), ps.probes.end(), [](const Probe& q) {
    return q.line == ProbeLine::Tilted && std::abs(q.dist_lambda - 35.0) < 1e-9;
  });
  ASSERT_NE(t35, ps.probes.end());
  // Lateral offset of the 35-lambda tilted probe.
  EXPECT_NEAR(std::abs(t35->position.y), 35.0 * kLam * std::sin(5.0 * kPi / 180.0), 1e-12);
  EXPECT_GT(std::abs(t35->position.y), 30.0 * kMm);
}

TEST(Probes, ZeroTiltCoincidesWithPath) {
  Pathway p{{{0.0, 0.0}, {10.0 * kLam, 0.0}}};
  const auto ps = gen_probe_lines(p, kLam, 1.0 * kMm, 1.0, 0.0);
  for (const auto& t : ps.probes) {
    if (t.line != ProbeLine::Tilted) continue;
    const auto q = std::find_if(ps.probes.begin(), ps.probes.end(), [&](const Probe& x) {
      return x.line == ProbeLine::InPath && x.dist_lambda == t.dist_lambda;
    });
    ASSERT_NE(q, ps.probes.end());
    EXPECT_NEAR((q->position - t.position).xy().norm(), 0.0, 1e-12);
  }
}

TEST(Probes, SpacingMustBePositive) {
  Pathway p{{{0.0, 0.0}, {10.0 * kLam, 0.0}}};
  EXPECT_THROW(gen_probe_lines(p, kLam, 1.0 * kMm, 0.0, 5.0), PreconditionError);
}

TEST(Presets, AllBuildAndValidate) {
  for (const auto& name : preset_names()) {
    PresetOptions o;
    o.path_lambda = 12.0;
    o.leg1_lambda = 8.0;
    o.leg2_lambda = 4.0;
    const RswpScene s = make_preset(name, o);
    EXPECT_NO_THROW(s.validate()) << name;
    EXPECT_EQ(s.name, name);
  }
  EXPECT_THROW(make_preset("bogus"), ValidationError);
}

TEST(Presets, ProbesKeepClearOfAbsorber) {
  const RswpScene s = make_preset("straight_galinstan");
  for (const auto& p : s.probes.probes) EXPECT_TRUE(s.domain.contains(p.position, s.lambda0())) << p.id;
}

TEST(SceneFile, MinimalFileUsesPublishedParameters) {
  const RswpScene s = parse_scene(R"({"scenario": "straight_galinstan"})");
  EXPECT_DOUBLE_EQ(s.lattice.height, 5.0 * kMm);
  EXPECT_DOUBLE_EQ(s.lattice.radius, 1.0 * kMm);
  EXPECT_DOUBLE_EQ(s.lattice.pitch, 4.0 * kMm);
  EXPECT_DOUBLE_EQ(s.lattice.row_sep, 6.0 * kMm);
  EXPECT_DOUBLE_EQ(s.slab.eps_r, 2.2);
  EXPECT_DOUBLE_EQ(s.slab.thickness, 1.0 * kMm);
  EXPECT_DOUBLE_EQ(s.source.f0, 30.0 * kGHz);
  EXPECT_DOUBLE_EQ(s.source.aperture_height, 2.84 * kMm);
  EXPECT_DOUBLE_EQ(s.source.aperture_width, 5.89 * kMm);
  EXPECT_FALSE(s.fill.sites.empty());
}

TEST(SceneFile, BadPermittivityNamesField) {
  try {
    parse_scene(R"({"slab": {"eps_r": 0.5}})");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(e.field().find("eps_r"), std::string::npos);
  }
}

TEST(SceneFile, PitchAtBoundaryIsValid) {
  EXPECT_NO_THROW(parse_scene(R"({"lattice": {"pitch": 3, "radius": 1}, "fill": {"path_lambda": 5}})"));
}

TEST(SceneFile, UnknownKeyRejected) {
  EXPECT_THROW(parse_scene(R"({"slab": {"epsr": 2.2}})"), ValidationError);
  EXPECT_THROW(parse_scene(R"({"colour": 1})"), ValidationError);
}

TEST(SceneFile, MalformedInput) {
  EXPECT_THROW(parse_scene("{not json"), ParseError);
  EXPECT_THROW(parse_scene(R"({"slab": {"eps_r": "high"}})"), ParseError);
}

TEST(SceneFile, UnitsAreMillimetresAndGigahertz) {
  const RswpScene s = parse_scene(R"({
    "source": {"f0": 30},
    "slab": {"thickness": 1.0},
    "fill": {"pattern": "straight", "material": "copper", "path_lambda": 6},
    "solver": {"delta": 0.25, "mode": "2d"}
  })");
  EXPECT_DOUBLE_EQ(s.solver.delta, 0.25 * kMm);
  EXPECT_EQ(s.fill.sites.front().material, "copper");
  EXPECT_NEAR(s.fill.path.length(), 6.0 * s.lambda0(), 1e-12);
}

TEST(SceneFile, CustomMaterial) {
  const RswpScene s = parse_scene(R"({
    "materials": {"eglain": {"kind": "conductor", "sigma": 3.4e6}},
    "fill": {"material": "eglain", "path_lambda": 4}
  })");
  EXPECT_EQ(s.fill.sites.front().material, "eglain");
  EXPECT_THROW(parse_scene(R"({"fill": {"material": "nothing"}})"), ValidationError);
}
