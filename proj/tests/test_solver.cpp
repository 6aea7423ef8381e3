#include <gtest/gtest.h>

#include <cmath>

#include "rswp/checks.hpp"
#include "rswp/harness.hpp"
#include "rswp/presets.hpp"

using namespace rswp;

namespace {

RswpScene tiny(const std::string& name, SolverMode mode, double delta) {
  PresetOptions o;
  o.mode = mode;
  o.delta = delta;
  o.path_lambda = 3.0;
  o.leg1_lambda = 2.0;
  o.leg2_lambda = 2.0;
  RswpScene s = make_preset(name, o);
  s.source.ramp_periods = 2.0;
  s.solver.dft_window_periods = 2.0;
  return s;
}

}  // namespace

TEST(Timestep, CourantBound) {
  EXPECT_NEAR(cfl_dt(1e-3, 1.0, 3), 1e-3 / (kC0 * std::sqrt(3.0)), 1e-25);
  EXPECT_THROW(cfl_dt(1e-3, 1.2, 3), PreconditionError);
  EXPECT_THROW(cfl_dt(0.0, 0.9, 3), PreconditionError);
}

TEST(Timestep, WholeStepsPerPeriod) {
  for (double d : {0.1e-3, 0.25e-3, 0.5e-3}) {
    int n = 0;
    const double dt = run_dt(d, 0.99, 3, 30e9, &n);
    EXPECT_LE(dt, cfl_dt(d, 0.99, 3));
    EXPECT_NEAR(n * dt, 1.0 / 30e9, 1e-24);
    EXPECT_GT(run_dt(d, 0.99, 3, 30e9) * (n + 1), 1.0 / 30e9 * (1 - 1e-12));
  }
}

TEST(SteadyState, ToleranceAndFloor) {
  EXPECT_TRUE(steady_state_check({{1.0, 0.5}, {1.0001, 0.5}}, 0.01));
  EXPECT_FALSE(steady_state_check({{1.0, 0.5}, {1.0, 0.6}}, 0.01));
  // A zero probe blocks convergence unless the floor exempts it.
  EXPECT_FALSE(steady_state_check({{1.0, 0.0}, {1.0, 0.0}}, 0.01));
  EXPECT_TRUE(steady_state_check({{1.0, 0.0}, {1.0, 0.0}}, 0.01, 1e-6));
  EXPECT_TRUE(steady_state_check({{1.0, 1e-9}, {1.0, 3e-9}}, 0.01, 1e-6));
  EXPECT_THROW(steady_state_check({{1.0}}, 0.01), PreconditionError);
}

TEST(SolverPhysics, ClosedBoxConservesEnergy) { EXPECT_LT(check::pec_box_energy_drift(), 1e-3); }

TEST(SolverPhysics, PhaseVelocityErrorSecondOrder) {
  const double e20 = check::vacuum_phase_velocity_error(20.0);
  const double e40 = check::vacuum_phase_velocity_error(40.0);
  EXPECT_LT(e20, 0.005);
  EXPECT_GT(e20 / e40, 3.0);
  EXPECT_LT(e20 / e40, 5.0);
}

TEST(SolverPhysics, AbsorberReflectionBelow50dB) { EXPECT_LT(check::cpml_normal_reflection_db(10, 20.0), -50.0); }

TEST(SolverPhysics, UnstableStepBlowsUp) {
  const double d = 1e-3, f = 30e9;
  const auto g = uniform_grid(40, 40, 1, d, Material::vacuum(), 0, true);
  const int n = static_cast<int>(std::floor(1.0 / f / (1.5 * cfl_dt(d, 1.0, 2))));
  Fdtd2D<double> s(g, 1.0 / f / n, cpml_profile(6, 3.0, 1e-6, d));
  Transducer src;
  src.f0 = f;
  src.ramp_periods = 1.0;
  StopRule stop;
  stop.max_steps = std::size_t(n) * 400;
  stop.window_periods = 1.0;
  stop.stop_when_steady = false;
  EXPECT_THROW(run(s, {{20, 20, 0, 1.0}}, src, {}, stop), BlowUpError);
}

TEST(SolverPhysics, RejectsStepThatSplitsPeriod) {
  const auto g = uniform_grid(10, 10, 1, 1e-3, Material::vacuum(), 0, true);
  Fdtd2D<double> s(g, 0.999 * cfl_dt(1e-3, 0.99, 2), cpml_profile(6, 3.0, 1e-6, 1e-3));
  Transducer src;
  StopRule stop;
  stop.max_steps = 10;
  EXPECT_THROW(run(s, {}, src, {}, stop), PreconditionError);
}

TEST(Linearity, DoubledDriveDoublesPhasors2D) {
  const RswpScene s = tiny("straight_galinstan", SolverMode::TwoD, 0.25 * kMm);
  SimulationOptions a, b;
  a.max_steps = b.max_steps = 400;
  b.amplitude_scale = 2.0;
  const auto x = simulate(s, a), y = simulate(s, b);
  ASSERT_EQ(x.rows.size(), y.rows.size());
  std::size_t live = 0;
  for (std::size_t q = 0; q < x.rows.size(); ++q) {
    const double m = std::abs(x.rows[q].phasor);
    if (m == 0.0) continue;
    ++live;
    EXPECT_LE(std::abs(20 * std::log10(std::abs(y.rows[q].phasor) / m) - 20 * std::log10(2.0)), 1e-9);
  }
  EXPECT_GT(live, 0u);
}

TEST(Determinism, ThreadCountDoesNotChangeResults) {
  for (auto mode : {SolverMode::TwoD, SolverMode::ThreeD}) {
    const RswpScene s = tiny("l_turn_galinstan", mode, 0.4 * kMm);
    SimulationOptions one, four;
    one.max_steps = four.max_steps = 240;
    four.threads = 4;
    const auto a = simulate(s, one), b = simulate(s, four);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t q = 0; q < a.rows.size(); ++q) {
      EXPECT_EQ(a.rows[q].phasor, b.rows[q].phasor) << a.rows[q].probe_id;
    }
    EXPECT_EQ(probe_csv("x", a.rows), probe_csv("x", b.rows));
  }
}
