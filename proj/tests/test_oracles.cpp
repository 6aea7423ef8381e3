#include <gtest/gtest.h>

#include <cmath>

#include "rswp/constants.hpp"
#include "rswp/error.hpp"
#include "rswp/grid.hpp"
#include "rswp/oracles.hpp"

using namespace rswp;

namespace {

// Frozen from an arbitrary-precision root of the same transcendental
// equation (complex root for the loss case).
constexpr double kBeta30 = 667.904752795695;
constexpr double kNeff30 = 1.06226803636103;
constexpr double kAlpha30 = 225.312642262945;
constexpr double kKx130 = 650.869710225304;
constexpr double kNeff60 = 1.21772220534227;
constexpr double kAlphaD30 = 0.0753982372412655;  // tan_delta 0.0009
constexpr double kXs130Alpha = 216.966760812;
constexpr double kSlabXs = 342.419147556;

const double kD = 1.0 * kMm;

}  // namespace

TEST(Dispersion, MatchesReferenceRoot) {
  const auto s = oracle::tm0_grounded_slab(2.2, kD, 30 * kGHz);
  EXPECT_NEAR(s.beta, kBeta30, 1e-8 * kBeta30);
  EXPECT_NEAR(s.n_eff, kNeff30, 1e-10);
  EXPECT_NEAR(s.alpha0, kAlpha30, 1e-7 * kAlpha30);
  EXPECT_NEAR(s.kx1, kKx130, 1e-7 * kKx130);
  EXPECT_LT(s.residual(), 1e-10);
}

TEST(Dispersion, ResidualSmallAcrossParameterSweep) {
  for (double eps : {1.05, 2.2, 4.0, 10.2})
    for (double d_mm : {0.1, 0.5, 1.0, 1.575})
      for (double f_ghz : {1.0, 10.0, 30.0, 60.0}) {
        const auto s = oracle::tm0_grounded_slab(eps, d_mm * kMm, f_ghz * kGHz);
        EXPECT_LT(s.residual(), 1e-10) << eps << " " << d_mm << " " << f_ghz;
        const double k0 = free_space_wavenumber(f_ghz * kGHz);
        EXPECT_GT(s.beta, k0);
        EXPECT_LT(s.beta, std::sqrt(eps) * k0);
        EXPECT_LT(s.kx1 * s.thickness, kPi / 2);
      }
}

TEST(Dispersion, EffectiveIndexGrowsWithFrequency) {
  const auto a = oracle::tm0_grounded_slab(2.2, kD, 30 * kGHz);
  const auto b = oracle::tm0_grounded_slab(2.2, kD, 60 * kGHz);
  EXPECT_NEAR(b.n_eff, kNeff60, 1e-10);
  EXPECT_GT(b.n_eff, a.n_eff);
}

TEST(Dispersion, RejectsBadInput) {
  EXPECT_THROW(oracle::tm0_grounded_slab(1.0, kD, 30 * kGHz), PreconditionError);
  EXPECT_THROW(oracle::tm0_grounded_slab(2.2, 0.0, 30 * kGHz), PreconditionError);
  EXPECT_THROW(oracle::tm0_grounded_slab(2.2, kD, -1.0), PreconditionError);
}

TEST(ImpedanceWave, DecayFromReactance) {
  EXPECT_NEAR(oracle::impedance_wave_decay(130.0, 30 * kGHz), kXs130Alpha, 1e-6);
  EXPECT_DOUBLE_EQ(oracle::impedance_wave_decay(0.0, 30 * kGHz), 0.0);
  EXPECT_THROW(oracle::impedance_wave_decay(-1.0, 30 * kGHz), PreconditionError);
}

TEST(ImpedanceWave, LinearInReactance) {
  const double a = oracle::impedance_wave_decay(65.0, 30 * kGHz);
  const double b = oracle::impedance_wave_decay(130.0, 30 * kGHz);
  EXPECT_NEAR(b, 2.0 * a, 1e-12 * b);
}

TEST(SlabImpedance, ThinSlabReactance) {
  EXPECT_NEAR(oracle::surface_impedance_slab(2.2, kD, 30 * kGHz), kSlabXs, 1e-6);
  EXPECT_DOUBLE_EQ(oracle::surface_impedance_slab(2.2, 0.0, 30 * kGHz), 0.0);
}

TEST(SlabImpedance, ThrowsAtQuarterWave) {
  const double n = std::sqrt(2.2);
  const double quarter = free_space_wavelength(30 * kGHz) / (4.0 * n);
  EXPECT_THROW(oracle::surface_impedance_slab(2.2, quarter, 30 * kGHz), PreconditionError);
  EXPECT_NO_THROW(oracle::surface_impedance_slab(2.2, 0.99 * quarter, 30 * kGHz));
}

TEST(SkinDepth, LiquidMetalAndCopper) {
  EXPECT_NEAR(oracle::skin_depth(kSigmaGalinstan, 30 * kGHz) * 1e6, 1.562145402, 1e-8);
  EXPECT_NEAR(oracle::skin_depth(kSigmaCopper, 30 * kGHz) * 1e6, 0.3763885248, 1e-8);
  EXPECT_THROW(oracle::skin_depth(0.0, 30 * kGHz), PreconditionError);
}

TEST(SkinDepth, ScalesAsInverseRootFrequency) {
  const double a = oracle::skin_depth(kSigmaCopper, 10 * kGHz);
  const double b = oracle::skin_depth(kSigmaCopper, 40 * kGHz);
  EXPECT_NEAR(a / b, 2.0, 1e-12);
}

TEST(Spreading, CylindricalLaw) {
  EXPECT_NEAR(oracle::spreading_db(5.0, 50.0), 10.0, 1e-12);
  EXPECT_DOUBLE_EQ(oracle::spreading_db(3.0, 3.0), 0.0);
  EXPECT_THROW(oracle::spreading_db(0.0, 1.0), PreconditionError);
  EXPECT_THROW(oracle::spreading_db(2.0, 1.0), PreconditionError);
}

TEST(Spreading, AdditiveOverSegments) {
  for (double a : {1.0, 2.5, 7.0}) {
    const double b = 2.3 * a, c = 4.1 * b;
    EXPECT_NEAR(oracle::spreading_db(a, b) + oracle::spreading_db(b, c), oracle::spreading_db(a, c), 1e-12);
  }
}

TEST(DielectricLoss, MatchesComplexRoot) {
  const double a = oracle::tm0_dielectric_attenuation(2.2, 0.0009, kD, 30 * kGHz);
  EXPECT_NEAR(a, kAlphaD30, 1e-4 * kAlphaD30);
  EXPECT_DOUBLE_EQ(oracle::tm0_dielectric_attenuation(2.2, 0.0, kD, 30 * kGHz), 0.0);
}

TEST(EffectiveMedium, ReproducesIndexAndLoss) {
  const Slab slab;
  const Material m = effective_medium_2d(slab, 30 * kGHz);
  EXPECT_NEAR(std::sqrt(m.eps_r), kNeff30, 1e-10);
  // Plane-wave attenuation in the effective medium equals the mode's.
  const double sigma = m.effective_sigma(30 * kGHz);
  const double alpha = sigma * kEta0 / (2.0 * std::sqrt(m.eps_r));
  EXPECT_NEAR(alpha, kAlphaD30, 1e-4 * kAlphaD30);
}
