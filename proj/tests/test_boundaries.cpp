#include <gtest/gtest.h>

#include <cmath>

#include "rswp/boundaries.hpp"
#include "rswp/constants.hpp"
#include "rswp/scene.hpp"

using namespace rswp;

TEST(UpdateCoeffs, LosslessVacuum) {
  const double dt = 1e-13, d = 1e-3;
  const auto c = lossy_coeffs(1.0, 0.0, dt, d);
  EXPECT_DOUBLE_EQ(c.ca, 1.0);
  EXPECT_NEAR(c.cb, dt / (kEps0 * d), 1e-9 * c.cb);
}

TEST(UpdateCoeffs, ConductorDampsAndDecouples) {
  const double dt = 4.7e-13, d = 0.25e-3;
  const auto g = lossy_coeffs(Material::conductor(kSigmaGalinstan), dt, d, 30e9);
  // Loss factor sigma dt / 2 eps is ~1e5: E decays each step.
  EXPECT_LT(std::abs(g.ca), 1.0);
  EXPECT_NEAR(g.ca, -1.0, 1e-4);
  EXPECT_LT(g.cb, 1e-4 * lossy_coeffs(1.0, 0.0, dt, d).cb);
}

TEST(UpdateCoeffs, PecZero) {
  const auto p = lossy_coeffs(Material::pec(), 1e-13, 1e-3, 30e9);
  EXPECT_EQ(p.ca, 0.0);
  EXPECT_EQ(p.cb, 0.0);
}

TEST(UpdateCoeffs, PassiveForAnyLoss) {
  for (double sigma : {0.0, 1e-3, 1.0, 1e3, 1e7, 1e9}) {
    const auto c = lossy_coeffs(2.2, sigma, 1e-13, 1e-3);
    EXPECT_LE(std::abs(c.ca), 1.0) << sigma;
    EXPECT_GE(c.cb, 0.0) << sigma;
  }
}

TEST(UpdateCoeffs, DielectricLossFoldedIn) {
  const Material m = Material::dielectric(2.2, 0.0009);
  EXPECT_NEAR(m.effective_sigma(30e9), 2 * kPi * 30e9 * kEps0 * 2.2 * 0.0009, 1e-15);
}

TEST(Cpml, ReflectionFormulaForConductivity) {
  const auto s = cpml_profile(10, 3.0, 1e-6, 0.25e-3);
  EXPECT_NEAR(s.sigma_max, -4.0 * std::log(1e-6) / (2.0 * kEta0 * 10 * 0.25e-3), 1e-9);
  EXPECT_DOUBLE_EQ(s.sigma(0.0), 0.0);
  EXPECT_DOUBLE_EQ(s.kappa(0.0), 1.0);
  EXPECT_DOUBLE_EQ(s.kappa(1.0), s.kappa_max);
  EXPECT_DOUBLE_EQ(s.alpha(1.0), 0.0);
}

TEST(Cpml, GradingMonotone) {
  const auto s = cpml_profile(12, 3.0, 1e-6, 0.5e-3);
  for (double r = 0.05; r <= 1.0; r += 0.05) {
    EXPECT_GT(s.sigma(r), s.sigma(r - 0.05));
    EXPECT_GE(s.kappa(r), s.kappa(r - 0.05));
    EXPECT_LE(s.alpha(r), s.alpha(r - 0.05));
  }
}

TEST(Cpml, Preconditions) {
  EXPECT_THROW(cpml_profile(4, 3.0, 1e-6, 1e-3), PreconditionError);
  EXPECT_THROW(cpml_profile(10, 3.0, 1.5, 1e-3), PreconditionError);
}

TEST(Cpml, AxisCoefficientsInsideLayerOnly) {
  const auto s = cpml_profile(8, 3.0, 1e-6, 1e-3);
  const CpmlAxis ax(40, 8, 8, s, 1e-12, 1.0);
  for (std::size_t q = 0; q <= 40; ++q) {
    const bool inside = q < 8 || q > 32;
    if (!inside) {
      EXPECT_EQ(ax.b_n[q], 0.0) << q;
      EXPECT_EQ(ax.inv_kappa_n[q], 1.0) << q;
    } else {
      EXPECT_GT(ax.b_n[q], 0.0) << q;
      EXPECT_LT(ax.b_n[q], 1.0) << q;
      EXPECT_LE(ax.c_n[q], 0.0) << q;
    }
  }
  // Symmetric profile.
  for (std::size_t q = 0; q < 40; ++q) EXPECT_NEAR(ax.b_h[q], ax.b_h[39 - q], 1e-15);
}
