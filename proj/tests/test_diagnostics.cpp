#include <gtest/gtest.h>

#include <random>

#include "dnls/diagnostics.hpp"
#include "dnls/fixtures.hpp"
#include "dnls/gauge.hpp"
#include "dnls/ground_state.hpp"

using namespace dnls;

namespace {

const GridSpec kLine = GridSpec::line(30.0, 1024);

}  // namespace

TEST(ConservedQuantities, GroundState) {
  const auto q = ground_state(kLine).q;
  EXPECT_NEAR(mass(q), 2.0 * kPi, 1e-10);
  EXPECT_NEAR(energy_E(q), 0.0, 1e-8);
  EXPECT_NEAR(momentum_P(q), 4.0, 1e-10);
}

TEST(ConservedQuantities, FrameDictionary) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 20; ++i) {
    const auto u = fixtures::random_smooth_field(kLine, rng);
    const auto v = gauge_transform(kToVFrame, u);
    EXPECT_NEAR(energy_ED(u), energy_E(v), 1e-8);
    EXPECT_NEAR(momentum_PD(u), momentum_P(v), 1e-8);
    EXPECT_NEAR(mass(u), mass(v), 1e-12);
  }
}

TEST(ConservedQuantities, StandingWaveInOriginalFrame) {
  // R = G_{3/4} Q carries the same energy and momentum as Q.
  const auto r = standing_wave(0.3, kLine, Frame::U);
  EXPECT_NEAR(energy_ED(r), 0.0, 1e-8);
  EXPECT_NEAR(momentum_PD(r), 4.0, 1e-8);
}

TEST(Virial, UnitWeightRelations) {
  std::mt19937_64 rng(78);
  const auto one = VirialWeight::one(kLine);
  for (int i = 0; i < 5; ++i) {
    const auto v = fixtures::random_smooth_field(kLine, rng);
    EXPECT_NEAR(virial_J(v, one), 2.0 * momentum_P(v), 1e-12);
    EXPECT_NEAR(virial_I(v, one), mass(v), 1e-12);
    EXPECT_EQ(virial_I_rate(v, one), 0.0);
    EXPECT_EQ(virial_J_rate(v, one), 0.0);
  }
}

TEST(Virial, ZeroField) {
  const ComplexField z(kLine);
  EXPECT_EQ(virial_I(z, VirialWeight::x_squared(kLine)), 0.0);
  EXPECT_EQ(virial_J(z, VirialWeight::x(kLine)), 0.0);
}

TEST(Virial, SecondMomentOfGroundState) {
  // ∫x² Q² = 4∫x² sech(2x) dx = (1/2)∫y² sech y dy = (1/2)(π³/4) = π³/8.
  const auto q = ground_state(kLine).q;
  const double I = virial_I(q, VirialWeight::x_squared(kLine));
  EXPECT_NEAR(I, kPi * kPi * kPi / 8.0, 1e-9);
  EXPECT_GT(I, 0.0);
}

TEST(Virial, StandingWaveRates) {
  for (double t : {0.0, 0.7, 2.1}) {
    const auto v = standing_wave(t, kLine);
    EXPECT_NEAR(virial_J_rate(v, VirialWeight::x(kLine)), 4.0 * energy_E(v), 1e-12);
    EXPECT_NEAR(virial_J_rate(v, VirialWeight::x(kLine)), 0.0, 1e-7);
    EXPECT_NEAR(virial_I_rate(v, VirialWeight::x_squared(kLine)), 0.0, 1e-12);
  }
}

TEST(Virial, CustomWeightNeedsAnalyticDerivatives) {
  EXPECT_THROW(VirialWeight::custom(kLine, [](double x) { return x; }, {}, {}), Error);
  const auto w = VirialWeight::custom(
      kLine, [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); },
      [](double x) { return -std::cos(x); });
  EXPECT_EQ(w.kind(), WeightKind::Custom);
}

TEST(Diagnose, RecordOfGroundState) {
  const auto r = diagnose(ground_state(kLine).q, 0.5, 1e-3);
  EXPECT_TRUE(r.finite());
  EXPECT_NEAR(r.energy_E, r.energy_ED, 1e-8);
  EXPECT_NEAR(r.momentum_P, r.momentum_PD, 1e-8);
  EXPECT_NEAR(r.grad_norm, std::sqrt(kPi), 1e-10);
  EXPECT_EQ(r.t, 0.5);
}

TEST(Certificate, QuadraticRootFormula) {
  // a2 = -4: root = (c1 + √(c1² + 16 c0)) / 8.
  for (double c0 : {0.5, 2.0}) {
    for (double c1 : {-3.0, 0.0, 1.7}) {
      EXPECT_NEAR(quadratic_positive_root(-4.0, c1, c0), (c1 + std::sqrt(c1 * c1 + 16.0 * c0)) / 8.0,
                  1e-14);
    }
  }
}

TEST(Certificate, RefusesNonnegativeEnergy) {
  const auto g = GridSpec::halfline(10.0, 1001);
  const auto u0 = fixtures::x_gaussian(g, 0.3, 0.0);
  EXPECT_THROW(blowup_certificate(u0), Error);
  EXPECT_THROW(blowup_certificate(ground_state(kLine).q), Error);
}

TEST(Certificate, NegativeEnergyProfile) {
  const auto g = GridSpec::halfline(10.0, 2001);
  const auto data = fixtures::halfline_blowup_data(g, -1.0);
  const auto& u0 = data.u0;
  const auto v0 = gauge_transform(kToVFrame, u0);
  EXPECT_NEAR(energy_E(data.v0), -1.0, 1e-10);
  EXPECT_NEAR(data.amplitude, 7.0685, 5e-4);
  EXPECT_NEAR(energy_ED(u0, gauge_derivative(kToUFrame, data.v0)), -1.0, 1e-10);
  // Plain FD on the steep u-frame phase is only fourth order.
  EXPECT_NEAR(energy_ED(u0), -1.0, 3e-3);
  const auto c = blowup_certificate(u0);
  EXPECT_NEAR(c.a2, 4.0 * energy_E(v0), 1e-12);
  EXPECT_NEAR(c.a0, virial_I(v0, VirialWeight::x_squared(g)), 1e-14);
  EXPECT_GT(c.t_star_bound, 0.0);
  EXPECT_NEAR(c.bound(c.t_star_bound), 0.0, 1e-10 * std::max(1.0, c.a0));
  EXPECT_NEAR(c.mass0, mass(u0), 1e-12);
  // Real odd data: I'(0) = 0, so a1 is the surplus term alone.
  EXPECT_NEAR(c.a1, surplus_term(v0), 1e-10);
  EXPECT_NEAR(c.t_star_bound, (c.a1 + std::sqrt(c.a1 * c.a1 + 16.0 * c.a0)) / 8.0, 1e-12);
}

TEST(Certificate, WavenumberThreeFixture) {
  // The k = 3 variant moves outward and gives a much later bound.
  const auto g = GridSpec::halfline(10.0, 4001);
  const auto data = fixtures::halfline_blowup_data(g, -1.0, 3.0);
  EXPECT_NEAR(data.amplitude, 9.906, 5e-3);
  const auto c = blowup_certificate(data.u0);
  EXPECT_GT(c.a1, 200.0);
  EXPECT_GT(c.t_star_bound, 50.0);
}

TEST(Certificate, ConstantWavenumberProfileStaysPositive) {
  // A x e^{-x²+ikx} read as u0 never reaches negative energy.
  const auto g = GridSpec::halfline(10.0, 2001);
  for (double k : {0.0, 3.0, 10.0}) {
    for (double A : {1.0, 3.0, 8.0}) EXPECT_GT(energy_ED(fixtures::x_gaussian(g, A, k)), 0.0);
  }
}
