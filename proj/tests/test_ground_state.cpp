#include <gtest/gtest.h>

#include <random>

#include "dnls/diagnostics.hpp"
#include "dnls/fixtures.hpp"
#include "dnls/gauge.hpp"
#include "dnls/ground_state.hpp"
#include "oracles.hpp"

using namespace dnls;

namespace {

const GridSpec kLine = GridSpec::line(30.0, 1024);

double integral_of_power(const ComplexField& f, int p) { return lp_norm_pow(f, p); }

}  // namespace

TEST(ShootingOracle, PeakHeightIsTwo) {
  EXPECT_NEAR(oracle::shoot_ground_height(), 2.0, 1e-6);
}

TEST(ShootingOracle, ProfileMatchesClosedForm) {
  // Shoot from the exact height; the integrated orbit must track 2 sech^{1/2}(2x)
  // until the unstable direction takes over.
  double worst = 0.0;
  oracle::shoot(2.0, 4.0, 1e-4, [&](double x, double q) {
    worst = std::max(worst, std::abs(q - ground::Q(x)));
  });
  EXPECT_LT(worst, 1e-8);
}

TEST(GroundState, PeakValue) {
  const auto gs = ground_state(kLine);
  EXPECT_NEAR(gs.q[kLine.size() / 2].real(), 2.0, 1e-15);  // x = 0 sits at j = n/2
  EXPECT_TRUE(gs.analytic);
}

TEST(GroundState, RejectsHalfline) {
  EXPECT_THROW(ground_state(GridSpec::halfline(30.0, 1001)), Error);
  EXPECT_THROW(ground_state(GridSpec::line(10.0, 256)), Error);
}

TEST(GroundState, NormsFromClosedForm) {
  const auto gs = ground_state(GridSpec::line(20.0, 1024));
  EXPECT_NEAR(l2_norm_squared(gs.q), 2.0 * kPi, 1e-10);
  EXPECT_NEAR(integral_of_power(gs.q, 4), 16.0, 1e-10);
  EXPECT_NEAR(integral_of_power(gs.q, 6), 16.0 * kPi, 1e-9);
  EXPECT_NEAR(l2_norm_squared(gs.qx), kPi, 1e-10);
  EXPECT_NEAR(l2_norm_squared(derivative(gs.q)), kPi, 1e-10);
}

TEST(GroundState, Invariants) {
  const auto gs = ground_state(kLine);
  for (std::size_t j = 0; j < kLine.size(); ++j) EXPECT_GT(gs.q[j].real(), 0.0);
  EXPECT_LT(elliptic_residual(gs.q), 1e-8);
  EXPECT_NEAR(mass(gs.q), 2.0 * kPi, 1e-8);
  EXPECT_NEAR(energy_E(gs.q), 0.0, 1e-8);
}

TEST(GroundState, H1NormOfQ) {
  const auto gs = ground_state(kLine);
  EXPECT_NEAR(sobolev_h1_norm(gs.q), std::sqrt(3.0 * kPi), 1e-8);
}

TEST(StandingWave, VFrame) {
  const auto q = ground_state(kLine).q;
  EXPECT_LT(max_abs_diff(standing_wave(0.0, kLine), q), 1e-15);
  EXPECT_LT(max_abs_diff(standing_wave(kPi, kLine), -1.0 * q), 1e-14);
}

TEST(StandingWave, UFrameIsGaugeImage) {
  const auto q = ground_state(kLine).q;
  const auto r = standing_wave(0.0, kLine, Frame::U);
  EXPECT_LT(max_abs_diff(r, gauge_transform(GaugeParameter::three_quarters(), q)), 1e-12);
  // And against the closed-form phase (3/4)·2(atan(sinh 2x) + π/2).
  double err = 0.0;
  for (std::size_t j = 0; j < kLine.size(); ++j) {
    const double x = kLine.x(j);
    err = std::max(err, std::abs(r[j] - std::polar(ground::Q(x), 0.75 * ground::mass_below(x))));
  }
  EXPECT_LT(err, 1e-10);
}

TEST(GNFunctional, SharpConstantAtQ) {
  EXPECT_NEAR(gn_functional(ground_state(kLine).q), kSharpGNConstant, 1e-6);
  EXPECT_NEAR(kSharpGNConstant, 0.405285, 1e-6);
}

TEST(GNFunctional, GaussianIsStrictlyBelow) {
  const auto f = fixtures::gaussian(kLine, 1.0);
  const double value = gn_functional(f);
  // Closed form for e^{-x²}: ‖f‖₆⁶ = √(π/6), ‖f‖₂⁴ = π/2, ‖f'‖₂² = √(π/2).
  const double expected = std::sqrt(kPi / 6.0) / ((kPi / 2.0) * std::sqrt(kPi / 2.0));
  EXPECT_NEAR(value, expected, 1e-10);
  EXPECT_LT(value, kSharpGNConstant - 1e-3);
}

TEST(GNFunctional, ZeroFieldIsUndefined) {
  EXPECT_THROW(gn_functional(ComplexField(kLine)), Error);
}

TEST(GNFunctional, ScalingInvariance) {
  const auto g = GridSpec::line(30.0, 2048);
  const auto base = fixtures::gaussian(g, 1.0, 1.3, 0.2, 0.4);
  const double alpha = 1.7, beta = 0.6;
  const auto scaled = ComplexField::sample(g, [&](double x) {
    const double s = (beta * x - 0.2) / 1.3;
    return alpha * std::exp(-s * s) * std::polar(1.0, 0.4 * beta * x);
  });
  EXPECT_NEAR(gn_functional(scaled), gn_functional(base), 1e-10);
}

TEST(GNFunctional, PhaseAndGridShiftInvariance) {
  const double q = gn_functional(ground_state(kLine).q);
  const double shift = 64 * kLine.dx();
  const auto moved = ground_state(kLine, 1.1, shift).q;
  EXPECT_NEAR(gn_functional(moved), q, 1e-8);
}

TEST(GNFunctional, InequalityOnRandomFields) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = fixtures::random_smooth_field(kLine, rng);
    EXPECT_LE(gn_functional(f), kSharpGNConstant + 1e-8) << "trial " << trial;
  }
}

TEST(FrechetDerivative, ScalingDirectionAtQ) {
  const auto q = ground_state(kLine).q;
  const double d = energy_directional_derivative(q, q);
  EXPECT_NEAR(d, -4.0 * kPi, 1e-6);
  EXPECT_LT(d, 0.0);
}

TEST(FrechetDerivative, MatchesFiniteDifference) {
  const auto q = ground_state(kLine).q;
  const double eps = 1e-5;
  const double fd = (energy_E((1.0 + eps) * q) - energy_E((1.0 - eps) * q)) / (2.0 * eps);
  EXPECT_NEAR(fd, energy_directional_derivative(q, q), 1e-6);
}
