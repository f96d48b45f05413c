#include <gtest/gtest.h>

#include <random>

#include "dnls/diagnostics.hpp"
#include "dnls/fixtures.hpp"
#include "dnls/ground_state.hpp"
#include "dnls/modulation.hpp"

using namespace dnls;

namespace {

const GridSpec kLine = GridSpec::line(30.0, 1024);
const GridSpec kFine = GridSpec::line(30.0, 4096);

double phase_gap(double a, double b) {
  const double d = std::abs(std::remainder(a - b, 2.0 * kPi));
  return d;
}

double max_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

ComplexField scaled_q(const GridSpec& g, double alpha, double gamma = 0.0, double s = 0.0) {
  return ComplexField::sample(g, [&](double x) {
    return std::polar(std::sqrt(alpha), -gamma) * ground::Q(alpha * (x - s));
  });
}

// e^{-iθ} w(· - k dx) by rolling the samples.
ComplexField shifted(const ComplexField& w, std::size_t k, double theta) {
  ComplexField out(w.grid());
  const std::size_t n = w.size();
  const cplx rot = std::polar(1.0, -theta);
  for (std::size_t j = 0; j < n; ++j) out[(j + k) % n] = rot * w[j];
  return out;
}

ComplexField perturbed_q(const GridSpec& g) {
  auto w = ground_state(g).q;
  w += fixtures::bump_field(g, 0.01, 0.8, 1.5, 0.6);
  return w;
}

}  // namespace

TEST(Rescale, GroundStateIsFixed) {
  const auto q = ground_state(kLine).q;
  const auto r = rescale(q);
  EXPECT_NEAR(r.lambda, 1.0, 1e-10);
  EXPECT_LT(max_diff(r.w, q), 1e-9);
}

TEST(Rescale, NarrowGroundState) {
  const auto v = scaled_q(kFine, 4.0);
  const auto r = rescale(v);
  EXPECT_NEAR(r.lambda, 0.25, 1e-9);
  EXPECT_LT(max_diff(r.w, ground_state(kFine).q), 1e-6);
  EXPECT_NEAR(gradient_norm(r.w), std::sqrt(kPi), 1e-6);
  EXPECT_NEAR(mass(r.w), mass(v), 1e-6);
}

TEST(Rescale, RandomFieldsKeepMass) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 10; ++i) {
    const auto v = fixtures::random_smooth_field(kLine, rng);
    const auto r = rescale(v);
    EXPECT_NEAR(gradient_norm(r.w), std::sqrt(kPi), 1e-6);
    EXPECT_NEAR(mass(r.w), mass(v), 1e-6);
  }
}

TEST(Rescale, Idempotent) {
  std::mt19937_64 rng(5);
  const auto v = fixtures::random_smooth_field(kLine, rng);
  const auto r1 = rescale(v);
  const auto r2 = rescale(r1.w);
  EXPECT_NEAR(r2.lambda, 1.0, 1e-8);
  EXPECT_LT(max_diff(r2.w, r1.w), 1e-8);
}

TEST(Rescale, ZeroGradientThrows) {
  EXPECT_THROW(rescale(ComplexField(kLine)), Error);
  EXPECT_THROW(rescale(ComplexField(GridSpec::halfline(10.0, 101))), Error);
}

TEST(Fit, ExactOrbit) {
  const auto w = ground_state(kLine, 0.7, 1.3).q;
  const auto f = fit_to_ground_state(w);
  EXPECT_LT(phase_gap(f.gamma0, 0.7), 1e-3);
  EXPECT_NEAR(f.x0, 1.3, 1e-3);
  EXPECT_LT(f.residual_h1, 1e-6);
  EXPECT_GE(f.gamma0, 0.0);
  EXPECT_LT(f.gamma0, 2.0 * kPi);
}

TEST(Fit, PhaseNearWrap) {
  const auto w = ground_state(kLine, 2.0 * kPi - 0.02, -4.0).q;
  const auto f = fit_to_ground_state(w);
  EXPECT_LT(phase_gap(f.gamma0, -0.02), 1e-3);
  EXPECT_NEAR(f.x0, -4.0, 1e-3);
  EXPECT_LT(f.residual_h1, 1e-6);
}

TEST(Fit, SmallPerturbation) {
  const auto w = perturbed_q(kLine);
  const double pert = sobolev_h1_norm(fixtures::bump_field(kLine, 0.01, 0.8, 1.5, 0.6));
  const auto f = fit_to_ground_state(w);
  EXPECT_LE(f.residual_h1, 1.5 * pert);
  EXPECT_GE(f.residual_h1, pert / 1.5);
  EXPECT_LT(phase_gap(f.gamma0, 0.0), 0.05);
  EXPECT_LT(std::abs(f.x0), 0.05);
}

TEST(Fit, GaussianIsFarFromOrbit) {
  // A e^{-x²} has ‖∂ₓ‖₂² = A²√(π/2); match it to π.
  const double a = std::sqrt(kPi / std::sqrt(kPi / 2.0));
  const auto w = fixtures::gaussian(kLine, a);
  ASSERT_NEAR(gradient_norm(w), std::sqrt(kPi), 1e-8);
  const auto f = fit_to_ground_state(w);
  EXPECT_GT(f.residual_h1, 0.1);
  EXPECT_LT(phase_gap(f.gamma0, 0.0), 1e-6);
  EXPECT_NEAR(f.x0, 0.0, 1e-6);
}

TEST(Fit, Equivariance) {
  const auto w = perturbed_q(kLine);
  const auto base = fit_to_ground_state(w);
  const std::size_t k = 23;
  const double s = k * kLine.dx();
  for (double theta : {0.4, 2.5, 5.9}) {
    const auto f = fit_to_ground_state(shifted(w, k, theta));
    EXPECT_LT(phase_gap(f.gamma0, base.gamma0 + theta), 1e-3) << theta;
    EXPECT_NEAR(f.x0, base.x0 + s, 1e-3) << theta;
    EXPECT_NEAR(f.residual_h1, base.residual_h1, 1e-8) << theta;
  }
}

TEST(Fit, RejectsUnscaledInput) {
  EXPECT_THROW(fit_to_ground_state(scaled_q(kLine, 2.0)), Error);
}

TEST(ModulationFit, ScaledOrbit) {
  // v = α^{1/2} e^{-iθ} Q(α(x - s)) rescales to e^{-iθ} Q(· - αs).
  const auto v = scaled_q(kFine, 2.0, 1.1, 0.5);
  const auto f = modulation_fit(v);
  EXPECT_NEAR(f.lambda, 0.5, 1e-9);
  EXPECT_LT(phase_gap(f.gamma0, 1.1), 1e-3);
  EXPECT_NEAR(f.x0, 1.0, 1e-3);
  EXPECT_LT(f.residual_h1, 1e-6);
}

TEST(Momentum, GroundState) {
  const auto q = ground_state(kLine).q;
  const auto rep = momentum_obstruction(q, modulation_fit(q));
  EXPECT_NEAR(rep.lambda_times_P, 4.0, 1e-9);
  EXPECT_TRUE(rep.obstruction_active);
  EXPECT_DOUBLE_EQ(rep.threshold, 2.0);
  EXPECT_NEAR(rep.gradient_bound, 2.0 * std::sqrt(kPi), 1e-9);
  EXPECT_NEAR(rep.rescaled_energy, 0.0, 1e-8);
}

TEST(Momentum, ScaleInvariant) {
  const auto q = ground_state(kFine).q;
  const auto v = scaled_q(kFine, 4.0);
  const auto a = modulation_fit(q);
  const auto b = modulation_fit(v);
  EXPECT_NEAR(b.momentum_check, a.momentum_check, 1e-8);
  EXPECT_NEAR(b.momentum_check, 4.0, 1e-8);
}

TEST(Momentum, BelowThreshold) {
  // A small Gaussian: λP is far below 2.
  const double a = std::sqrt(kPi / std::sqrt(kPi / 2.0));
  const auto v = fixtures::gaussian(kLine, 0.5 * a);
  const auto rep = momentum_obstruction(v, modulation_fit(v));
  EXPECT_LT(rep.lambda_times_P, 2.0);
  EXPECT_FALSE(rep.obstruction_active);
}
