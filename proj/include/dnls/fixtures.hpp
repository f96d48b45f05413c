#pragma once

// Initial-data profiles and seeded random smooth fields.

#include <cmath>
#include <random>

#include "dnls/diagnostics.hpp"
#include "dnls/gauge.hpp"
#include "dnls/grid.hpp"

namespace dnls::fixtures {

/// A e^{-((x - c)/w)²} e^{ikx}.
inline ComplexField gaussian(const GridSpec& g, double amplitude, double width = 1.0,
                             double center = 0.0, double k = 0.0) {
  return ComplexField::sample(g, [&](double x) {
    const double s = (x - center) / width;
    return amplitude * std::exp(-s * s) * std::polar(1.0, k * x);
  });
}

/// A x e^{-x² + ikx}, vanishing at the origin (half-line data).
inline ComplexField x_gaussian(const GridSpec& g, double amplitude, double k) {
  return ComplexField::sample(
      g, [&](double x) { return amplitude * x * std::exp(-x * x) * std::polar(1.0, k * x); });
}

/// Half-line blow-up data. The profile A x e^{-x² + ikx} is taken as the gauged
/// state v0 (u0 = G_{3/4} v0) and A is chosen on the decreasing branch of
/// E(A v̂) = A² a - A⁶ b so that E equals `energy` (< 0).
struct BlowupData {
  ComplexField u0;
  ComplexField v0;
  double amplitude = 0.0;
};

inline BlowupData halfline_blowup_data(const GridSpec& g, double energy, double k = 0.0) {
  if (g.periodic()) throw Error("halfline_blowup_data: needs a half-line grid");
  if (!(energy < 0.0)) throw Error("halfline_blowup_data: target energy must be negative");
  const auto unit = x_gaussian(g, 1.0, k);
  const auto ux = derivative(unit);
  const double a = l2_norm_squared(ux);
  const double b = lp_norm_pow(unit, 6) / 16.0;
  const double peak = std::pow(a / (3.0 * b), 0.25);
  auto e = [&](double A) { return A * A * a - std::pow(A, 6) * b; };
  double lo = peak, hi = 2.0 * peak;
  while (e(hi) > energy) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (e(mid) > energy ? lo : hi) = mid;
  }
  BlowupData out{ComplexField(g), hi * unit, hi};
  out.u0 = gauge_transform(kToUFrame, out.v0);
  return out;
}

/// Compactly supported C^∞ bump centred at c with half-width r.
inline double bump(double x, double c, double r) {
  const double s = (x - c) / r;
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

inline ComplexField bump_field(const GridSpec& g, double amplitude, double center, double radius,
                               double k = 0.0) {
  return ComplexField::sample(g, [&](double x) {
    return amplitude * bump(x, center, radius) * std::polar(1.0, k * x);
  });
}

/// Sum of three chirped Gaussians with seeded random parameters; smooth,
/// decaying well inside |x| < 12.
inline ComplexField random_smooth_field(const GridSpec& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> center(-4.0, 4.0);
  std::uniform_real_distribution<double> width(0.7, 1.8);
  std::uniform_real_distribution<double> amp(0.2, 1.2);
  std::uniform_real_distribution<double> wave(-1.5, 1.5);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  ComplexField out(g);
  for (int b = 0; b < 3; ++b) {
    const double c = g.periodic() ? center(rng) : 1.0 + std::abs(center(rng));
    const double w = width(rng);
    const double a = amp(rng);
    const double k = wave(rng);
    const double p = phase(rng);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double x = g.x(j);
      const double s = (x - c) / w;
      out[j] += a * std::exp(-s * s) * std::polar(1.0, k * x + p);
    }
  }
  if (!g.periodic()) {
    // Vanish at the Dirichlet end: multiply by 1 - e^{-x²}.
    for (std::size_t j = 0; j < g.size(); ++j) out[j] *= 1.0 - std::exp(-g.x(j) * g.x(j));
    out[g.size() - 1] = 0.0;
  }
  return out;
}

}  // namespace dnls::fixtures
