#pragma once

// Gauge transforms  G_a f = exp(i a ∫^x |f|²) f  and the identities built on them.

#include <cmath>
#include <utility>

#include "dnls/grid.hpp"

namespace dnls {

/// Exponent a of the gauge transform.
struct GaugeParameter {
  double a = 0.0;

  constexpr GaugeParameter() = default;
  constexpr explicit GaugeParameter(double value) : a(value) {}
  constexpr GaugeParameter operator-() const { return GaugeParameter(-a); }
  friend constexpr GaugeParameter operator+(GaugeParameter x, GaugeParameter y) {
    return GaugeParameter(x.a + y.a);
  }

  static constexpr GaugeParameter minus_one() { return GaugeParameter(-1.0); }
  static constexpr GaugeParameter minus_three_quarters() { return GaugeParameter(-0.75); }
  static constexpr GaugeParameter minus_half() { return GaugeParameter(-0.5); }
  static constexpr GaugeParameter quarter() { return GaugeParameter(0.25); }
  static constexpr GaugeParameter half() { return GaugeParameter(0.5); }
  static constexpr GaugeParameter three_quarters() { return GaugeParameter(0.75); }
};

/// v = G_{-3/4} u maps the original unknown to the gauged one.
inline constexpr GaugeParameter kToVFrame = GaugeParameter::minus_three_quarters();
inline constexpr GaugeParameter kToUFrame = GaugeParameter::three_quarters();

/// ∫ |f|² from the left end of the grid to each node.
inline RVec gauge_phase_integral(const ComplexField& f) {
  return cumulative_integral(f.grid(), f.modulus_squared());
}

inline ComplexField gauge_transform(GaugeParameter a, const ComplexField& f) {
  if (a.a == 0.0) return f;
  const auto c = gauge_phase_integral(f);
  ComplexField out(f.grid());
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = std::polar(1.0, a.a * c[j]) * f[j];
  return out;
}

/// Jump of the periodic extension of G_a f across x = ±L:
/// |f(-L)| · |e^{i a M} - 1| with M the total mass. Zero on the half-line.
inline double seam_jump(GaugeParameter a, const ComplexField& f) {
  if (!f.grid().periodic()) return 0.0;
  const double m = l2_norm_squared(f);
  return std::abs(f[0]) * std::abs(std::polar(1.0, a.a * m) - 1.0);
}

inline constexpr double kSeamJumpThreshold = 1e-10;

/// ∂ₓ G_a f = e^{i a ∫|f|²} (i a |f|² f + fₓ), with fₓ from `derivative`.
inline ComplexField gauge_derivative(GaugeParameter a, const ComplexField& f) {
  const auto fx = derivative(f);
  const auto c = gauge_phase_integral(f);
  ComplexField out(f.grid());
  const cplx ia(0.0, a.a);
  for (std::size_t j = 0; j < f.size(); ++j) {
    out[j] = std::polar(1.0, a.a * c[j]) * (ia * std::norm(f[j]) * f[j] + fx[j]);
  }
  return out;
}

/// Derivative of G_a f: spectral differentiation when the periodic seam is
/// clean, the analytic gauge form otherwise.
inline ComplexField derivative_of_gauged(GaugeParameter a, const ComplexField& f) {
  if (f.grid().periodic() && seam_jump(a, f) <= kSeamJumpThreshold) {
    return derivative(gauge_transform(a, f));
  }
  return gauge_derivative(a, f);
}

/// E_D(u) evaluated through w = G_a u:
///   ‖wₓ‖² + (2a + 3/2) Im∫|w|² w w̄ₓ + (a² + 3a/2 + 1/2) ∫|w|⁶.
inline double energy_ed_via_gauge(GaugeParameter a, const ComplexField& u) {
  const auto w = gauge_transform(a, u);
  const auto wx = gauge_derivative(a, u);
  const double c1 = 2.0 * a.a + 1.5;
  const double c2 = a.a * a.a + 1.5 * a.a + 0.5;
  RVec integrand(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double m = std::norm(w[j]);
    integrand[j] = std::norm(wx[j]) + c1 * m * std::imag(w[j] * std::conj(wx[j])) + c2 * m * m * m;
  }
  return quadrature(u.grid(), integrand);
}

/// (φ, ψ) with φ = G_{-1} u and ψ = φₓ + (i/2)|φ|²φ = e^{-i∫|u|²}(uₓ - (i/2)|u|²u).
///
/// Both phases use the density |u|²; ψ carries the same e^{-i∫|u|²} factor as φ,
/// which is what makes the pair solve the coupled cubic system.
inline std::pair<ComplexField, ComplexField> to_phi_psi(const ComplexField& u) {
  const auto ux = derivative(u);
  const auto c = gauge_phase_integral(u);
  ComplexField phi(u.grid());
  ComplexField psi(u.grid());
  const cplx half_i(0.0, 0.5);
  for (std::size_t j = 0; j < u.size(); ++j) {
    const cplx rot = std::polar(1.0, -c[j]);
    phi[j] = rot * u[j];
    psi[j] = rot * (ux[j] - half_i * std::norm(u[j]) * u[j]);
  }
  return {std::move(phi), std::move(psi)};
}

/// uₓ from v through the frame map u = G_{3/4} v.
inline ComplexField u_gradient_from_v(const ComplexField& v) {
  return gauge_derivative(kToUFrame, v);
}

}  // namespace dnls
