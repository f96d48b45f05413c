#pragma once

// The ground state Q(x) = 2 sech^{1/2}(2x) of -Q'' + Q - (3/16) Q^5 = 0,
// its standing waves, and the sharp Gagliardo-Nirenberg ratio.

#include <cmath>

#include "dnls/grid.hpp"

namespace dnls {

/// 4/π², the best constant in ‖f‖₆⁶ ≤ C ‖f‖₂⁴ ‖fₓ‖₂².
inline constexpr double kSharpGNConstant = 4.0 / (kPi * kPi);

namespace ground {

inline double sech(double x) { return 1.0 / std::cosh(x); }

inline double Q(double x) { return 2.0 * std::sqrt(sech(2.0 * x)); }

inline double Qx(double x) { return -2.0 * std::sqrt(sech(2.0 * x)) * std::tanh(2.0 * x); }

/// ∫_{-∞}^x Q² dy = 2 (atan(sinh 2x) + π/2).
inline double mass_below(double x) { return 2.0 * (std::atan(std::sinh(2.0 * x)) + kPi / 2.0); }

// Closed-form invariants.
inline constexpr double kMass = 2.0 * kPi;
inline constexpr double kGradSquared = kPi;
inline constexpr double kL4Fourth = 16.0;
inline constexpr double kL6Sixth = 16.0 * kPi;

}  // namespace ground

struct GroundState {
  GridSpec grid;
  ComplexField q;
  ComplexField qx;
  bool analytic = true;
};

inline void require_line(const GridSpec& grid, const char* what) {
  if (!grid.periodic()) {
    throw Error(std::string(what) + ": the ground state lives on the line, not the half-line");
  }
}

/// Samples Q and Q' from the closed form, optionally phase-rotated and shifted:
/// e^{-iγ} Q(x - s).
inline GroundState ground_state(const GridSpec& grid, double gamma = 0.0, double shift = 0.0) {
  require_line(grid, "ground_state");
  if (grid.half_width() < 15.0) throw Error("ground_state: need L >= 15 for negligible tails");
  const cplx rot = std::polar(1.0, -gamma);
  auto q = ComplexField::sample(grid, [&](double x) { return rot * ground::Q(x - shift); });
  auto qx = ComplexField::sample(grid, [&](double x) { return rot * ground::Qx(x - shift); });
  return {grid, std::move(q), std::move(qx), true};
}

/// Max-norm residual of -q'' + q - (3/16) q⁵ over interior nodes.
inline double elliptic_residual(const ComplexField& q) {
  const auto qxx = second_derivative(q);
  double m = 0.0;
  const std::size_t n = q.size();
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const cplx r = -qxx[j] + q[j] - (3.0 / 16.0) * std::pow(std::abs(q[j]), 4) * q[j];
    m = std::max(m, std::abs(r));
  }
  return m;
}

enum class Frame { V, U };

/// e^{it}Q in the gauged frame, or R(t,x) = e^{it + (3/4)i∫_{-L}^x Q²} Q in the
/// original frame.
inline ComplexField standing_wave(double t, const GridSpec& grid, Frame frame = Frame::V) {
  require_line(grid, "standing_wave");
  const auto gs = ground_state(grid);
  ComplexField out = gs.q;
  if (frame == Frame::V) {
    out *= std::polar(1.0, t);
    return out;
  }
  const auto phase = cumulative_integral(grid, gs.q.modulus_squared());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out[j] = std::polar(1.0, t + 0.75 * phase[j]) * gs.q[j];
  }
  return out;
}

/// ‖f‖₆⁶ / (‖f‖₂⁴ ‖fₓ‖₂²).
inline double gn_functional(const ComplexField& f) {
  const double m = l2_norm_squared(f);
  const double g = l2_norm_squared(derivative(f));
  if (m == 0.0 || g == 0.0) throw Error("gn_functional: undefined functional for this field");
  return lp_norm_pow(f, 6) / (m * m * g);
}

/// d/ds E(v + s h) at s = 0.
inline double energy_directional_derivative(const ComplexField& v, const ComplexField& h) {
  const auto vx = derivative(v);
  const auto hx = derivative(h);
  RVec integrand(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double m4 = std::norm(v[j]) * std::norm(v[j]);
    integrand[j] = 2.0 * std::real(std::conj(vx[j]) * hx[j]) -
                   (6.0 / 16.0) * m4 * std::real(std::conj(v[j]) * h[j]);
  }
  return quadrature(v.grid(), integrand);
}

}  // namespace dnls
