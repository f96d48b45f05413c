#pragma once

// Conserved quantities, weighted virial functionals and their rate formulas,
// and the half-line blow-up certificate.

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "dnls/gauge.hpp"
#include "dnls/grid.hpp"

namespace dnls {

inline double mass(const ComplexField& f) { return l2_norm_squared(f); }

/// E(v) = ‖vₓ‖₂² - (1/16)‖v‖₆⁶ (gauged frame).
inline double energy_E(const ComplexField& v, const ComplexField& vx) {
  RVec integrand(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double m = std::norm(v[j]);
    integrand[j] = std::norm(vx[j]) - m * m * m / 16.0;
  }
  return quadrature(v.grid(), integrand);
}
inline double energy_E(const ComplexField& v) { return energy_E(v, derivative(v)); }

/// E_D(u) = ∫ |uₓ|² + (3/2) Im(|u|² u ūₓ) + (1/2)|u|⁶ (original frame).
inline double energy_ED(const ComplexField& u, const ComplexField& ux) {
  RVec integrand(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double m = std::norm(u[j]);
    integrand[j] = std::norm(ux[j]) + 1.5 * m * std::imag(u[j] * std::conj(ux[j])) + 0.5 * m * m * m;
  }
  return quadrature(u.grid(), integrand);
}
inline double energy_ED(const ComplexField& u) { return energy_ED(u, derivative(u)); }

/// P(v) = Im∫ v̄ vₓ + (1/4)∫|v|⁴.
inline double momentum_P(const ComplexField& v, const ComplexField& vx) {
  RVec integrand(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double m = std::norm(v[j]);
    integrand[j] = std::imag(std::conj(v[j]) * vx[j]) + 0.25 * m * m;
  }
  return quadrature(v.grid(), integrand);
}
inline double momentum_P(const ComplexField& v) { return momentum_P(v, derivative(v)); }

/// P_D(u) = Im∫ ū uₓ - (1/2)∫|u|⁴.
inline double momentum_PD(const ComplexField& u, const ComplexField& ux) {
  RVec integrand(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double m = std::norm(u[j]);
    integrand[j] = std::imag(std::conj(u[j]) * ux[j]) - 0.5 * m * m;
  }
  return quadrature(u.grid(), integrand);
}
inline double momentum_PD(const ComplexField& u) { return momentum_PD(u, derivative(u)); }

// ---------------------------------------------------------------------------
// Virial weights.

enum class WeightKind { One, X, XSquared, Custom };

/// Real weight ψ sampled with analytic ψ' and ψ'''.
class VirialWeight {
 public:
  static VirialWeight one(const GridSpec& g) {
    return {WeightKind::One, g, [](double) { return 1.0; }, [](double) { return 0.0; },
            [](double) { return 0.0; }};
  }
  static VirialWeight x(const GridSpec& g) {
    return {WeightKind::X, g, [](double s) { return s; }, [](double) { return 1.0; },
            [](double) { return 0.0; }};
  }
  static VirialWeight x_squared(const GridSpec& g) {
    return {WeightKind::XSquared, g, [](double s) { return s * s; },
            [](double s) { return 2.0 * s; }, [](double) { return 0.0; }};
  }
  /// ψ, ψ', ψ''' must be supplied analytically; differencing user data is not offered.
  static VirialWeight custom(const GridSpec& g, const std::function<double(double)>& psi,
                             const std::function<double(double)>& dpsi,
                             const std::function<double(double)>& d3psi) {
    if (!psi || !dpsi || !d3psi) {
      throw Error("VirialWeight: custom weights need analytic psi, psi' and psi'''");
    }
    return {WeightKind::Custom, g, psi, dpsi, d3psi};
  }

  WeightKind kind() const { return kind_; }
  const RVec& psi() const { return psi_; }
  const RVec& dpsi() const { return dpsi_; }
  const RVec& d3psi() const { return d3psi_; }

 private:
  VirialWeight(WeightKind kind, const GridSpec& g, const std::function<double(double)>& p,
               const std::function<double(double)>& dp, const std::function<double(double)>& d3p)
      : kind_(kind), psi_(g.size()), dpsi_(g.size()), d3psi_(g.size()) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double x = g.x(j);
      psi_[j] = p(x);
      dpsi_[j] = dp(x);
      d3psi_[j] = d3p(x);
    }
  }

  WeightKind kind_;
  RVec psi_, dpsi_, d3psi_;
};

inline void check_weight(const ComplexField& v, const VirialWeight& w) {
  if (w.psi().size() != v.size()) throw Error("virial: weight sampled on a different grid");
}

/// I = ∫ψ|v|².
inline double virial_I(const ComplexField& v, const VirialWeight& w) {
  check_weight(v, w);
  RVec integrand(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) integrand[j] = w.psi()[j] * std::norm(v[j]);
  return quadrature(v.grid(), integrand);
}

/// J = 2 Im∫ψ v̄ vₓ + (1/2)∫ψ|v|⁴.
inline double virial_J(const ComplexField& v, const ComplexField& vx, const VirialWeight& w) {
  check_weight(v, w);
  RVec integrand(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double m = std::norm(v[j]);
    integrand[j] = w.psi()[j] * (2.0 * std::imag(std::conj(v[j]) * vx[j]) + 0.5 * m * m);
  }
  return quadrature(v.grid(), integrand);
}
inline double virial_J(const ComplexField& v, const VirialWeight& w) {
  return virial_J(v, derivative(v), w);
}

/// I'(t) = 2 Im∫ψ' v̄ vₓ.
inline double virial_I_rate(const ComplexField& v, const ComplexField& vx, const VirialWeight& w) {
  check_weight(v, w);
  RVec integrand(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    integrand[j] = 2.0 * w.dpsi()[j] * std::imag(std::conj(v[j]) * vx[j]);
  }
  return quadrature(v.grid(), integrand);
}
inline double virial_I_rate(const ComplexField& v, const VirialWeight& w) {
  return virial_I_rate(v, derivative(v), w);
}

/// J'(t) = 4∫ψ'(|vₓ|² - |v|⁶/16) - ∫ψ'''|v|².
inline double virial_J_rate(const ComplexField& v, const ComplexField& vx, const VirialWeight& w) {
  check_weight(v, w);
  RVec integrand(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double m = std::norm(v[j]);
    integrand[j] = 4.0 * w.dpsi()[j] * (std::norm(vx[j]) - m * m * m / 16.0) - w.d3psi()[j] * m;
  }
  return quadrature(v.grid(), integrand);
}
inline double virial_J_rate(const ComplexField& v, const VirialWeight& w) {
  return virial_J_rate(v, derivative(v), w);
}

/// ∫ x |v|⁴, the term separating the DNLS variance law from the quintic NLS one.
inline double surplus_term(const ComplexField& v) {
  RVec integrand(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double m = std::norm(v[j]);
    integrand[j] = v.grid().x(j) * m * m;
  }
  return quadrature(v.grid(), integrand);
}

// ---------------------------------------------------------------------------
// Per-frame record.

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double energy_E = 0.0;
  double energy_ED = 0.0;
  double momentum_P = 0.0;
  double momentum_PD = 0.0;
  double virial_I = 0.0;  // ψ = x²
  double virial_J = 0.0;  // ψ = x
  double grad_norm = 0.0;
  double dt_used = 0.0;

  bool finite() const {
    for (double q : {t, mass, energy_E, energy_ED, momentum_P, momentum_PD, virial_I, virial_J,
                     grad_norm, dt_used}) {
      if (!std::isfinite(q)) return false;
    }
    return true;
  }
};

/// Evaluates every record entry from a gauged-frame state. The original-frame
/// entries come from u = G_{3/4} v, built once; uₓ uses the analytic gauge form.
inline DiagnosticsRecord diagnose(const ComplexField& v, double t, double dt_used) {
  const auto vx = derivative(v);
  const auto u = gauge_transform(kToUFrame, v);
  const auto ux = gauge_derivative(kToUFrame, v);
  const auto& g = v.grid();
  DiagnosticsRecord r;
  r.t = t;
  r.dt_used = dt_used;
  r.mass = mass(v);
  r.energy_E = energy_E(v, vx);
  r.energy_ED = energy_ED(u, ux);
  r.momentum_P = momentum_P(v, vx);
  r.momentum_PD = momentum_PD(u, ux);
  r.virial_I = virial_I(v, VirialWeight::x_squared(g));
  r.virial_J = virial_J(v, vx, VirialWeight::x(g));
  r.grad_norm = l2_norm(vx);
  return r;
}

// ---------------------------------------------------------------------------
// Blow-up certificate on the half-line.

struct BlowupCertificate {
  double a2 = 0.0;  // 4 E(u₀)
  double a1 = 0.0;  // I'(0) + ∫ x |v₀|⁴
  double a0 = 0.0;  // I(0)
  double t_star_bound = 0.0;
  double mass0 = 0.0;

  /// a2 t² + a1 t + a0, the upper bound on I(t).
  double bound(double t) const { return (a2 * t + a1) * t + a0; }

  /// mass0 / (2 √I): the lower bound on ‖vₓ(t)‖₂.
  static double gradient_lower_bound(double mass0, double I) { return mass0 / (2.0 * std::sqrt(I)); }
};

/// Positive root of a2 t² + a1 t + a0 for a2 < 0 ≤ a0.
inline double quadratic_positive_root(double a2, double a1, double a0) {
  const double disc = std::sqrt(a1 * a1 - 4.0 * a2 * a0);
  // -(a1 + disc) / (2 a2), arranged to avoid cancellation when a1 > 0.
  if (a1 >= 0.0) return (a1 + disc) / (-2.0 * a2);
  return 2.0 * a0 / (disc - a1);
}

/// Coefficients of I(t) ≤ 4E t² + (I'(0) + ∫x|v₀|⁴) t + I(0) from u₀ alone.
/// I'(0) comes from the rate formula with ψ = x², never from time differencing.
inline BlowupCertificate blowup_certificate_from_v(const ComplexField& v0) {
  const auto& g = v0.grid();
  if (g.periodic()) throw Error("blowup_certificate: half-line data required");
  const auto vx = derivative(v0);
  const double E = energy_E(v0, vx);
  if (!(E < 0.0)) {
    throw Error("blowup_certificate: nonnegative energy (E = " + std::to_string(E) +
                "), certificate inapplicable");
  }
  BlowupCertificate c;
  c.a2 = 4.0 * E;
  c.a1 = virial_I_rate(v0, vx, VirialWeight::x_squared(g)) + surplus_term(v0);
  c.a0 = virial_I(v0, VirialWeight::x_squared(g));
  c.t_star_bound = quadratic_positive_root(c.a2, c.a1, c.a0);
  c.mass0 = mass(v0);
  return c;
}

inline BlowupCertificate blowup_certificate(const ComplexField& u0) {
  return blowup_certificate_from_v(gauge_transform(kToVFrame, u0));
}

}  // namespace dnls
