#pragma once

// Mass-critical rescaling and H¹ fitting against the orbit e^{-iγ}Q(· - s).

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "dnls/diagnostics.hpp"
#include "dnls/ground_state.hpp"
#include "dnls/grid.hpp"

namespace dnls {

inline constexpr double kMomentumThreshold = ground::kL4Fourth / 8.0;  // (1/8)‖Q‖₄⁴ = 2
inline constexpr int kFitLattice = 64;
inline constexpr double kFitTolerance = 1e-8;

struct Rescaled {
  double lambda = 1.0;
  ComplexField w;
};

/// λ = ‖Qₓ‖₂/‖vₓ‖₂ and w(x) = λ^{1/2} v(λx), resampled on v's grid.
inline Rescaled rescale(const ComplexField& v) {
  if (!v.grid().periodic()) throw Error("rescale: periodic line grid required");
  const double g = gradient_norm(v);
  if (!(g > 0.0)) throw Error("rescale: zero gradient");
  const double lambda = std::sqrt(ground::kGradSquared) / g;
  const auto& grid = v.grid();
  RVec pts(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) pts[j] = lambda * grid.x(j);
  auto vals = band_limited_eval(v, pts);
  const double amp = std::sqrt(lambda);
  for (auto& z : vals) z *= amp;
  return {lambda, ComplexField(grid, std::move(vals))};
}

struct ModulationFit {
  double lambda = 1.0;
  double gamma0 = 0.0;
  double x0 = 0.0;
  double residual_h1 = 0.0;
  double momentum_check = 0.0;  // λ·P(v)
};

namespace detail {

// z(s) = ∫ w̄ Q(· - s) + w̄ₓ Q'(· - s); the H¹ distance to e^{-iγ}Q_s is
// ‖w‖²_{H¹} + 3π - 2 Re(e^{-iγ} z(s)).
class OrbitOverlap {
 public:
  explicit OrbitOverlap(const ComplexField& w) : w_(w), wx_(derivative(w)) {
    norm_sq_ = std::pow(sobolev_h1_norm(w), 2);
  }

  cplx z(double s) const {
    const auto& g = w_.grid();
    CVec f(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double y = g.x(j) - s;
      f[j] = std::conj(w_[j]) * ground::Q(y) + std::conj(wx_[j]) * ground::Qx(y);
    }
    return quadrature(g, f);
  }

  double objective(double gamma, double s) const { return objective(gamma, z(s)); }
  double objective(double gamma, cplx zs) const {
    return norm_sq_ + 3.0 * kPi - 2.0 * std::real(std::polar(1.0, -gamma) * zs);
  }

 private:
  const ComplexField& w_;
  ComplexField wx_;
  double norm_sq_ = 0.0;
};

inline double wrap_phase(double g) {
  g = std::fmod(g, 2.0 * kPi);
  if (g < 0.0) g += 2.0 * kPi;
  if (g >= 2.0 * kPi) g = 0.0;
  return g;
}

template <class F>
double golden_min(F&& f, double a, double b, double tol) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// Best H¹ fit of w by e^{-iγ}Q(· - s). Lattice search on [0,2π) × [-L/2, L/2]
/// then coordinate descent. Ties go to the smaller residual, then smaller γ.
inline ModulationFit fit_to_ground_state(const ComplexField& w) {
  const auto& g = w.grid();
  if (!g.periodic()) throw Error("fit_to_ground_state: periodic line grid required");
  const double gw = gradient_norm(w);
  const double gq = std::sqrt(ground::kGradSquared);
  if (std::abs(gw - gq) > 0.05 * gq) {
    throw Error("fit_to_ground_state: input is not rescaled (‖wₓ‖₂ off ‖Qₓ‖₂ by more than 5%)");
  }
  const detail::OrbitOverlap ov(w);
  const double half = 0.5 * g.half_width();
  const double ds = 2.0 * half / kFitLattice;
  const double dg = 2.0 * kPi / kFitLattice;

  double best = std::numeric_limits<double>::infinity();
  double gamma = 0.0, s = 0.0;
  for (int is = 0; is < kFitLattice; ++is) {
    const double si = -half + is * ds;
    const cplx zs = ov.z(si);
    for (int ig = 0; ig < kFitLattice; ++ig) {
      const double gi = ig * dg;
      const double f = ov.objective(gi, zs);
      const double tie = 1e-13 * std::max(1.0, std::abs(best));
      if (f < best - tie || (std::abs(f - best) <= tie && gi < gamma)) {
        best = f;
        gamma = gi;
        s = si;
      }
    }
  }

  // Coordinate descent: γ has the closed-form minimiser arg z(s), s is found
  // by golden section in a shrinking bracket.
  double width = ds;
  for (int sweep = 0; sweep < 200; ++sweep) {
    const double g_new = detail::wrap_phase(std::arg(ov.z(s)));
    const double s_new = detail::golden_min([&](double x) { return ov.objective(g_new, x); }, s - width,
                                            s + width, 0.1 * kFitTolerance);
    double dgam = std::abs(g_new - gamma);
    dgam = std::min(dgam, 2.0 * kPi - dgam);
    const double dpos = std::abs(s_new - s);
    gamma = g_new;
    s = s_new;
    width = std::max(4.0 * dpos, 1e-6);
    if (dgam < kFitTolerance && dpos < kFitTolerance) break;
  }
  gamma = detail::wrap_phase(std::arg(ov.z(s)));

  ModulationFit fit;
  fit.lambda = gq / gw;
  fit.gamma0 = gamma;
  fit.x0 = s;
  fit.residual_h1 = sobolev_h1_norm(w - ground_state(g, gamma, s).q);
  fit.momentum_check = fit.lambda * momentum_P(w);
  return fit;
}

/// rescale + fit; λ and λ·P refer to v itself.
inline ModulationFit modulation_fit(const ComplexField& v) {
  const auto r = rescale(v);
  auto fit = fit_to_ground_state(r.w);
  fit.lambda = r.lambda;
  fit.momentum_check = r.lambda * momentum_P(v);
  return fit;
}

struct MomentumReport {
  double lambda_times_P = 0.0;
  double threshold = kMomentumThreshold;
  bool obstruction_active = false;
  /// 8P(v)‖Qₓ‖₂/‖Q‖₄⁴ = P·√π/2; P is conserved, so this bounds ‖vₓ(t)‖₂.
  double gradient_bound = 0.0;
  /// E(w) = λ²E(v), the smallness hypothesis of the fitting lemma.
  double rescaled_energy = 0.0;
};

inline MomentumReport momentum_obstruction(const ComplexField& v, const ModulationFit& fit) {
  MomentumReport r;
  const double p = momentum_P(v);
  r.lambda_times_P = fit.lambda * p;
  r.obstruction_active = r.lambda_times_P >= r.threshold;
  r.gradient_bound = 8.0 * p * std::sqrt(ground::kGradSquared) / ground::kL4Fourth;
  r.rescaled_energy = fit.lambda * fit.lambda * energy_E(v);
  return r;
}

}  // namespace dnls
