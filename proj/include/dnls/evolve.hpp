#pragma once

// Time integration of the gauged DNLS
//   i vₜ + vₓₓ = (i/2)|v|²vₓ - (i/2)v²v̄ₓ - (3/16)|v|⁴v
// and of the quintic NLS  i uₜ + uₓₓ + (3/16)|u|⁴u = 0.
//
// Line: ETDRK4 in Fourier space with 2/3-rule dealiasing.
// Half-line: fourth-order differences, linearly implicit midpoint in time.
// Both adapt dt by step doubling.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dnls/diagnostics.hpp"
#include "dnls/grid.hpp"

namespace dnls {

enum class Equation { DNLSGauged, NLS5 };

inline std::string to_string(Equation e) { return e == Equation::DNLSGauged ? "dnls" : "nls5"; }

enum class SolverStatus { ReachedTEnd, BlowupStop, StepFailure };

inline std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::ReachedTEnd:
      return "ReachedTEnd";
    case SolverStatus::BlowupStop:
      return "BlowupStop";
    case SolverStatus::StepFailure:
      return "StepFailure";
  }
  return "?";
}

inline constexpr double kDefaultBlowupFactor = 50.0;
inline constexpr double kMinStep = 1e-14;
inline constexpr double kBoundaryLeakThreshold = 1e-6;

struct TrajectoryFrame {
  double t = 0.0;
  ComplexField state;
  DiagnosticsRecord diagnostics;

  bool has_state() const { return state.size() == state.grid().size(); }
};

struct EvolutionProblem {
  Equation equation = Equation::DNLSGauged;
  ComplexField initial;
  double t_end = 1.0;
  double dt0 = 1e-3;
  double tolerance = 1e-10;
  std::size_t frame_stride = 1;
  /// When positive, frames are taken at exact multiples of this interval
  /// instead of every `frame_stride` accepted steps.
  double frame_interval = 0.0;
  /// Blow-up guard on ‖vₓ‖₂; zero selects 50 × ‖∂ₓv₀‖₂.
  double stop_grad_norm = 0.0;
  bool adaptive = true;
  std::size_t max_steps = 20'000'000;
  /// When false only the first and the latest frame keep their state;
  /// the others keep diagnostics only.
  bool keep_states = true;
  /// Called for every recorded frame.
  std::function<void(const TrajectoryFrame&)> on_frame;

  explicit EvolutionProblem(ComplexField init) : initial(std::move(init)) {}

  double guard() const {
    if (stop_grad_norm > 0.0) return stop_grad_norm;
    const double g0 = gradient_norm(initial);
    return g0 > 0.0 ? kDefaultBlowupFactor * g0 : std::numeric_limits<double>::infinity();
  }

  void validate() const {
    if (!(dt0 > 0.0)) throw Error("EvolutionProblem: dt0 must be positive");
    if (!(t_end > 0.0)) throw Error("EvolutionProblem: t_end must be positive");
    if (adaptive && !(tolerance > 0.0)) throw Error("EvolutionProblem: tolerance must be positive");
    if (frame_stride == 0) throw Error("EvolutionProblem: frame_stride must be >= 1");
    if (!(guard() > gradient_norm(initial))) {
      throw Error("EvolutionProblem: stop_grad_norm must exceed the initial gradient norm");
    }
  }
};

struct SolverOutcome {
  SolverStatus status = SolverStatus::ReachedTEnd;
  std::vector<TrajectoryFrame> frames;
  double t_final = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  /// Largest |v| seen within 10% of the artificial boundary.
  double boundary_leak = 0.0;
  std::vector<std::string> warnings;
  std::string message;

  const TrajectoryFrame& last() const { return frames.back(); }
};

namespace detail {

inline double quantize_step(double dt) {
  // Snap down to 2^{q/8} so coefficient tables get reused.
  const double q = std::floor(8.0 * std::log2(dt));
  return std::exp2(q / 8.0);
}

inline double edge_leak(const ComplexField& v) {
  const auto& g = v.grid();
  const double L = g.half_width();
  double m = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double x = g.x(j);
    const bool near = g.periodic() ? std::abs(x) >= 0.9 * L : x >= 0.9 * L;
    if (near) m = std::max(m, std::abs(v[j]));
  }
  return m;
}

// ---------------------------------------------------------------------------
// ETDRK4 on the periodic line; the state lives in Fourier space.

class LineStepper {
 public:
  LineStepper(Equation eq, const GridSpec& g) : eq_(eq), grid_(g), n_(g.size()), mask_(dealias_mask(g)) {
    k_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) k_[j] = g.wavenumber(j);
    k_[n_ / 2] = 0.0;
    phys_.resize(n_);
    deriv_.resize(n_);
    work_.resize(n_);
  }

  static constexpr int kContourPoints = 32;

  struct Coefficients {
    CVec e, e2, q, f1, f2, f3;
  };

  const Coefficients& coefficients(double h) {
    auto it = cache_.find(h);
    if (it != cache_.end()) return it->second;
    if (cache_.size() > 64) cache_.clear();
    Coefficients c;
    for (auto* v : {&c.e, &c.e2, &c.q, &c.f1, &c.f2, &c.f3}) v->resize(n_);
    std::array<cplx, kContourPoints> roots{};
    for (int j = 0; j < kContourPoints; ++j) {
      roots[static_cast<std::size_t>(j)] = std::polar(1.0, 2.0 * kPi * (j + 0.5) / kContourPoints);
    }
    for (std::size_t m = 0; m < n_; ++m) {
      const cplx z(0.0, -k_[m] * k_[m] * h);
      c.e[m] = std::exp(z);
      c.e2[m] = std::exp(0.5 * z);
      cplx q = 0.0, f1 = 0.0, f2 = 0.0, f3 = 0.0;
      for (const auto& r : roots) {
        const cplx zr = z + r;
        const cplx ez = std::exp(zr);
        const cplx ez2 = std::exp(0.5 * zr);
        const cplx zr3 = zr * zr * zr;
        q += (ez2 - 1.0) / zr;
        f1 += (-4.0 - zr + ez * (4.0 - 3.0 * zr + zr * zr)) / zr3;
        f2 += (2.0 + zr + ez * (-2.0 + zr)) / zr3;
        f3 += (-4.0 - 3.0 * zr - zr * zr + ez * (4.0 - zr)) / zr3;
      }
      const double s = h / kContourPoints;
      c.q[m] = s * q;
      c.f1[m] = s * f1;
      c.f2[m] = s * f2;
      c.f3[m] = s * f3;
    }
    return cache_.emplace(h, std::move(c)).first->second;
  }

  /// Dealiased nonlinear term in Fourier space.
  void nonlinear(const CVec& vhat, CVec& out) {
    ifft(vhat, phys_);
    if (eq_ == Equation::DNLSGauged) {
      for (std::size_t j = 0; j < n_; ++j) work_[j] = vhat[j] * cplx(0.0, k_[j]);
      ifft(work_, deriv_);
      for (std::size_t j = 0; j < n_; ++j) {
        const cplx v = phys_[j];
        const cplx vx = deriv_[j];
        const double m = std::norm(v);
        work_[j] = 0.5 * m * vx - 0.5 * v * v * std::conj(vx) + cplx(0.0, 3.0 / 16.0) * m * m * v;
      }
    } else {
      for (std::size_t j = 0; j < n_; ++j) {
        const double m = std::norm(phys_[j]);
        work_[j] = cplx(0.0, 3.0 / 16.0) * m * m * phys_[j];
      }
    }
    fft(work_, out);
    for (std::size_t j = 0; j < n_; ++j) out[j] *= mask_[j];
  }

  CVec step(const CVec& v, double h) {
    const auto& c = coefficients(h);
    CVec nv(n_), a(n_), na(n_), b(n_), nb(n_), cc(n_), nc(n_), out(n_);
    nonlinear(v, nv);
    for (std::size_t j = 0; j < n_; ++j) a[j] = c.e2[j] * v[j] + c.q[j] * nv[j];
    nonlinear(a, na);
    for (std::size_t j = 0; j < n_; ++j) b[j] = c.e2[j] * v[j] + c.q[j] * na[j];
    nonlinear(b, nb);
    for (std::size_t j = 0; j < n_; ++j) cc[j] = c.e2[j] * a[j] + c.q[j] * (2.0 * nb[j] - nv[j]);
    nonlinear(cc, nc);
    for (std::size_t j = 0; j < n_; ++j) {
      out[j] = c.e[j] * v[j] + c.f1[j] * nv[j] + 2.0 * c.f2[j] * (na[j] + nb[j]) + c.f3[j] * nc[j];
    }
    return out;
  }

  double norm(const CVec& vhat) const {
    double s = 0.0;
    for (const auto& z : vhat) s += std::norm(z);
    return std::sqrt(s * grid_.dx() / static_cast<double>(n_));
  }

  double grad_norm(const CVec& vhat) const {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += k_[j] * k_[j] * std::norm(vhat[j]);
    return std::sqrt(s * grid_.dx() / static_cast<double>(n_));
  }

  CVec to_state(const ComplexField& v) const {
    auto hat = fft(v.span());
    for (std::size_t j = 0; j < n_; ++j) hat[j] *= mask_[j];
    return hat;
  }

  ComplexField to_field(const CVec& vhat) const { return {grid_, ifft(vhat)}; }

  static constexpr double kOrder = 4.0;

 private:
  Equation eq_;
  GridSpec grid_;
  std::size_t n_;
  std::vector<double> mask_;
  RVec k_;
  CVec phys_, deriv_, work_;
  std::map<double, Coefficients> cache_;
};

// ---------------------------------------------------------------------------
// Banded LU (two sub- and two super-diagonals), no pivoting. The matrices
// I ∓ (ih/2)D₂ are normal with eigenvalues bounded away from zero.

class PentaLU {
 public:
  // rows[r][c - r + 2] holds A(r, c).
  explicit PentaLU(std::vector<std::array<cplx, 5>> rows) : rows_(std::move(rows)) {
    const std::size_t m = rows_.size();
    for (std::size_t i = 0; i < m; ++i) {
      const cplx piv = rows_[i][2];
      for (std::size_t r = i + 1; r < std::min(i + 3, m); ++r) {
        cplx& lower = rows_[r][i + 2 - r];
        lower /= piv;
        for (std::size_t c = i + 1; c < std::min(i + 3, m); ++c) {
          rows_[r][c + 2 - r] -= lower * rows_[i][c + 2 - i];
        }
      }
    }
    inv_diag_.resize(m);
    for (std::size_t i = 0; i < m; ++i) inv_diag_[i] = 1.0 / rows_[i][2];
  }

  void solve(std::span<cplx> b) const {
    const std::size_t m = rows_.size();
    if (m > 1) b[1] -= rows_[1][1] * b[0];
    for (std::size_t r = 2; r < m; ++r) b[r] -= rows_[r][0] * b[r - 2] + rows_[r][1] * b[r - 1];
    for (std::size_t r = m; r-- > 0;) {
      cplx acc = b[r];
      if (r + 1 < m) acc -= rows_[r][3] * b[r + 1];
      if (r + 2 < m) acc -= rows_[r][4] * b[r + 2];
      b[r] = acc * inv_diag_[r];
    }
  }

 private:
  std::vector<std::array<cplx, 5>> rows_;
  CVec inv_diag_;
};

// ---------------------------------------------------------------------------
// Half-line: v(0) = v(L) = 0. Interior Laplacian is the fourth-order stencil
// with odd reflection through each Dirichlet node.

class HalflineStepper {
 public:
  HalflineStepper(Equation eq, const GridSpec& g) : eq_(eq), grid_(g), n_(g.size()) {
    const double s = 1.0 / (12.0 * g.dx() * g.dx());
    const std::size_t m = n_ - 2;
    lap_.assign(m, {});
    for (std::size_t i = 0; i < m; ++i) {
      lap_[i] = {-s, 16.0 * s, -30.0 * s, 16.0 * s, -s};
    }
    // Odd reflection: v(-dx) = -v(dx) at both ends.
    lap_[0][2] += s;
    lap_[m - 1][2] += s;
  }

  void apply_laplacian(std::span<const cplx> v, std::span<cplx> out) const {
    // v has the two Dirichlet zeros at its ends; ghost values by odd reflection.
    const double s = 1.0 / (12.0 * grid_.dx() * grid_.dx());
    const std::size_t n = n_;
    auto at = [&](std::ptrdiff_t j) -> cplx {
      if (j < 0) return -v[static_cast<std::size_t>(-j)];
      if (j >= static_cast<std::ptrdiff_t>(n)) return -v[static_cast<std::size_t>(2 * (n - 1) - j)];
      return v[static_cast<std::size_t>(j)];
    };
    out[1] = s * (-at(-1) + 16.0 * v[0] - 30.0 * v[1] + 16.0 * v[2] - v[3]);
    for (std::size_t j = 2; j + 2 < n; ++j) {
      out[j] = s * (-(v[j - 2] + v[j + 2]) + 16.0 * (v[j - 1] + v[j + 1]) - 30.0 * v[j]);
    }
    out[n - 2] = s * (-v[n - 4] + 16.0 * v[n - 3] - 30.0 * v[n - 2] + 16.0 * v[n - 1] -
                      at(static_cast<std::ptrdiff_t>(n)));
    out[0] = 0.0;
    out[n - 1] = 0.0;
  }

  const PentaLU& implicit_factor(double h) {
    auto it = cache_.find(h);
    if (it != cache_.end()) return it->second;
    if (cache_.size() > 64) cache_.clear();
    const cplx alpha(0.0, 0.5 * h);
    auto rows = lap_;
    for (auto& r : rows) {
      for (auto& e : r) e *= -alpha;
      r[2] += 1.0;
    }
    return cache_.emplace(h, PentaLU(std::move(rows))).first->second;
  }

  // The nonlinearity is i·f(v)·v with f real: Im(v̄vₓ) + (3/16)|v|⁴ for the
  // gauged equation, (3/16)|v|⁴ for NLS5.
  void phase_rate(const CVec& v, RVec& f) {
    f.assign(n_, 0.0);
    if (eq_ == Equation::DNLSGauged) {
      vx_.resize(n_);
      fd_derivative(grid_, v, vx_);
    }
    for (std::size_t j = 1; j + 1 < n_; ++j) {
      const double m = std::norm(v[j]);
      f[j] = 3.0 / 16.0 * m * m;
      if (eq_ == Equation::DNLSGauged) f[j] += v[j].real() * vx_[j].imag() - v[j].imag() * vx_[j].real();
    }
  }

  // Linearly implicit midpoint: f is frozen at a predicted midpoint, then
  // (I - (ih/2)(D2 + f))v+ = (I + (ih/2)(D2 + f))v. The operator is real
  // symmetric, so the step keeps sum |v_j|^2 exactly.
  CVec step(const CVec& v, double h) {
    const cplx alpha(0.0, 0.5 * h);
    lapv_.resize(n_);
    apply_laplacian(v, lapv_);
    phase_rate(v, f0_);
    rhs_.resize(n_);
    star_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      rhs_[j] = v[j] + alpha * lapv_[j];
      star_[j] = rhs_[j] + cplx(0.0, h * f0_[j]) * v[j];
    }
    solve_interior(implicit_factor(h), star_);
    for (std::size_t j = 0; j < n_; ++j) star_[j] = 0.5 * (v[j] + star_[j]);
    phase_rate(star_, f1_);
    CVec out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = rhs_[j] + alpha * f1_[j] * v[j];
    auto rows = lap_;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (auto& e : rows[i]) e *= -alpha;
      rows[i][2] += 1.0 - alpha * f1_[i + 1];
    }
    solve_interior(PentaLU(std::move(rows)), out);
    return out;
  }

  /// H¹ norm; the step error near collapse lives in the gradient.
  double norm(const CVec& v) {
    vx_.resize(n_);
    fd_derivative(grid_, v, vx_);
    RVec m(n_);
    for (std::size_t j = 0; j < n_; ++j) m[j] = std::norm(v[j]) + std::norm(vx_[j]);
    return std::sqrt(quadrature(grid_, m));
  }

  double grad_norm(const CVec& v) const {
    CVec vx(n_);
    fd_derivative(grid_, v, vx);
    RVec m(n_);
    for (std::size_t j = 0; j < n_; ++j) m[j] = std::norm(vx[j]);
    return std::sqrt(quadrature(grid_, m));
  }

  CVec to_state(const ComplexField& v) const {
    CVec out = v.values();
    out[0] = 0.0;
    out[n_ - 1] = 0.0;
    return out;
  }

  ComplexField to_field(const CVec& v) const { return {grid_, v}; }

  static constexpr double kOrder = 2.0;

 private:
  void solve_interior(const PentaLU& lu, CVec& v) const {
    lu.solve(std::span<cplx>(v).subspan(1, n_ - 2));
    v[0] = 0.0;
    v[n_ - 1] = 0.0;
  }

  Equation eq_;
  GridSpec grid_;
  std::size_t n_;
  std::vector<std::array<cplx, 5>> lap_;
  std::map<double, PentaLU> cache_;
  CVec vx_, lapv_, rhs_, star_;
  RVec f0_, f1_;
};

inline bool all_finite(const CVec& v) {
  for (const auto& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

template <class Stepper>
SolverOutcome run(const EvolutionProblem& p, Stepper& stepper) {
  p.validate();
  SolverOutcome out;
  const double guard = p.guard();
  const double order = Stepper::kOrder;
  CVec y = stepper.to_state(p.initial);
  double t = 0.0;
  double dt = p.adaptive ? detail::quantize_step(p.dt0) : p.dt0;
  double last_dt = 0.0;

  auto record = [&](const CVec& state) {
    auto field = stepper.to_field(state);
    out.boundary_leak = std::max(out.boundary_leak, edge_leak(field));
    auto diag = diagnose(field, t, last_dt);
    if (!p.keep_states && out.frames.size() >= 2) {
      auto& prev = out.frames.back().state.values();
      prev.clear();
      prev.shrink_to_fit();
    }
    out.frames.push_back({t, std::move(field), diag});
    if (p.on_frame) p.on_frame(out.frames.back());
  };
  record(y);

  std::size_t since_frame = 0;
  std::size_t next_frame_index = 1;
  auto next_frame_time = [&] { return p.frame_interval * static_cast<double>(next_frame_index); };

  const double t_tol = 1e-12 * std::max(1.0, p.t_end);
  while (t < p.t_end - t_tol) {
    if (out.accepted_steps + out.rejected_steps >= p.max_steps) {
      out.status = SolverStatus::StepFailure;
      out.message = "step budget exhausted";
      break;
    }
    double h = std::min(dt, p.t_end - t);
    bool hits_frame = false;
    if (p.frame_interval > 0.0) {
      const double tf = next_frame_time();
      if (t + h >= tf - t_tol) {
        h = tf - t;
        hits_frame = true;
      }
    }
    const bool hits_end = t + h >= p.t_end - t_tol;
    if (hits_end) h = p.t_end - t;
    const bool clamped = h < dt;
    if (h < kMinStep) {
      out.status = SolverStatus::StepFailure;
      out.message = "dt underflow at t = " + std::to_string(t);
      break;
    }

    CVec next;
    if (p.adaptive) {
      const CVec full = stepper.step(y, h);
      const CVec mid = stepper.step(y, 0.5 * h);
      next = stepper.step(mid, 0.5 * h);
      double err = std::numeric_limits<double>::infinity();
      if (all_finite(full) && all_finite(next)) {
        CVec diff(next.size());
        for (std::size_t j = 0; j < next.size(); ++j) diff[j] = next[j] - full[j];
        err = stepper.norm(diff) / std::max(1.0, stepper.norm(next));
      }
      double factor = err > 0.0 ? 0.9 * std::pow(p.tolerance / err, 1.0 / (order + 1.0)) : 2.0;
      if (!std::isfinite(factor)) factor = 0.25;
      if (!(err <= p.tolerance)) {
        ++out.rejected_steps;
        dt = detail::quantize_step(h * std::clamp(factor, 0.1, 0.9));
        if (dt < kMinStep) {
          out.status = SolverStatus::StepFailure;
          out.message = "dt underflow at t = " + std::to_string(t);
          break;
        }
        continue;
      }
      // A step shortened to land on a frame or on t_end keeps the base dt.
      if (!clamped) dt = detail::quantize_step(h * std::min(2.0, factor));
    } else {
      next = stepper.step(y, h);
      if (!all_finite(next)) {
        out.status = SolverStatus::StepFailure;
        out.message = "non-finite state at t = " + std::to_string(t);
        break;
      }
    }

    y = std::move(next);
    if (hits_end) {
      t = p.t_end;
    } else if (hits_frame) {
      t = next_frame_time();
    } else {
      t += h;
    }
    last_dt = h;
    ++out.accepted_steps;
    ++since_frame;

    const double g = stepper.grad_norm(y);
    const bool at_end = hits_end;
    if (g >= guard) {
      record(y);
      out.status = SolverStatus::BlowupStop;
      out.message = "gradient norm " + std::to_string(g) + " reached guard " + std::to_string(guard);
      break;
    }
    if (hits_frame) {
      record(y);
      ++next_frame_index;
      since_frame = 0;
    } else if (p.frame_interval <= 0.0 && (since_frame >= p.frame_stride || at_end)) {
      record(y);
      since_frame = 0;
    } else if (at_end) {
      record(y);
    }
  }
  out.t_final = t;
  if (!out.frames.back().diagnostics.finite() && out.status == SolverStatus::ReachedTEnd) {
    out.status = SolverStatus::StepFailure;
    out.message = "non-finite diagnostics";
  }
  if (out.boundary_leak > kBoundaryLeakThreshold) {
    out.warnings.push_back("boundary leak: |v| near the artificial boundary reached " +
                           std::to_string(out.boundary_leak));
  }
  return out;
}

}  // namespace detail

inline SolverOutcome evolve_line(const EvolutionProblem& p) {
  if (!p.initial.grid().periodic()) throw Error("evolve_line: periodic grid required");
  detail::LineStepper stepper(p.equation, p.initial.grid());
  return detail::run(p, stepper);
}

inline SolverOutcome evolve_halfline(const EvolutionProblem& p) {
  const auto& g = p.initial.grid();
  if (g.periodic()) throw Error("evolve_halfline: half-line grid required");
  if (std::abs(p.initial[0]) > 0.0) throw Error("evolve_halfline: initial data must vanish at x = 0");
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g.x(j) >= 0.5 * g.half_width() && std::abs(p.initial[j]) > 1e-8) {
      throw Error("evolve_halfline: initial data must decay below 1e-8 before x = L/2");
    }
  }
  detail::HalflineStepper stepper(p.equation, g);
  return detail::run(p, stepper);
}

inline SolverOutcome evolve(const EvolutionProblem& p) {
  return p.initial.grid().periodic() ? evolve_line(p) : evolve_halfline(p);
}

struct ConvergenceReport {
  std::vector<double> dts;
  std::vector<double> differences;  // ‖y(dt_i) - y(dt_{i+1})‖₂
  std::vector<double> orders;
  double order = 0.0;
};

/// Fixed-step runs at dt0, dt0/2, ..., dt0/2^refinements; the observed order
/// comes from successive differences of the final states.
inline ConvergenceReport convergence_study(const EvolutionProblem& p, int refinements) {
  if (refinements < 2) throw Error("convergence_study: need at least 2 refinements");
  ConvergenceReport rep;
  std::vector<ComplexField> finals;
  for (int r = 0; r <= refinements; ++r) {
    EvolutionProblem q = p;
    q.adaptive = false;
    q.dt0 = p.dt0 / std::exp2(r);
    q.frame_stride = std::numeric_limits<std::size_t>::max();
    q.frame_interval = 0.0;
    const auto res = evolve(q);
    if (res.status != SolverStatus::ReachedTEnd) {
      throw Error("convergence_study: run at dt = " + std::to_string(q.dt0) + " ended with " +
                  to_string(res.status));
    }
    rep.dts.push_back(q.dt0);
    finals.push_back(res.last().state);
  }
  for (std::size_t i = 0; i + 1 < finals.size(); ++i) {
    rep.differences.push_back(l2_norm(finals[i] - finals[i + 1]));
  }
  for (std::size_t i = 0; i + 1 < rep.differences.size(); ++i) {
    rep.orders.push_back(std::log2(rep.differences[i] / rep.differences[i + 1]));
  }
  rep.order = rep.orders.back();
  return rep;
}

}  // namespace dnls
