#pragma once

// Spatial substrate: grids, sampled complex fields, spectral and
// finite-difference differentiation, quadrature, and norms.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnls {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

inline constexpr double kPi = std::numbers::pi;

/// Raised on contract violations (bad grids, undefined functionals, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GridKind { PeriodicLine, DirichletHalfLine };

inline std::string to_string(GridKind k) {
  return k == GridKind::PeriodicLine ? "PeriodicLine" : "DirichletHalfLine";
}

/// Discretization of [-L, L) (periodic) or [0, L] (Dirichlet).
class GridSpec {
 public:
  GridSpec(GridKind kind, double half_width, std::size_t n_points)
      : kind_(kind), half_width_(half_width), n_(n_points) {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
      throw Error("GridSpec: half width must be positive and finite");
    }
    if (n_points < 16) throw Error("GridSpec: need at least 16 points");
    if (kind == GridKind::PeriodicLine && (n_points & (n_points - 1)) != 0) {
      throw Error("GridSpec: periodic grids need a power-of-two size");
    }
    dx_ = kind == GridKind::PeriodicLine
              ? 2.0 * half_width / static_cast<double>(n_points)
              : half_width / static_cast<double>(n_points - 1);
  }

  static GridSpec line(double half_width, std::size_t n) {
    return {GridKind::PeriodicLine, half_width, n};
  }
  static GridSpec halfline(double length, std::size_t n) {
    return {GridKind::DirichletHalfLine, length, n};
  }

  GridKind kind() const { return kind_; }
  bool periodic() const { return kind_ == GridKind::PeriodicLine; }
  double half_width() const { return half_width_; }
  std::size_t size() const { return n_; }
  double dx() const { return dx_; }

  double x(std::size_t j) const {
    if (periodic()) return -half_width_ + dx_ * static_cast<double>(j);
    if (j + 1 == n_) return half_width_;
    return dx_ * static_cast<double>(j);
  }

  RVec coordinates() const {
    RVec xs(n_);
    for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
    return xs;
  }

  /// Angular wavenumber of FFT slot j (periodic grids only).
  double wavenumber(std::size_t j) const {
    const double base = kPi / half_width_;
    const auto n = static_cast<std::ptrdiff_t>(n_);
    auto m = static_cast<std::ptrdiff_t>(j);
    if (m > n / 2) m -= n;
    return base * static_cast<double>(m);
  }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.kind_ == b.kind_ && a.half_width_ == b.half_width_ && a.n_ == b.n_;
  }

 private:
  GridKind kind_;
  double half_width_;
  std::size_t n_;
  double dx_;
};

/// Complex samples tied to a grid.
class ComplexField {
 public:
  explicit ComplexField(GridSpec grid) : grid_(grid), values_(grid.size()) {}
  ComplexField(GridSpec grid, CVec values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw Error("ComplexField: sample count does not match grid");
    }
  }

  template <class F>
  static ComplexField sample(const GridSpec& grid, F&& f) {
    ComplexField out(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) out.values_[j] = cplx(f(grid.x(j)));
    return out;
  }

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  const CVec& values() const { return values_; }
  CVec& values() { return values_; }
  std::span<const cplx> span() const { return values_; }
  cplx operator[](std::size_t j) const { return values_[j]; }
  cplx& operator[](std::size_t j) { return values_[j]; }

  ComplexField& operator+=(const ComplexField& o) {
    check_same(o);
    for (std::size_t j = 0; j < size(); ++j) values_[j] += o.values_[j];
    return *this;
  }
  ComplexField& operator-=(const ComplexField& o) {
    check_same(o);
    for (std::size_t j = 0; j < size(); ++j) values_[j] -= o.values_[j];
    return *this;
  }
  ComplexField& operator*=(cplx s) {
    for (auto& v : values_) v *= s;
    return *this;
  }
  friend ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
  friend ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
  friend ComplexField operator*(cplx s, ComplexField a) { return a *= s; }

  RVec modulus_squared() const {
    RVec out(size());
    for (std::size_t j = 0; j < size(); ++j) out[j] = std::norm(values_[j]);
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  void check_same(const ComplexField& o) const {
    if (!(grid_ == o.grid_)) throw Error("ComplexField: grid mismatch");
  }

  GridSpec grid_;
  CVec values_;
};

inline double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

// ---------------------------------------------------------------------------
// FFT plumbing. Plans are cached per size; fftw_execute_dft on plans built
// with FFTW_UNALIGNED is reentrant, planning itself is serialized.

namespace detail {

struct FftPlans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~FftPlans() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

inline const FftPlans& plans_for(std::size_t n) {
  static std::map<std::size_t, std::unique_ptr<FftPlans>> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  auto p = std::make_unique<FftPlans>();
  auto* buf = fftw_alloc_complex(n);
  auto* out = fftw_alloc_complex(n);
  const int ni = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p->forward = fftw_plan_dft_1d(ni, buf, out, FFTW_FORWARD, flags);
  p->backward = fftw_plan_dft_1d(ni, buf, out, FFTW_BACKWARD, flags);
  fftw_free(buf);
  fftw_free(out);
  auto& ref = *p;
  cache.emplace(n, std::move(p));
  return ref;
}

inline fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
inline fftw_complex* as_fftw(const cplx* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p));
}

}  // namespace detail

/// Unnormalized forward DFT.
inline void fft(std::span<const cplx> in, std::span<cplx> out) {
  const auto& p = detail::plans_for(in.size());
  fftw_execute_dft(p.forward, detail::as_fftw(in.data()), detail::as_fftw(out.data()));
}

/// Inverse DFT including the 1/n factor.
inline void ifft(std::span<const cplx> in, std::span<cplx> out) {
  const auto& p = detail::plans_for(in.size());
  fftw_execute_dft(p.backward, detail::as_fftw(in.data()), detail::as_fftw(out.data()));
  const double s = 1.0 / static_cast<double>(in.size());
  for (auto& v : out) v *= s;
}

inline CVec fft(std::span<const cplx> in) {
  CVec out(in.size());
  fft(in, out);
  return out;
}
inline CVec ifft(std::span<const cplx> in) {
  CVec out(in.size());
  ifft(in, out);
  return out;
}

/// 2/3-rule mask: keeps |m| < n/3.
inline std::vector<double> dealias_mask(const GridSpec& g) {
  std::vector<double> mask(g.size(), 0.0);
  const auto n = static_cast<std::ptrdiff_t>(g.size());
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const auto m = j > n / 2 ? j - n : j;
    if (3 * std::abs(m) < n) mask[static_cast<std::size_t>(j)] = 1.0;
  }
  return mask;
}

/// Projects a periodic field onto the dealiased band.
inline ComplexField dealias(const ComplexField& f) {
  if (!f.grid().periodic()) return f;
  auto hat = fft(f.span());
  const auto mask = dealias_mask(f.grid());
  for (std::size_t j = 0; j < hat.size(); ++j) hat[j] *= mask[j];
  return {f.grid(), ifft(hat)};
}

// ---------------------------------------------------------------------------
// Differentiation.

namespace detail {

inline void spectral_derivative(const GridSpec& g, std::span<const cplx> f, std::span<cplx> out,
                                int order) {
  const std::size_t n = g.size();
  CVec hat(n);
  fft(f, hat);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == n / 2 && order % 2 == 1) {
      hat[j] = 0.0;
      continue;
    }
    const cplx ik(0.0, g.wavenumber(j));
    cplx m = 1.0;
    for (int o = 0; o < order; ++o) m *= ik;
    hat[j] *= m;
  }
  ifft(hat, out);
}

// Fourth-order centered stencil with one-sided closures at both ends.
inline void fd_derivative(const GridSpec& g, std::span<const cplx> f, std::span<cplx> out) {
  const std::size_t n = g.size();
  const double s = 1.0 / (12.0 * g.dx());
  out[0] = s * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
  out[1] = s * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
  for (std::size_t j = 2; j + 2 < n; ++j) {
    out[j] = s * (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]);
  }
  out[n - 2] = -s * (-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] - 6.0 * f[n - 4] + f[n - 5]);
  out[n - 1] =
      -s * (-25.0 * f[n - 1] + 48.0 * f[n - 2] - 36.0 * f[n - 3] + 16.0 * f[n - 4] - 3.0 * f[n - 5]);
}

}  // namespace detail

/// d/dx: Fourier multiplier on the periodic line, fourth-order differences on
/// the half-line.
inline ComplexField derivative(const ComplexField& f) {
  ComplexField out(f.grid());
  if (f.grid().periodic()) {
    detail::spectral_derivative(f.grid(), f.span(), out.values(), 1);
  } else {
    detail::fd_derivative(f.grid(), f.span(), out.values());
  }
  return out;
}

/// d²/dx². Spectral on the line; fourth-order centered on the half-line with
/// second-order one-sided rows at the two end points.
inline ComplexField second_derivative(const ComplexField& f) {
  ComplexField out(f.grid());
  const auto& g = f.grid();
  if (g.periodic()) {
    detail::spectral_derivative(g, f.span(), out.values(), 2);
    return out;
  }
  const std::size_t n = g.size();
  const double s = 1.0 / (12.0 * g.dx() * g.dx());
  const auto& v = f.values();
  for (std::size_t j = 2; j + 2 < n; ++j) {
    out[j] = s * (-v[j - 2] + 16.0 * v[j - 1] - 30.0 * v[j] + 16.0 * v[j + 1] - v[j + 2]);
  }
  const double h2 = 1.0 / (g.dx() * g.dx());
  out[1] = h2 * (v[0] - 2.0 * v[1] + v[2]);
  out[n - 2] = h2 * (v[n - 3] - 2.0 * v[n - 2] + v[n - 1]);
  out[0] = h2 * (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]);
  out[n - 1] = h2 * (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]);
  return out;
}

// ---------------------------------------------------------------------------
// Quadrature.

namespace detail {

template <class T>
T simpson(std::span<const T> f, double h) {
  const std::size_t n = f.size();
  const std::size_t intervals = n - 1;
  T acc{};
  std::size_t simpson_end = intervals;
  if (intervals % 2 == 1) simpson_end = intervals - 3;  // 3/8 rule on the tail
  for (std::size_t j = 0; j + 2 <= simpson_end; j += 2) {
    acc += (h / 3.0) * (f[j] + 4.0 * f[j + 1] + f[j + 2]);
  }
  if (simpson_end != intervals) {
    const std::size_t j = simpson_end;
    acc += (3.0 * h / 8.0) * (f[j] + 3.0 * f[j + 1] + 3.0 * f[j + 2] + f[j + 3]);
  }
  return acc;
}

template <class T>
T rectangle(std::span<const T> f, double h) {
  T acc{};
  for (const auto& v : f) acc += v;
  return acc * h;
}

}  // namespace detail

/// Integral over the grid: rectangle rule on the line, composite Simpson on
/// the half-line.
inline double quadrature(const GridSpec& g, std::span<const double> f) {
  return g.periodic() ? detail::rectangle(f, g.dx()) : detail::simpson(f, g.dx());
}
inline cplx quadrature(const GridSpec& g, std::span<const cplx> f) {
  return g.periodic() ? detail::rectangle(f, g.dx()) : detail::simpson(f, g.dx());
}
inline cplx quadrature(const ComplexField& f) { return quadrature(f.grid(), f.span()); }

/// Running integral C(x_j) = ∫ f from the left end of the grid to x_j.
///
/// Line: spectral antiderivative of the periodic part plus the mean times
/// (x + L); C at x = L would equal the rectangle-rule total.
/// Half-line: Simpson partial sums at even nodes, a three-point quadratic
/// panel for odd nodes.
inline RVec cumulative_integral(const GridSpec& g, std::span<const double> f) {
  const std::size_t n = g.size();
  RVec out(n, 0.0);
  if (g.periodic()) {
    CVec data(f.begin(), f.end());
    auto hat = fft(data);
    const cplx mean = hat[0] / static_cast<double>(n);
    hat[0] = 0.0;
    hat[n / 2] = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
      if (j == n / 2) continue;
      hat[j] /= cplx(0.0, g.wavenumber(j));
    }
    const auto periodic_part = ifft(hat);
    const double p0 = periodic_part[0].real();
    for (std::size_t j = 0; j < n; ++j) {
      out[j] = mean.real() * (g.x(j) + g.half_width()) + periodic_part[j].real() - p0;
    }
    return out;
  }
  const double h = g.dx();
  for (std::size_t j = 2; j < n; j += 2) {
    out[j] = out[j - 2] + (h / 3.0) * (f[j - 2] + 4.0 * f[j - 1] + f[j]);
  }
  for (std::size_t j = 1; j < n; j += 2) {
    if (j + 1 < n) {
      out[j] = out[j - 1] + (h / 12.0) * (5.0 * f[j - 1] + 8.0 * f[j] - f[j + 1]);
    } else {
      out[j] = out[j - 1] + (h / 12.0) * (-f[j - 2] + 8.0 * f[j - 1] + 5.0 * f[j]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Norms.

inline double lp_norm_pow(const ComplexField& f, int p) {
  RVec w(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) w[j] = std::pow(std::abs(f[j]), p);
  return quadrature(f.grid(), w);
}

inline double l2_norm_squared(const ComplexField& f) {
  return quadrature(f.grid(), f.modulus_squared());
}

inline double l2_norm(const ComplexField& f) { return std::sqrt(l2_norm_squared(f)); }

inline double gradient_norm(const ComplexField& f) { return l2_norm(derivative(f)); }

/// √(‖f‖₂² + ‖∂ₓf‖₂²).
inline double sobolev_h1_norm(const ComplexField& f) {
  return std::sqrt(l2_norm_squared(f) + l2_norm_squared(derivative(f)));
}

/// Evaluates the trigonometric interpolant of a periodic field at arbitrary
/// points; points outside [-L, L) yield zero.
inline CVec band_limited_eval(const ComplexField& f, std::span<const double> points) {
  const auto& g = f.grid();
  if (!g.periodic()) throw Error("band_limited_eval: periodic grids only");
  const std::size_t n = g.size();
  const auto hat = fft(f.span());
  const double L = g.half_width();
  const double base = kPi / L;
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  CVec out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double y = points[p];
    if (y < -L || y >= L) {
      out[p] = 0.0;
      continue;
    }
    const double theta = base * (y + L);
    const cplx step = std::polar(1.0, theta);
    // Positive and negative modes accumulated separately; Nyquist split evenly.
    cplx acc = hat[0];
    cplx rot = 1.0;
    for (std::ptrdiff_t m = 1; m < half; ++m) {
      rot *= step;
      acc += hat[static_cast<std::size_t>(m)] * rot +
             hat[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(n) - m)] * std::conj(rot);
    }
    acc += hat[n / 2] * std::cos(theta * static_cast<double>(half));
    out[p] = acc / static_cast<double>(n);
  }
  return out;
}

}  // namespace dnls
