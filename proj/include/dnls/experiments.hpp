#pragma once

// Scripted scenarios. Each runner returns a Verdict; passed is true iff every
// check holds. Runners are pure: files are written by the io layer.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dnls/diagnostics.hpp"
#include "dnls/evolve.hpp"
#include "dnls/fixtures.hpp"
#include "dnls/gauge.hpp"
#include "dnls/ground_state.hpp"
#include "dnls/grid.hpp"
#include "dnls/modulation.hpp"

namespace dnls {

/// Bad experiment configuration (unknown parameter, out-of-range value).
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class ExperimentName { StandingWave, MassThreshold, HalflineBlowup, Nls5Variance, VirialValidation, GaugeValidation };

inline constexpr std::array<ExperimentName, 6> kAllExperiments = {
    ExperimentName::StandingWave,     ExperimentName::MassThreshold,    ExperimentName::HalflineBlowup,
    ExperimentName::Nls5Variance,     ExperimentName::VirialValidation, ExperimentName::GaugeValidation};

inline std::string to_string(ExperimentName e) {
  switch (e) {
    case ExperimentName::StandingWave:
      return "standing-wave";
    case ExperimentName::MassThreshold:
      return "mass-threshold";
    case ExperimentName::HalflineBlowup:
      return "halfline-blowup";
    case ExperimentName::Nls5Variance:
      return "nls5-variance";
    case ExperimentName::VirialValidation:
      return "virial-validation";
    case ExperimentName::GaugeValidation:
      return "gauge-validation";
  }
  return "?";
}

inline std::optional<ExperimentName> experiment_from_string(std::string_view s) {
  for (auto e : kAllExperiments) {
    if (to_string(e) == s) return e;
  }
  return std::nullopt;
}

struct ExperimentConfig {
  ExperimentName name = ExperimentName::StandingWave;
  std::map<std::string, double> parameters;
  std::uint64_t seed = 0;
  std::string output_dir;
};

enum class Sense { AtMost, AtLeast };

inline std::string to_string(Sense s) { return s == Sense::AtMost ? "<=" : ">="; }

struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  Sense sense = Sense::AtMost;

  bool ok() const { return sense == Sense::AtMost ? value <= bound : value >= bound; }
};

struct Verdict {
  std::string experiment;
  bool passed = false;
  /// Resolved parameters, defaults included.
  std::map<std::string, double> parameters;
  std::map<std::string, double> metrics;
  std::map<std::string, double> tolerances;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  bool solver_failure = false;
  /// Per-run diagnostics, keyed by run label.
  std::map<std::string, std::vector<DiagnosticsRecord>> series;

  void metric(const std::string& name, double value) { metrics[name] = value; }

  void check(const std::string& name, double value, double bound, Sense sense) {
    metrics[name] = value;
    tolerances[name] = bound;
    checks.push_back({name, value, bound, sense});
  }

  void note(std::string s) { notes.push_back(std::move(s)); }

  void finalize() {
    passed = !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok(); });
  }

  std::string notes_text() const {
    std::string out;
    for (const auto& n : notes) {
      if (!out.empty()) out += '\n';
      out += n;
    }
    return out;
  }
};

namespace detail {

class Params {
 public:
  Params(const ExperimentConfig& cfg, std::map<std::string, double> defaults) : values_(std::move(defaults)) {
    for (const auto& [k, v] : cfg.parameters) {
      auto it = values_.find(k);
      if (it == values_.end()) {
        throw ConfigError(to_string(cfg.name) + ": unknown parameter '" + k + "'");
      }
      if (!std::isfinite(v)) throw ConfigError(to_string(cfg.name) + ": parameter '" + k + "' is not finite");
      it->second = v;
    }
  }

  double operator[](const std::string& k) const { return values_.at(k); }

  std::size_t count(const std::string& k) const {
    const double v = values_.at(k);
    if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError("parameter '" + k + "' must be a positive integer");
    return static_cast<std::size_t>(v);
  }

  double positive(const std::string& k) const {
    const double v = values_.at(k);
    if (!(v > 0.0)) throw ConfigError("parameter '" + k + "' must be positive");
    return v;
  }

  const std::map<std::string, double>& all() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

inline std::vector<DiagnosticsRecord> records(const SolverOutcome& r) {
  std::vector<DiagnosticsRecord> out;
  out.reserve(r.frames.size());
  for (const auto& f : r.frames) out.push_back(f.diagnostics);
  return out;
}

struct Drifts {
  double mass = 0.0;
  double energy = 0.0;
  double momentum = 0.0;
};

inline Drifts drifts(const std::vector<DiagnosticsRecord>& s) {
  Drifts d;
  const auto& a = s.front();
  for (const auto& r : s) {
    d.mass = std::max(d.mass, std::abs(r.mass - a.mass) / a.mass);
    d.energy = std::max(d.energy, std::abs(r.energy_E - a.energy_E) / std::max(1.0, std::abs(a.energy_E)));
    d.momentum = std::max(d.momentum, std::abs(r.momentum_P - a.momentum_P) / std::max(1.0, std::abs(a.momentum_P)));
  }
  return d;
}

// Records solver trouble on the verdict; returns true when the run ended in
// StepFailure.
inline bool note_outcome(Verdict& v, const std::string& label, const SolverOutcome& r) {
  for (const auto& w : r.warnings) v.note(label + ": " + w);
  v.metric(label + ".t_final", r.t_final);
  v.metric(label + ".accepted_steps", static_cast<double>(r.accepted_steps));
  v.metric(label + ".rejected_steps", static_cast<double>(r.rejected_steps));
  if (r.status == SolverStatus::StepFailure) {
    v.solver_failure = true;
    v.note(label + ": solver failure: " + r.message);
    return true;
  }
  return false;
}

inline double rms(const std::vector<double>& x) {
  double s = 0.0;
  for (double a : x) s += a * a;
  return x.empty() ? 0.0 : std::sqrt(s / static_cast<double>(x.size()));
}

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline Verdict run_standing_wave(const ExperimentConfig& cfg) {
  const detail::Params p(cfg, {{"L", 30.0},
                               {"n", 1024.0},
                               {"t_end", 1.0},
                               {"tolerance", 1e-9},
                               {"frame_interval", 0.05},
                               {"orbit_tolerance", 0.0},
                               {"mass_tolerance", 1e-10},
                               {"conservation_tolerance", 1e-6}});
  Verdict v;
  v.experiment = to_string(cfg.name);
  v.parameters = p.all();
  const double t_end = p.positive("t_end");
  // Orbit error grows with time; 1e-3 beyond t = 1.
  const double orbit_tol = p["orbit_tolerance"] > 0.0 ? p["orbit_tolerance"] : (t_end <= 1.0 ? 1e-4 : 1e-3);
  v.parameters["orbit_tolerance"] = orbit_tol;
  const auto g = GridSpec::line(p.positive("L"), p.count("n"));
  const auto q = ground_state(g).q;
  const auto exact = standing_wave(t_end, g);

  for (auto eq : {Equation::DNLSGauged, Equation::NLS5}) {
    const std::string label = to_string(eq);
    EvolutionProblem prob(q);
    prob.equation = eq;
    prob.t_end = t_end;
    prob.tolerance = p.positive("tolerance");
    prob.frame_interval = std::min(p.positive("frame_interval"), t_end);
    prob.keep_states = false;
    const auto r = evolve(prob);
    v.series[label] = detail::records(r);
    const bool failed = detail::note_outcome(v, label, r);
    const bool done = r.status == SolverStatus::ReachedTEnd;
    v.check(label + ".reached_t_end", done ? 1.0 : 0.0, 1.0, Sense::AtLeast);
    const double err = (done && !failed) ? l2_norm(r.last().state - exact) / l2_norm(q)
                                         : std::numeric_limits<double>::infinity();
    v.check(label + ".orbit_error", err, orbit_tol, Sense::AtMost);
    const auto d = detail::drifts(v.series[label]);
    v.check(label + ".mass_drift", d.mass, p["mass_tolerance"], Sense::AtMost);
    v.check(label + ".energy_drift", d.energy, p["conservation_tolerance"], Sense::AtMost);
    v.check(label + ".momentum_drift", d.momentum, p["conservation_tolerance"], Sense::AtMost);
  }
  v.finalize();
  return v;
}

// ---------------------------------------------------------------------------

struct MassThresholdData {
  ComplexField v0;
  double scale = 1.0;
  double bump_amplitude = 0.0;
};

/// v₀ = c(Q + a·bump) with mass 2π + δ. c is fixed by the mass; a is halved
/// until E(v₀) < 0. δ = 0 gives Q itself.
inline MassThresholdData mass_threshold_data(const GridSpec& g, double delta, double a, double center,
                                             double radius, double k) {
  if (!(delta >= 0.0) || delta > 0.05 * ground::kMass) {
    throw ConfigError("mass-threshold: delta must lie in [0, 0.05*2pi]");
  }
  const auto q = ground_state(g).q;
  if (delta == 0.0) return {q, 1.0, 0.0};
  const auto bump = fixtures::bump_field(g, 1.0, center, radius, k);
  for (int it = 0; it < 60; ++it) {
    ComplexField base = q;
    for (std::size_t j = 0; j < g.size(); ++j) base[j] += a * bump[j];
    const double c = std::sqrt((ground::kMass + delta) / mass(base));
    base *= c;
    if (energy_E(base) < 0.0) return {std::move(base), c, a};
    a *= 0.5;
  }
  throw Error("mass-threshold: could not reach negative energy");
}

inline Verdict run_mass_threshold(const ExperimentConfig& cfg) {
  const detail::Params p(cfg, {{"delta", 0.01 * ground::kMass},
                               {"L", 30.0},
                               {"n", 1024.0},
                               {"t_end", 20.0},
                               {"tolerance", 1e-9},
                               {"frame_interval", 0.05},
                               {"bump_amplitude", 0.05},
                               {"bump_center", 1.0},
                               {"bump_radius", 2.0},
                               {"bump_k", 0.0},
                               {"guard_factor", 3.0},
                               {"bound_margin", 0.1},
                               {"control", 1.0}});
  Verdict v;
  v.experiment = to_string(cfg.name);
  v.parameters = p.all();
  const auto g = GridSpec::line(p.positive("L"), p.count("n"));
  const double delta = p["delta"];
  const auto data =
      mass_threshold_data(g, delta, p["bump_amplitude"], p["bump_center"], p.positive("bump_radius"), p["bump_k"]);
  const auto& v0 = data.v0;
  const double E0 = energy_E(v0);
  const double P0 = momentum_P(v0);
  const double g0 = gradient_norm(v0);
  const double bound = P0 * std::sqrt(kPi) / 2.0;
  const double guard = p.positive("guard_factor") * g0;
  v.metric("mass0", mass(v0));
  v.metric("energy0", E0);
  v.metric("momentum0", P0);
  v.metric("grad0", g0);
  v.metric("scale_c", data.scale);
  v.metric("bump_amplitude_used", data.bump_amplitude);
  v.metric("momentum_bound", bound);
  v.metric("guard", guard);
  if (delta > 0.0) v.check("energy0_negative", E0 < 0.0 ? 1.0 : 0.0, 1.0, Sense::AtLeast);
  if (delta > 0.0 && data.bump_amplitude != p["bump_amplitude"]) {
    v.note("bump amplitude halved to " + std::to_string(data.bump_amplitude) + " to reach E < 0");
  }

  // DNLS run; the frame with the largest gradient is kept for a modulation fit.
  EvolutionProblem prob(v0);
  prob.t_end = p.positive("t_end");
  prob.tolerance = p.positive("tolerance");
  prob.frame_interval = p.positive("frame_interval");
  prob.stop_grad_norm = guard;
  prob.keep_states = false;
  double sup = 0.0;
  ComplexField peak = v0;
  prob.on_frame = [&](const TrajectoryFrame& f) {
    if (f.diagnostics.grad_norm > sup) {
      sup = f.diagnostics.grad_norm;
      peak = f.state;
    }
  };
  const auto r = evolve(prob);
  v.series["dnls"] = detail::records(r);
  detail::note_outcome(v, "dnls", r);
  v.check("dnls.no_blowup_stop", r.status == SolverStatus::ReachedTEnd ? 1.0 : 0.0, 1.0, Sense::AtLeast);
  v.check("dnls.sup_grad_over_bound", sup / bound, 1.0 + p["bound_margin"], Sense::AtMost);
  v.metric("dnls.sup_grad", sup);
  const auto d = detail::drifts(v.series["dnls"]);
  v.metric("dnls.mass_drift", d.mass);
  v.metric("dnls.energy_drift", d.energy);
  v.metric("dnls.momentum_drift", d.momentum);
  const auto fit = modulation_fit(peak);
  const auto rep = momentum_obstruction(peak, fit);
  v.metric("dnls.peak.lambda", fit.lambda);
  v.metric("dnls.peak.residual_h1", fit.residual_h1);
  v.metric("dnls.peak.lambda_times_P", rep.lambda_times_P);
  v.metric("dnls.peak.rescaled_energy", rep.rescaled_energy);

  // δ = 0 is the standing wave itself (E = 0 up to rounding): no control.
  if (p["control"] != 0.0 && delta == 0.0) v.note("nls5 control skipped: delta = 0 is the standing wave");
  if (p["control"] != 0.0 && delta > 0.0) {
    EvolutionProblem ctl(v0);
    ctl.equation = Equation::NLS5;
    ctl.t_end = prob.t_end;
    ctl.tolerance = prob.tolerance;
    ctl.frame_interval = prob.frame_interval;
    ctl.stop_grad_norm = guard;
    ctl.keep_states = false;
    const auto c = evolve(ctl);
    v.series["nls5"] = detail::records(c);
    detail::note_outcome(v, "nls5", c);
    v.check("nls5.tripped_guard", c.status == SolverStatus::BlowupStop ? 1.0 : 0.0, 1.0, Sense::AtLeast);
  }
  v.finalize();
  return v;
}

// ---------------------------------------------------------------------------

inline Verdict run_halfline_blowup(const ExperimentConfig& cfg) {
  const detail::Params p(cfg, {{"L", 10.0},
                               {"n", 16001.0},
                               {"energy", -1.0},
                               {"k", 0.0},
                               {"tolerance", 1e-6},
                               {"guard_dx", 0.04},
                               {"t_end_factor", 2.0},
                               {"frame_stride", 1.0},
                               {"bound_tolerance", 1e-6},
                               {"cs_tolerance", 1e-8},
                               {"stop_factor", 1.1},
                               {"fit_decade", 10.0}});
  Verdict v;
  v.experiment = to_string(cfg.name);
  v.parameters = p.all();
  const auto g = GridSpec::halfline(p.positive("L"), p.count("n"));

  std::optional<fixtures::BlowupData> built;
  BlowupCertificate cert;
  try {
    built = fixtures::halfline_blowup_data(g, p["energy"], p["k"]);
    cert = blowup_certificate(built->u0);
  } catch (const Error& e) {
    v.note(std::string("precondition failed, certificate refused: ") + e.what());
    v.check("precondition", 0.0, 1.0, Sense::AtLeast);
    v.finalize();
    return v;
  }
  const auto& data = *built;
  v.metric("amplitude", data.amplitude);
  v.metric("cert.a2", cert.a2);
  v.metric("cert.a1", cert.a1);
  v.metric("cert.a0", cert.a0);
  v.metric("cert.t_star_bound", cert.t_star_bound);
  v.metric("cert.mass0", cert.mass0);

  EvolutionProblem prob(data.v0);
  prob.t_end = p.positive("t_end_factor") * cert.t_star_bound;
  prob.tolerance = p.positive("tolerance");
  prob.stop_grad_norm = p.positive("guard_dx") / g.dx();
  prob.frame_stride = p.count("frame_stride");
  prob.keep_states = false;
  v.metric("guard", prob.stop_grad_norm);
  const auto r = evolve(prob);
  auto& s = v.series["halfline"] = detail::records(r);
  if (detail::note_outcome(v, "halfline", r)) v.check("solver_ok", 0.0, 1.0, Sense::AtLeast);

  double excess = -std::numeric_limits<double>::infinity();
  double slack = std::numeric_limits<double>::infinity();
  for (const auto& f : s) {
    excess = std::max(excess, (f.virial_I - cert.bound(f.t)) / (1.0 + std::abs(f.virial_I)));
    slack = std::min(slack, 2.0 * std::sqrt(f.virial_I) * f.grad_norm - cert.mass0);
  }
  v.check("quadratic_bound_excess", excess, p["bound_tolerance"], Sense::AtMost);
  v.check("cauchy_schwarz_slack", slack, -p["cs_tolerance"], Sense::AtLeast);
  const bool stopped = r.status == SolverStatus::BlowupStop;
  v.check("blowup_stop", stopped ? 1.0 : 0.0, 1.0, Sense::AtLeast);
  v.check("t_stop_over_t_star", r.t_final / cert.t_star_bound, p["stop_factor"], Sense::AtMost);
  v.metric("t_stop", r.t_final);
  v.metric("final_virial_I", s.back().virial_I);
  v.metric("boundary_leak", r.boundary_leak);

  // ‖vₓ‖ ≥ C/√(T - t) over the last decade of gradient growth: a line fit
  // of ‖vₓ‖⁻² = (T - t)/C² gives C and T.
  std::vector<double> ts, ys;
  const double g_last = s.back().grad_norm;
  for (const auto& f : s) {
    if (f.grad_norm >= g_last / p.positive("fit_decade")) {
      ts.push_back(f.t);
      ys.push_back(1.0 / (f.grad_norm * f.grad_norm));
    }
  }
  v.metric("rate.frames", static_cast<double>(ts.size()));
  double c_fit = 0.0, c_min = 0.0, t_est = 0.0;
  if (ts.size() >= 3) {
    const auto fit = detail::least_squares(ts, ys);
    v.metric("rate.r2", fit.r2);
    if (fit.slope < 0.0) {
      c_fit = 1.0 / std::sqrt(-fit.slope);
      t_est = -fit.intercept / fit.slope;
      c_min = std::numeric_limits<double>::infinity();
      for (const auto& f : s) {
        if (f.grad_norm >= g_last / p["fit_decade"]) {
          const double gap = t_est - f.t;
          c_min = gap > 0.0 ? std::min(c_min, f.grad_norm * std::sqrt(gap)) : 0.0;
        }
      }
    }
  } else {
    v.note("rate fit: fewer than 3 frames in the last decade");
  }
  v.metric("rate.C_fit", c_fit);
  v.metric("rate.t_est", t_est);
  v.check("rate.C_positive", c_fit > 0.0 && c_min > 0.0 ? 1.0 : 0.0, 1.0, Sense::AtLeast);
  v.metric("rate.C_min", c_min);
  v.finalize();
  return v;
}

// ---------------------------------------------------------------------------

inline Verdict run_nls5_variance(const ExperimentConfig& cfg) {
  const detail::Params p(cfg, {{"L", 30.0},
                               {"n", 1024.0},
                               {"amplitude", 2.4},
                               {"t_end", 0.2},
                               {"frame_interval", 0.01},
                               {"tolerance", 1e-11},
                               {"nls5_tolerance", 0.02},
                               {"separation", 5.0},
                               {"match_tolerance", 0.05}});
  Verdict v;
  v.experiment = to_string(cfg.name);
  v.parameters = p.all();
  const auto g = GridSpec::line(p.positive("L"), p.count("n"));
  const auto u0 = fixtures::gaussian(g, p["amplitude"]);
  const double E = energy_E(u0);
  v.metric("energy0", E);
  v.check("energy0_negative", E < 0.0 ? 1.0 : 0.0, 1.0, Sense::AtLeast);
  if (!(E < 0.0)) {
    v.note("precondition failed: the Gaussian has nonnegative energy");
    v.finalize();
    return v;
  }
  const double h = p.positive("frame_interval");

  struct Run {
    std::vector<double> I, S;
    bool ok = false;
  };
  auto run = [&](Equation eq) {
    Run out;
    EvolutionProblem prob(u0);
    prob.equation = eq;
    prob.t_end = p.positive("t_end");
    prob.tolerance = p.positive("tolerance");
    prob.frame_interval = h;
    prob.keep_states = false;
    prob.on_frame = [&](const TrajectoryFrame& f) {
      out.I.push_back(f.diagnostics.virial_I);
      out.S.push_back(surplus_term(f.state));
    };
    const auto r = evolve(prob);
    const std::string label = to_string(eq);
    v.series[label] = detail::records(r);
    const bool failed = detail::note_outcome(v, label, r);
    out.ok = !failed && r.status == SolverStatus::ReachedTEnd;
    v.check(label + ".reached_t_end", out.ok ? 1.0 : 0.0, 1.0, Sense::AtLeast);
    return out;
  };
  const auto nls = run(Equation::NLS5);
  const auto dnls = run(Equation::DNLSGauged);
  if (!nls.ok || !dnls.ok || nls.I.size() < 3 || dnls.I.size() != nls.I.size()) {
    v.finalize();
    return v;
  }

  // Second differences of I against 8E; for DNLS the defect against -dS/dt,
  // S = ∫x|v|⁴.
  std::vector<double> dev, viol, mismatch;
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < nls.I.size(); ++k) {
    const double d2n = (nls.I[k + 1] - 2.0 * nls.I[k] + nls.I[k - 1]) / (h * h);
    const double d2d = (dnls.I[k + 1] - 2.0 * dnls.I[k] + dnls.I[k - 1]) / (h * h);
    const double dS = (dnls.S[k + 1] - dnls.S[k - 1]) / (2.0 * h);
    dev.push_back(d2n - 8.0 * E);
    viol.push_back(d2d - 8.0 * E);
    mismatch.push_back(d2d - 8.0 * E + dS);
    worst = std::max(worst, std::abs(d2n - 8.0 * E) / std::abs(8.0 * E));
  }
  v.check("nls5.max_relative_deviation", worst, p["nls5_tolerance"], Sense::AtMost);
  const double rdev = detail::rms(dev), rviol = detail::rms(viol);
  v.metric("nls5.rms_deviation", rdev);
  v.metric("dnls.rms_violation", rviol);
  v.check("dnls.violation_over_nls5_deviation", rdev > 0.0 ? rviol / rdev : std::numeric_limits<double>::infinity(),
          p["separation"], Sense::AtLeast);
  v.check("dnls.surplus_mismatch", rviol > 0.0 ? detail::rms(mismatch) / rviol : 1.0, p["match_tolerance"],
          Sense::AtMost);
  v.finalize();
  return v;
}

// ---------------------------------------------------------------------------

inline Verdict run_virial_validation(const ExperimentConfig& cfg) {
  const detail::Params p(cfg, {{"L", 30.0},
                               {"n", 1024.0},
                               {"t_center", 0.5},
                               {"h", 0.08},
                               {"levels", 3.0},
                               {"tolerance", 1e-12},
                               {"order_tolerance", 0.2}});
  Verdict v;
  v.experiment = to_string(cfg.name);
  v.parameters = p.all();
  const auto g = GridSpec::line(p.positive("L"), p.count("n"));
  std::mt19937_64 rng(cfg.seed);
  const auto v0 = fixtures::random_smooth_field(g, rng);
  const std::size_t levels = p.count("levels");
  if (levels < 3) throw ConfigError("virial-validation: levels must be >= 3");
  const double h = p.positive("h");
  const double tc = p.positive("t_center");
  if (!(tc > h)) throw ConfigError("virial-validation: t_center must exceed h");
  const double fine = h / std::exp2(static_cast<double>(levels - 1));
  const auto steps_to_center = static_cast<std::size_t>(std::llround(tc / fine));
  if (std::abs(steps_to_center * fine - tc) > 1e-12 * tc) {
    throw ConfigError("virial-validation: t_center must be a multiple of h/2^(levels-1)");
  }

  const auto wx = VirialWeight::x(g);
  const auto wx2 = VirialWeight::x_squared(g);
  struct Series {
    std::string name;
    std::vector<double> q;
    double rate = 0.0;
  };
  std::array<Series, 4> s{Series{"I_x", {}, 0.0}, Series{"I_x2", {}, 0.0}, Series{"J_x", {}, 0.0},
                          Series{"J_x2", {}, 0.0}};
  std::size_t frame = 0;
  EvolutionProblem prob(v0);
  prob.t_end = tc + h;
  prob.tolerance = p.positive("tolerance");
  prob.frame_interval = fine;
  prob.keep_states = false;
  prob.on_frame = [&](const TrajectoryFrame& f) {
    const auto vx = derivative(f.state);
    s[0].q.push_back(virial_I(f.state, wx));
    s[1].q.push_back(virial_I(f.state, wx2));
    s[2].q.push_back(virial_J(f.state, vx, wx));
    s[3].q.push_back(virial_J(f.state, vx, wx2));
    if (frame == steps_to_center) {
      s[0].rate = virial_I_rate(f.state, vx, wx);
      s[1].rate = virial_I_rate(f.state, vx, wx2);
      s[2].rate = virial_J_rate(f.state, vx, wx);
      s[3].rate = virial_J_rate(f.state, vx, wx2);
    }
    ++frame;
  };
  const auto r = evolve(prob);
  v.series["dnls"] = detail::records(r);
  const bool failed = detail::note_outcome(v, "dnls", r);
  const bool ok = !failed && r.status == SolverStatus::ReachedTEnd && frame > steps_to_center;
  v.check("reached_t_end", ok ? 1.0 : 0.0, 1.0, Sense::AtLeast);
  if (!ok) {
    v.finalize();
    return v;
  }
  for (const auto& ser : s) {
    std::vector<double> errs;
    for (std::size_t l = 0; l < levels; ++l) {
      const std::size_t m = std::size_t{1} << (levels - 1 - l);
      const double dt = fine * static_cast<double>(m);
      const double fd = (ser.q[steps_to_center + m] - ser.q[steps_to_center - m]) / (2.0 * dt);
      errs.push_back(std::abs(fd - ser.rate));
      v.metric(ser.name + ".error_h" + std::to_string(l), errs.back());
    }
    v.metric(ser.name + ".rate", ser.rate);
    for (std::size_t l = 0; l + 1 < levels; ++l) {
      const double order = std::log2(errs[l] / errs[l + 1]);
      v.metric(ser.name + ".order_" + std::to_string(l), order);
      v.check(ser.name + ".order_deviation_" + std::to_string(l), std::abs(order - 2.0), p["order_tolerance"],
              Sense::AtMost);
    }
  }
  v.finalize();
  return v;
}

// ---------------------------------------------------------------------------

inline Verdict run_gauge_validation(const ExperimentConfig& cfg) {
  const detail::Params p(cfg, {{"L", 30.0},
                               {"n", 1024.0},
                               {"samples", 50.0},
                               {"algebra_tolerance", 1e-12},
                               {"energy_tolerance", 1e-8}});
  Verdict v;
  v.experiment = to_string(cfg.name);
  v.parameters = p.all();
  const auto g = GridSpec::line(p.positive("L"), p.count("n"));
  std::mt19937_64 rng(cfg.seed);
  const std::array<double, 6> as = {-1.0, -0.75, -0.5, 0.25, 0.5, 0.75};
  const std::array<double, 4> energy_as = {-1.0, -0.75, -0.5, 0.0};
  auto max_diff = [](const ComplexField& a, const ComplexField& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
  };
  double inverse = 0.0, compose = 0.0, spread = 0.0, mass_err = 0.0;
  for (std::size_t i = 0; i < p.count("samples"); ++i) {
    const auto f = fixtures::random_smooth_field(g, rng);
    const double m0 = mass(f);
    for (double a : as) {
      const GaugeParameter ga(a);
      const auto t = gauge_transform(ga, f);
      inverse = std::max(inverse, max_diff(gauge_transform(-ga, t), f));
      mass_err = std::max(mass_err, std::abs(mass(t) - m0) / m0);
      for (double b : as) {
        const GaugeParameter gb(b);
        compose = std::max(compose, max_diff(gauge_transform(ga, gauge_transform(gb, f)), gauge_transform(ga + gb, f)));
      }
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double a : energy_as) {
      const double e = energy_ed_via_gauge(GaugeParameter(a), f);
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    spread = std::max(spread, hi - lo);
  }
  v.check("inverse_error", inverse, p["algebra_tolerance"], Sense::AtMost);
  v.check("composition_error", compose, p["algebra_tolerance"], Sense::AtMost);
  v.check("mass_error", mass_err, p["algebra_tolerance"], Sense::AtMost);
  v.check("energy_spread", spread, p["energy_tolerance"], Sense::AtMost);
  v.finalize();
  return v;
}

// ---------------------------------------------------------------------------

inline Verdict run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.name) {
    case ExperimentName::StandingWave:
      return run_standing_wave(cfg);
    case ExperimentName::MassThreshold:
      return run_mass_threshold(cfg);
    case ExperimentName::HalflineBlowup:
      return run_halfline_blowup(cfg);
    case ExperimentName::Nls5Variance:
      return run_nls5_variance(cfg);
    case ExperimentName::VirialValidation:
      return run_virial_validation(cfg);
    case ExperimentName::GaugeValidation:
      return run_gauge_validation(cfg);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace dnls
