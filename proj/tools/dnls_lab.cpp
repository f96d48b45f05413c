// dnls-lab: command-line front end. Exit codes: 0 success or all verdicts
// passed, 1 a verdict failed, 2 usage or config error, 3 solver failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>

#include "dnls/diagnostics.hpp"
#include "dnls/evolve.hpp"
#include "dnls/experiments.hpp"
#include "dnls/fixtures.hpp"
#include "dnls/ground_state.hpp"
#include "dnls/io.hpp"
#include "dnls/modulation.hpp"

using namespace dnls;
using io::Json;

namespace {

constexpr int kOk = 0;
constexpr int kVerdictFailed = 1;
constexpr int kUsage = 2;
constexpr int kSolverFailure = 3;

const char* kSchemaHelp = R"(
Config schemas (JSON, inline or a file path):

  evolve:
    {"schema_version": 1, "equation": "dnls" | "nls5",
     "grid": {"geometry": "line" | "halfline", "half_width": 30, "n": 1024},
     "initial": {"kind": "ground-state" | "gaussian" | "x-gaussian" | "blowup-fixture" | "random",
                 "amplitude": 1, "width": 1, "center": 0, "k": 0, "energy": -1},
     "seed": 0, "t_end": 1, "dt0": 0.001, "tolerance": 1e-10,
     "frame_interval": 0, "frame_stride": 1, "stop_grad_norm": 0, "dump_frames": true}
    Initial data are given in the gauged frame v.

  experiment <name>:
    {"schema_version": 1, "seed": 0, "parameters": {"name": value, ...},
     "sweep": {"name": [value, ...]}}
    names: standing-wave, mass-threshold, halfline-blowup, nls5-variance,
           virial-validation, gauge-validation
)";

int verdict_code(const Verdict& v) {
  if (v.solver_failure) return kSolverFailure;
  return v.passed ? kOk : kVerdictFailed;
}

// ---------------------------------------------------------------------------

int cmd_ground_state(double L, std::size_t n, const std::string& out_dir) {
  const auto g = GridSpec::line(L, n);
  const auto gs = ground_state(g);
  std::string csv = "x,Q,Qx\n";
  for (std::size_t j = 0; j < g.size(); ++j) {
    csv += io::join({g.x(j), gs.q[j].real(), gs.qx[j].real()}) + "\n";
  }
  Json inv;
  inv["schema_version"] = io::kSchemaVersion;
  inv["grid"] = io::grid_json(g);
  inv["mass"] = mass(gs.q);
  inv["grad_norm_squared"] = l2_norm_squared(gs.qx);
  inv["l4_fourth"] = lp_norm_pow(gs.q, 4);
  inv["l6_sixth"] = lp_norm_pow(gs.q, 6);
  inv["energy_E"] = energy_E(gs.q);
  inv["gn_functional"] = gn_functional(gs.q);
  inv["elliptic_residual"] = elliptic_residual(gs.q);
  io::OutputDir out(out_dir);
  out.write("ground_state.csv", csv);
  out.write("invariants.json", io::dump(inv));
  out.write_manifest({{"command", "ground-state"}, {"L", L}, {"n", n}});
  return kOk;
}

// ---------------------------------------------------------------------------

ComplexField initial_field(const GridSpec& g, const Json& init, std::uint64_t seed) {
  const auto kind = init.value("kind", std::string("ground-state"));
  const double amp = init.value("amplitude", 1.0);
  const double width = init.value("width", 1.0);
  const double center = init.value("center", 0.0);
  const double k = init.value("k", 0.0);
  if (kind == "ground-state") return ground_state(g, 0.0, center).q;
  if (kind == "gaussian") return fixtures::gaussian(g, amp, width, center, k);
  if (kind == "x-gaussian") return fixtures::x_gaussian(g, amp, k);
  if (kind == "blowup-fixture") return fixtures::halfline_blowup_data(g, init.value("energy", -1.0), k).v0;
  if (kind == "random") {
    std::mt19937_64 rng(seed);
    return fixtures::random_smooth_field(g, rng);
  }
  throw ConfigError("evolve: unknown initial kind '" + kind + "'");
}

int cmd_evolve(const std::string& config, const std::string& out_dir) {
  Json cfg = config.empty() ? Json::object() : io::load_json_argument(config);
  if (!cfg.is_object()) throw ConfigError("evolve: config must be a JSON object");
  static const std::vector<std::string> keys = {"schema_version", "equation",  "grid",           "initial",
                                                "seed",           "t_end",     "dt0",            "tolerance",
                                                "frame_interval", "frame_stride", "stop_grad_norm", "dump_frames"};
  for (const auto& [key, _] : cfg.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("evolve: unknown key '" + key + "'");
    }
  }
  Json grid = cfg.value("grid", Json{{"geometry", "line"}, {"half_width", 30.0}, {"n", 1024}});
  const auto g = io::grid_from_json(grid);
  const auto eq_name = cfg.value("equation", std::string("dnls"));
  if (eq_name != "dnls" && eq_name != "nls5") throw ConfigError("evolve: equation must be dnls or nls5");
  const std::uint64_t seed = cfg.value("seed", std::uint64_t{0});

  EvolutionProblem p(initial_field(g, cfg.value("initial", Json::object()), seed));
  p.equation = eq_name == "dnls" ? Equation::DNLSGauged : Equation::NLS5;
  p.t_end = cfg.value("t_end", p.t_end);
  p.dt0 = cfg.value("dt0", p.dt0);
  p.tolerance = cfg.value("tolerance", p.tolerance);
  p.frame_interval = cfg.value("frame_interval", p.frame_interval);
  p.frame_stride = cfg.value("frame_stride", p.frame_stride);
  p.stop_grad_norm = cfg.value("stop_grad_norm", p.stop_grad_norm);
  const bool dump = cfg.value("dump_frames", true);
  p.keep_states = dump;
  p.validate();

  const auto r = evolve(p);
  io::OutputDir out(out_dir);
  std::vector<DiagnosticsRecord> rs;
  std::vector<double> times;
  std::vector<ComplexField> states;
  for (const auto& f : r.frames) {
    rs.push_back(f.diagnostics);
    if (f.has_state()) {
      times.push_back(f.t);
      states.push_back(f.state);
    }
  }
  out.write("diagnostics.csv", io::diagnostics_csv(rs));
  Json outcome;
  outcome["schema_version"] = io::kSchemaVersion;
  outcome["status"] = to_string(r.status);
  outcome["t_final"] = r.t_final;
  outcome["accepted_steps"] = r.accepted_steps;
  outcome["rejected_steps"] = r.rejected_steps;
  outcome["boundary_leak"] = r.boundary_leak;
  outcome["warnings"] = r.warnings;
  outcome["message"] = r.message;
  out.write("outcome.json", io::dump(outcome));
  if (dump) {
    out.write("frames.json", io::dump(io::frames_index(g, times)));
    out.write("frames.csv", io::frames_csv(times, states));
  }
  cfg["schema_version"] = io::kSchemaVersion;
  out.write_manifest({{"command", "evolve"}, {"config", cfg}});
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  if (r.status == SolverStatus::StepFailure) {
    std::cerr << "solver failure: " << r.message << "\n";
    return kSolverFailure;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_modulate(const std::string& frames_dir, const std::string& out_dir) {
  const auto d = io::load_frames(frames_dir);
  if (!d.grid.periodic()) throw ConfigError("modulate: frames must live on the line");
  std::string csv = "t,lambda,gamma0,x0,residual_h1,lambda_times_P\n";
  for (std::size_t i = 0; i < d.states.size(); ++i) {
    const auto fit = modulation_fit(d.states[i]);
    csv += io::join({d.times[i], fit.lambda, fit.gamma0, fit.x0, fit.residual_h1, fit.momentum_check}) + "\n";
  }
  io::OutputDir out(out_dir);
  out.write("modulation.csv", csv);
  out.write_manifest({{"command", "modulate"}, {"frames", frames_dir}});
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_experiment(const std::string& name, const std::string& config, const std::string& out_dir) {
  const auto which = experiment_from_string(name);
  if (!which) throw ConfigError("unknown experiment '" + name + "'");
  const Json j = config.empty() ? Json::object() : io::load_json_argument(config);
  const auto req = io::parse_experiment_config(j, *which);
  io::OutputDir out(out_dir);
  int code = kOk;
  auto fold = [&](const Verdict& v) {
    const int c = verdict_code(v);
    if (c == kSolverFailure || (c == kVerdictFailed && code == kOk)) code = c;
    std::cout << v.experiment << ": " << (v.passed ? "passed" : "FAILED") << "\n";
    for (const auto& c : v.checks) {
      if (!c.ok()) {
        std::cout << "  " << c.name << " = " << io::fmt(c.value) << " (need " << to_string(c.sense) << " "
                  << io::fmt(c.bound) << ")\n";
      }
    }
    for (const auto& n : v.notes) std::cout << "  note: " << n << "\n";
  };

  if (req.sweep_values.empty()) {
    auto cfg = req.base;
    cfg.output_dir = out_dir;
    const auto v = run_experiment(cfg);
    io::write_verdict(out, v, cfg.seed);
    fold(v);
  } else {
    Json index;
    index["schema_version"] = io::kSchemaVersion;
    index["experiment"] = name;
    index["parameter"] = req.sweep_parameter;
    Json runs = Json::array();
    for (std::size_t i = 0; i < req.sweep_values.size(); ++i) {
      char dir[32];
      std::snprintf(dir, sizeof dir, "run_%03zu", i);
      auto cfg = req.base;
      cfg.parameters[req.sweep_parameter] = req.sweep_values[i];
      cfg.output_dir = (std::filesystem::path(out_dir) / dir).string();
      const auto v = run_experiment(cfg);
      io::write_verdict(out, v, cfg.seed, std::string(dir) + "/");
      fold(v);
      runs.push_back({{"value", req.sweep_values[i]},
                      {"dir", dir},
                      {"passed", v.passed},
                      {"solver_failure", v.solver_failure}});
    }
    index["runs"] = runs;
    out.write("sweep_index.json", io::dump(index));
  }
  out.write_manifest({{"command", "experiment"}, {"config", req.echo}});
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DNLS numerical laboratory"};
  app.footer(kSchemaHelp);
  app.require_subcommand(1);

  double L = 30.0;
  std::size_t n = 1024;
  std::string out_dir, config, frames_dir, name;
  std::size_t samples = 50;
  std::uint64_t seed = 0;

  auto* gs = app.add_subcommand("ground-state", "sample Q and report its invariants");
  gs->add_option("--L", L, "half width of the periodic box");
  gs->add_option("--n", n, "grid points");
  gs->add_option("--out", out_dir, "output directory")->required();

  auto* gc = app.add_subcommand("gauge-check", "gauge algebra and energy identities on seeded random fields");
  gc->add_option("--L", L, "half width of the periodic box");
  gc->add_option("--n", n, "grid points");
  gc->add_option("--samples", samples, "number of random fields");
  gc->add_option("--seed", seed, "random seed");
  gc->add_option("--out", out_dir, "output directory")->required();

  auto* ev = app.add_subcommand("evolve", "evolve one initial datum");
  ev->add_option("--config", config, "JSON config or path");
  ev->add_option("--out", out_dir, "output directory")->required();

  auto* md = app.add_subcommand("modulate", "fit every frame of a dump to the ground-state orbit");
  md->add_option("--frames", frames_dir, "directory written by evolve")->required();
  md->add_option("--out", out_dir, "output directory")->required();

  auto* ex = app.add_subcommand("experiment", "run a scripted experiment");
  ex->add_option("name", name, "experiment name")->required();
  ex->add_option("--config", config, "JSON config or path");
  ex->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*gs) return cmd_ground_state(L, n, out_dir);
    if (*gc) {
      ExperimentConfig cfg;
      cfg.name = ExperimentName::GaugeValidation;
      cfg.seed = seed;
      cfg.parameters = {{"L", L}, {"n", static_cast<double>(n)}, {"samples", static_cast<double>(samples)}};
      const auto v = run_experiment(cfg);
      io::OutputDir out(out_dir);
      io::write_verdict(out, v, seed);
      out.write_manifest({{"command", "gauge-check"}, {"L", L}, {"n", n}, {"samples", samples}, {"seed", seed}});
      std::cout << "gauge-check: " << (v.passed ? "passed" : "FAILED") << "\n";
      return verdict_code(v);
    }
    if (*ev) return cmd_evolve(config, out_dir);
    if (*md) return cmd_modulate(frames_dir, out_dir);
    if (*ex) return cmd_experiment(name, config, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n" << kSchemaHelp;
    return kUsage;
  } catch (const Json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n" << kSchemaHelp;
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
