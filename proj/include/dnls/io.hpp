#pragma once

// Files: diagnostics CSV, verdict and config JSON, frame dumps, manifests.
// Needs nlohmann/json (vendor/json.hpp) and OpenSSL's libcrypto.

#include <openssl/sha.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dnls/diagnostics.hpp"
#include "dnls/experiments.hpp"
#include "dnls/grid.hpp"
#include "json.hpp"

namespace dnls::io {

namespace fs = std::filesystem;
using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// 17 significant digits; "%g" never consults the locale for the decimal point
/// unless setlocale was called, which nothing here does.
inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string join(const std::vector<double>& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += fmt(row[i]);
  }
  return out;
}

inline constexpr const char* kDiagnosticsHeader =
    "t,mass,energy_E,energy_ED,momentum_P,momentum_PD,virial_I,virial_J,grad_norm,dt_used";

inline std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& rs) {
  std::string out = kDiagnosticsHeader;
  out += '\n';
  for (const auto& r : rs) {
    out += join({r.t, r.mass, r.energy_E, r.energy_ED, r.momentum_P, r.momentum_PD, r.virial_I, r.virial_J,
                 r.grad_norm, r.dt_used});
    out += '\n';
  }
  return out;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

inline std::vector<DiagnosticsRecord> parse_diagnostics_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kDiagnosticsHeader) throw Error("diagnostics CSV: bad header");
  std::vector<DiagnosticsRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 10) throw Error("diagnostics CSV: expected 10 fields");
    DiagnosticsRecord r;
    double* dst[] = {&r.t,        &r.mass,        &r.energy_E, &r.energy_ED, &r.momentum_P,
                     &r.momentum_PD, &r.virial_I, &r.virial_J, &r.grad_norm, &r.dt_used};
    for (std::size_t i = 0; i < 10; ++i) *dst[i] = std::stod(f[i]);
    out.push_back(r);
  }
  return out;
}

// JSON numbers cannot be NaN or infinite; those go out as strings.
inline Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline Json to_json(const std::map<std::string, double>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = number(v);
  return j;
}

inline Json verdict_json(const Verdict& v, std::uint64_t seed) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["experiment"] = v.experiment;
  j["seed"] = seed;
  j["passed"] = v.passed;
  j["solver_failure"] = v.solver_failure;
  j["parameters"] = to_json(v.parameters);
  j["metrics"] = to_json(v.metrics);
  j["tolerances"] = to_json(v.tolerances);
  Json checks = Json::array();
  for (const auto& c : v.checks) {
    checks.push_back({{"name", c.name},
                      {"value", number(c.value)},
                      {"bound", number(c.bound)},
                      {"sense", to_string(c.sense)},
                      {"ok", c.ok()}});
  }
  j["checks"] = checks;
  j["notes"] = v.notes_text();
  return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Experiment config: {"schema_version": 1, "experiment": name, "seed": s,
// "parameters": {...}, "sweep": {"param": [values...]}}. Everything optional
// except that names must be known.

struct ExperimentRequest {
  ExperimentConfig base;
  std::string sweep_parameter;
  std::vector<double> sweep_values;
  Json echo;
};

inline ExperimentRequest parse_experiment_config(const Json& j, ExperimentName name) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> keys = {"schema_version", "experiment", "seed", "parameters", "sweep"};
  for (const auto& [k, _] : j.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ConfigError("config: unknown key '" + k + "'");
  }
  if (j.contains("schema_version") && j["schema_version"] != kSchemaVersion) {
    throw ConfigError("config: unsupported schema_version");
  }
  if (j.contains("experiment") && j["experiment"] != to_string(name)) {
    throw ConfigError("config: experiment field does not match the command line");
  }
  ExperimentRequest r;
  r.base.name = name;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("config: seed must be a nonnegative integer");
    r.base.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("parameters")) {
    if (!j["parameters"].is_object()) throw ConfigError("config: parameters must be an object");
    for (const auto& [k, v] : j["parameters"].items()) {
      if (!v.is_number()) throw ConfigError("config: parameter '" + k + "' must be a number");
      r.base.parameters[k] = v.get<double>();
    }
  }
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    if (!s.is_object() || s.size() != 1) throw ConfigError("config: sweep must name exactly one parameter");
    r.sweep_parameter = s.begin().key();
    if (!s.begin()->is_array() || s.begin()->empty()) throw ConfigError("config: sweep values must be a list");
    for (const auto& x : *s.begin()) {
      if (!x.is_number()) throw ConfigError("config: sweep values must be numbers");
      r.sweep_values.push_back(x.get<double>());
    }
  }
  r.echo = j;
  r.echo["schema_version"] = kSchemaVersion;
  r.echo["experiment"] = to_string(name);
  r.echo["seed"] = r.base.seed;
  return r;
}

/// A config argument is either inline JSON or a path to a JSON file.
inline Json load_json_argument(const std::string& arg) {
  std::string text = arg;
  const auto first = arg.find_first_not_of(" \t\n");
  if (first == std::string::npos || arg[first] != '{') {
    std::ifstream in(arg);
    if (!in) throw ConfigError("cannot read config file '" + arg + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Frame dump: frames.json holds the grid and times, frames.csv the samples.

inline Json grid_json(const GridSpec& g) {
  return {{"geometry", g.periodic() ? "line" : "halfline"}, {"half_width", g.half_width()}, {"n", g.size()}};
}

inline GridSpec grid_from_json(const Json& j) {
  const auto geo = j.at("geometry").get<std::string>();
  const double L = j.at("half_width").get<double>();
  const auto n = j.at("n").get<std::size_t>();
  if (geo == "line") return GridSpec::line(L, n);
  if (geo == "halfline") return GridSpec::halfline(L, n);
  throw Error("frame dump: unknown geometry '" + geo + "'");
}

struct FrameDump {
  GridSpec grid = GridSpec::line(1.0, 16);
  std::vector<double> times;
  std::vector<ComplexField> states;
};

inline std::string frames_csv(const std::vector<double>& times, const std::vector<ComplexField>& states) {
  std::string out = "t,x,re,im\n";
  for (std::size_t f = 0; f < states.size(); ++f) {
    const auto& s = states[f];
    for (std::size_t j = 0; j < s.size(); ++j) {
      out += join({times[f], s.grid().x(j), s[j].real(), s[j].imag()});
      out += '\n';
    }
  }
  return out;
}

inline Json frames_index(const GridSpec& g, const std::vector<double>& times) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["grid"] = grid_json(g);
  Json t = Json::array();
  for (double x : times) t.push_back(x);
  j["times"] = t;
  return j;
}

inline FrameDump parse_frames(const Json& index, const std::string& csv) {
  FrameDump d;
  if (index.value("schema_version", 0) != kSchemaVersion) throw Error("frame dump: unsupported schema_version");
  d.grid = grid_from_json(index.at("grid"));
  d.times = index.at("times").get<std::vector<double>>();
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "t,x,re,im") throw Error("frame dump: bad CSV header");
  const std::size_t n = d.grid.size();
  for (std::size_t f = 0; f < d.times.size(); ++f) {
    ComplexField s(d.grid);
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::getline(in, line)) throw Error("frame dump: truncated CSV");
      const auto p = split(line, ',');
      if (p.size() != 4) throw Error("frame dump: expected 4 fields");
      s[j] = cplx(std::stod(p[2]), std::stod(p[3]));
    }
    d.states.push_back(std::move(s));
  }
  return d;
}

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read '" + p.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline FrameDump load_frames(const fs::path& dir) {
  return parse_frames(Json::parse(read_file(dir / "frames.json")), read_file(dir / "frames.csv"));
}

// ---------------------------------------------------------------------------
// Manifest.

inline std::string sha1_hex(const std::string& bytes) {
  unsigned char md[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), md);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char c : md) {
    out += hex[c >> 4];
    out += hex[c & 15];
  }
  return out;
}

/// SHA-1 of "blob <size>\0<bytes>", as git names file contents.
inline std::string git_blob_hash(const std::string& bytes) {
  return sha1_hex("blob " + std::to_string(bytes.size()) + std::string(1, '\0') + bytes);
}

inline std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Collects artifacts for one output directory and writes them plus the
/// manifest. Paths are relative to the directory.
class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)), started_(utc_now()) {}

  const fs::path& path() const { return dir_; }

  void write(const std::string& rel, const std::string& bytes) {
    const auto p = dir_ / rel;
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + p.string() + "'");
    out << bytes;
    if (!out) throw Error("write failed for '" + p.string() + "'");
    artifacts_[rel] = git_blob_hash(bytes);
  }

  /// Hash over the sorted "path\0blobhash\n" lines of every artifact.
  std::string content_hash() const {
    std::string acc;
    for (const auto& [rel, h] : artifacts_) acc += rel + std::string(1, '\0') + h + "\n";
    return sha1_hex(acc);
  }

  void write_manifest(const Json& config_echo) {
    Json m;
    m["schema_version"] = kSchemaVersion;
    m["tool_version"] = kToolVersion;
    m["config_echo"] = config_echo.dump();
    m["started"] = started_;
    m["finished"] = utc_now();
    Json paths = Json::array();
    Json hashes = Json::object();
    for (const auto& [rel, h] : artifacts_) {
      paths.push_back(rel);
      hashes[rel] = h;
    }
    m["artifact_paths"] = paths;
    m["artifact_hashes"] = hashes;
    m["git_like_content_hash"] = content_hash();
    fs::create_directories(dir_);
    std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
    out << dump(m);
  }

 private:
  fs::path dir_;
  std::string started_;
  std::map<std::string, std::string> artifacts_;
};

/// verdict.json plus one diagnostics CSV per run label.
inline void write_verdict(OutputDir& out, const Verdict& v, std::uint64_t seed, const std::string& prefix = "") {
  for (const auto& [label, s] : v.series) out.write(prefix + "diagnostics_" + label + ".csv", diagnostics_csv(s));
  out.write(prefix + "verdict.json", dump(verdict_json(v, seed)));
}

}  // namespace dnls::io
