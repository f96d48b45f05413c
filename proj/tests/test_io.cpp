#include <gtest/gtest.h>

#include <random>

#include "dnls/fixtures.hpp"
#include "dnls/io.hpp"

using namespace dnls;
namespace io = dnls::io;

namespace {

io::fs::path temp_dir(const std::string& name) {
  auto p = io::fs::temp_directory_path() / ("dnls_io_" + name + "_" + std::to_string(::getpid()));
  io::fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Format, RoundTripsExactly) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, 20.0 * u(rng));
    EXPECT_EQ(std::stod(io::fmt(x)), x);
  }
  EXPECT_EQ(io::fmt(0.1), "0.10000000000000001");
  EXPECT_EQ(io::join({1.0, -2.5}), "1,-2.5");
}

TEST(DiagnosticsCsv, RoundTrip) {
  std::vector<DiagnosticsRecord> rs(3);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    auto& r = rs[i];
    r.t = 0.1 * i;
    r.mass = 2.0 * kPi + 1e-13 * i;
    r.energy_E = -1.0 / 3.0;
    r.energy_ED = 1e-300;
    r.momentum_P = 4.0;
    r.momentum_PD = -7.25;
    r.virial_I = 12.5;
    r.virial_J = -0.0;
    r.grad_norm = std::sqrt(kPi);
    r.dt_used = 1e-3 / 3.0;
  }
  const auto text = io::diagnostics_csv(rs);
  EXPECT_EQ(text.substr(0, text.find('\n')), io::kDiagnosticsHeader);
  const auto back = io::parse_diagnostics_csv(text);
  ASSERT_EQ(back.size(), rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    EXPECT_EQ(back[i].t, rs[i].t);
    EXPECT_EQ(back[i].mass, rs[i].mass);
    EXPECT_EQ(back[i].energy_E, rs[i].energy_E);
    EXPECT_EQ(back[i].energy_ED, rs[i].energy_ED);
    EXPECT_EQ(back[i].momentum_PD, rs[i].momentum_PD);
    EXPECT_EQ(back[i].grad_norm, rs[i].grad_norm);
    EXPECT_EQ(back[i].dt_used, rs[i].dt_used);
  }
}

TEST(VerdictJson, Fields) {
  Verdict v;
  v.experiment = "standing-wave";
  v.parameters["n"] = 1024;
  v.metric("bad", std::nan(""));
  v.metric("big", INFINITY);
  v.check("x", 0.5, 1.0, Sense::AtMost);
  v.note("hello");
  v.finalize();
  const auto j = io::verdict_json(v, 42);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["seed"], 42);
  EXPECT_EQ(j["passed"], true);
  EXPECT_EQ(j["metrics"]["bad"], "nan");
  EXPECT_EQ(j["metrics"]["big"], "inf");
  EXPECT_EQ(j["checks"][0]["ok"], true);
  EXPECT_EQ(j["tolerances"]["x"], 1.0);
  EXPECT_NE(j["notes"].get<std::string>().find("hello"), std::string::npos);
  EXPECT_NO_THROW(io::Json::parse(io::dump(j)));
}

TEST(ExperimentConfigJson, Parses) {
  const auto j = io::Json::parse(R"({"schema_version":1,"seed":9,"parameters":{"n":512},"sweep":{"delta":[0,0.1]}})");
  const auto r = io::parse_experiment_config(j, ExperimentName::MassThreshold);
  EXPECT_EQ(r.base.seed, 9u);
  EXPECT_EQ(r.base.parameters.at("n"), 512.0);
  EXPECT_EQ(r.sweep_parameter, "delta");
  EXPECT_EQ(r.sweep_values, (std::vector<double>{0.0, 0.1}));
  EXPECT_EQ(r.echo["experiment"], "mass-threshold");
}

TEST(ExperimentConfigJson, Rejects) {
  const auto bad = [](const char* text) {
    return io::parse_experiment_config(io::Json::parse(text), ExperimentName::StandingWave);
  };
  EXPECT_THROW(bad("[]"), ConfigError);
  EXPECT_THROW(bad(R"({"sed":1})"), ConfigError);
  EXPECT_THROW(bad(R"({"schema_version":2})"), ConfigError);
  EXPECT_THROW(bad(R"({"experiment":"gauge-validation"})"), ConfigError);
  EXPECT_THROW(bad(R"({"seed":-1})"), ConfigError);
  EXPECT_THROW(bad(R"({"parameters":{"n":"big"}})"), ConfigError);
  EXPECT_THROW(bad(R"({"sweep":{"n":[]}})"), ConfigError);
  EXPECT_THROW(bad(R"({"sweep":{"n":[1],"L":[2]}})"), ConfigError);
}

TEST(ExperimentConfigJson, InlineOrFile) {
  EXPECT_EQ(io::load_json_argument(R"( {"seed":3})")["seed"], 3);
  const auto dir = temp_dir("cfg");
  io::fs::create_directories(dir);
  std::ofstream(dir / "c.json") << R"({"seed":4})";
  EXPECT_EQ(io::load_json_argument((dir / "c.json").string())["seed"], 4);
  EXPECT_THROW(io::load_json_argument((dir / "missing.json").string()), ConfigError);
  EXPECT_THROW(io::load_json_argument("{oops"), ConfigError);
  io::fs::remove_all(dir);
}

TEST(Frames, RoundTrip) {
  std::mt19937_64 rng(8);
  for (const auto& g : {GridSpec::line(20.0, 128), GridSpec::halfline(10.0, 101)}) {
    std::vector<ComplexField> states;
    for (int f = 0; f < 3; ++f) {
      ComplexField s(g);
      std::normal_distribution<double> nd;
      for (std::size_t j = 0; j < s.size(); ++j) s[j] = cplx(nd(rng), nd(rng));
      if (!g.periodic()) s[0] = 0.0;
      states.push_back(s);
    }
    const std::vector<double> times = {0.0, 0.1, 0.3};
    const auto d = io::parse_frames(io::frames_index(g, times), io::frames_csv(times, states));
    EXPECT_EQ(d.grid.periodic(), g.periodic());
    EXPECT_EQ(d.grid.size(), g.size());
    EXPECT_EQ(d.grid.dx(), g.dx());
    EXPECT_EQ(d.times, times);
    ASSERT_EQ(d.states.size(), 3u);
    for (int f = 0; f < 3; ++f) {
      for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(d.states[f][j], states[f][j]);
    }
  }
}

TEST(Frames, TruncatedCsvThrows) {
  const auto g = GridSpec::line(20.0, 16);
  const std::vector<double> times = {0.0};
  auto csv = io::frames_csv(times, {ComplexField(g)});
  csv.resize(csv.size() / 2);
  EXPECT_THROW(io::parse_frames(io::frames_index(g, times), csv), Error);
}

TEST(Hashes, KnownValues) {
  EXPECT_EQ(io::sha1_hex("abc"), "a9993e364706816aba3e25717850c26c9cd0d89d");
  EXPECT_EQ(io::git_blob_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  EXPECT_EQ(io::git_blob_hash("hello world\n"), "3b18e512dba79e4c8300dd08aeb37f8e728b8dad");
}

TEST(Manifest, WritesAndHashes) {
  const auto dir = temp_dir("manifest");
  {
    io::OutputDir out(dir);
    out.write("a.csv", "x\n1\n");
    out.write("sub/b.json", "{}\n");
    out.write_manifest(io::Json{{"seed", 1}});
    const auto m = io::Json::parse(io::read_file(dir / "manifest.json"));
    EXPECT_EQ(m["schema_version"], 1);
    EXPECT_EQ(m["tool_version"], "0.1.0");
    EXPECT_EQ(m["artifact_paths"], (io::Json{"a.csv", "sub/b.json"}));
    EXPECT_EQ(m["artifact_hashes"]["a.csv"], io::git_blob_hash("x\n1\n"));
    EXPECT_EQ(m["git_like_content_hash"], out.content_hash());
    EXPECT_EQ(io::Json::parse(m["config_echo"].get<std::string>())["seed"], 1);
    EXPECT_EQ(io::read_file(dir / "sub/b.json"), "{}\n");
  }
  io::OutputDir a(dir / "p"), b(dir / "q"), c(dir / "r");
  a.write("f", "1");
  b.write("f", "1");
  c.write("f", "2");
  EXPECT_EQ(a.content_hash(), b.content_hash());
  EXPECT_NE(a.content_hash(), c.content_hash());
  io::fs::remove_all(dir);
}

TEST(WriteVerdict, SameSeedSameBytes) {
  const auto dir = temp_dir("verdict");
  ExperimentConfig c;
  c.name = ExperimentName::GaugeValidation;
  c.parameters["samples"] = 5;
  c.seed = 11;
  std::string hash[2];
  for (int i = 0; i < 2; ++i) {
    io::OutputDir out(dir / std::to_string(i));
    io::write_verdict(out, run_experiment(c), c.seed);
    hash[i] = out.content_hash();
  }
  EXPECT_EQ(hash[0], hash[1]);
  EXPECT_EQ(io::read_file(dir / "0/verdict.json"), io::read_file(dir / "1/verdict.json"));
  io::fs::remove_all(dir);
}
