#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "chronon/runner.hpp"

namespace chronon::cli {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("chronon_runner_" + std::to_string(::getpid()) + "_" +
                                          std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  [[nodiscard]] fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + CHRONON_CLI_PATH + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

double number(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return static_cast<double>(std::get<std::int64_t>(v));
}

std::size_t column(const OutputRecord& r, const std::string& name) {
  for (std::size_t i = 0; i < r.fields.size(); ++i) {
    if (r.fields[i].first == name) return i;
  }
  throw std::out_of_range(name);
}

TEST(ParseConfig, HappyPathCaseB) {
  const auto cfg = parse_config({"evolve", "--case", "b", "--tau", "0.05", "--mass", "1", "--p0", "1", "--steps", "2000"});
  EXPECT_EQ(cfg.command, Command::Evolve);
  EXPECT_EQ(cfg.case_tag, CaseTag::B);
  EXPECT_EQ(cfg.tau, 0.05);
  EXPECT_EQ(cfg.steps, 2000u);
  EXPECT_EQ(cfg.resolved_scheme(), "leapfrog");
  EXPECT_EQ(cfg.grid_n, 4096u);
  EXPECT_EQ(cfg.p_max, 16.0);
  EXPECT_EQ(cfg.sigma, 0.25);
  EXPECT_EQ(cfg.format, Format::Csv);
}

TEST(ParseConfig, Rejections) {
  EXPECT_THROW(parse_config({"evolve", "--grid-n", "1000"}), ArgumentError);
  EXPECT_THROW(parse_config({"evolve", "--bogus", "1"}), ArgumentError);
  EXPECT_THROW(parse_config({"evolve", "--tau", "abc"}), ArgumentError);
  EXPECT_THROW(parse_config({"evolve", "--case", "b", "--tau", "-0.1"}), ArgumentError);
  EXPECT_THROW(parse_config({"teleport"}), ArgumentError);
  EXPECT_THROW(parse_config({"dispersion", "--sweep", "p:0:1:1"}), ArgumentError);
  EXPECT_THROW(parse_config({"dispersion", "--sweep", "q:0:1:5"}), ArgumentError);
  EXPECT_THROW(parse_config({"dispersion", "--sweep", "p:0:1:5:log"}), ArgumentError);
  EXPECT_THROW(parse_config({"dispersion", "--format", "xml"}), ArgumentError);
  try {
    parse_config({"evolve", "--grid-n", "1000"});
  } catch (const ArgumentError& e) {
    EXPECT_NE(std::string(e.what()).find("grid-n"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_config({"--help"}), HelpRequested);
}

TEST(ParseConfig, SignedTauOnlyForDispersionCaseA) {
  EXPECT_EQ(parse_config({"dispersion", "--case", "a", "--tau", "-0.3"}).tau, -0.3);
  EXPECT_THROW(parse_config({"dispersion", "--case", "b", "--tau", "-0.3"}), ArgumentError);
  EXPECT_NO_THROW(parse_config({"evolve", "--case", "a", "--tau", "0", "--scheme", "effective"}));
  EXPECT_THROW(parse_config({"evolve", "--case", "a", "--tau", "0"}), ArgumentError);
}

TEST(ParseConfig, FileThenFlagPrecedence) {
  TempDir dir;
  const auto file = dir / "run.cfg";
  std::ofstream(file) << "# comment\ntau=0.1\nmass = 0.5\ngrid_n=1024\n";
  const auto from_file = parse_config({"evolve", "--config", file.string()});
  EXPECT_EQ(from_file.tau, 0.1);
  EXPECT_EQ(from_file.m, 0.5);
  EXPECT_EQ(from_file.grid_n, 1024u);
  const auto both = parse_config({"evolve", "--tau", "0.2", "--config", file.string()});
  EXPECT_EQ(both.tau, 0.2);
  EXPECT_EQ(both.m, 0.5);

  const auto bad = dir / "bad.cfg";
  std::ofstream(bad) << "tau=0.1\nwarp=9\n";
  try {
    parse_config({"evolve", "--config", bad.string()});
    FAIL() << "unknown key accepted";
  } catch (const ArgumentError& e) {
    EXPECT_NE(std::string(e.what()).find("warp"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_config({"evolve", "--config", (dir / "missing.cfg").string()}), ArgumentError);
}

TEST(ParseSweep, Values) {
  const Sweep lin = parse_sweep("p:0:1:5");
  EXPECT_EQ(lin.values(), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  const Sweep lg = parse_sweep("tau:0.001:1:4:log");
  const auto v = lg.values();
  ASSERT_EQ(v.size(), 4u);
  EXPECT_NEAR(v[1], 0.01, 1e-15);
  EXPECT_NEAR(v[2], 0.1, 1e-15);
  EXPECT_EQ(v[3], 1.0);
  EXPECT_THROW(parse_sweep("p:0:1"), ArgumentError);
}

TEST(RunScenario, SchemasMatchRows) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"dispersion", "--sweep", "p:0:3:7"},
           {"derivative", "--sweep", "E:0:2:5"},
           {"commutators", "--draws", "3"},
           {"evolve", "--grid-n", "256", "--p-max", "8", "--steps", "20", "--record-every", "5"}}) {
    const auto cfg = parse_config(args);
    const auto rows = run_scenario(cfg);
    ASSERT_FALSE(rows.empty());
    const auto names = schema(cfg.command);
    for (const auto& r : rows) {
      ASSERT_EQ(r.fields.size(), names.size());
      for (std::size_t i = 0; i < names.size(); ++i) EXPECT_EQ(r.fields[i].first, names[i]);
    }
  }
  EXPECT_EQ(schema(Command::Evolve),
            (std::vector<std::string>{"step", "t", "norm", "centroid_x", "centroid_v", "front_x", "cone_fraction"}));
}

TEST(RunScenario, DispersionCaseBPeak) {
  const auto cfg = parse_config({"dispersion", "--case", "b", "--tau", "1", "--mass", "0", "--sweep", "E:0:4:401"});
  const auto rows = run_scenario(cfg);
  const std::size_t ce = column(rows.front(), "E");
  const std::size_t ced = column(rows.front(), "E_D");
  double best = -1.0;
  double at = 0.0;
  for (const auto& r : rows) {
    const double ed = number(r.fields[ced].second);
    if (ed > best) {
      best = ed;
      at = number(r.fields[ce].second);
    }
  }
  EXPECT_NEAR(best, 1.0, 1e-4);
  EXPECT_NEAR(at, M_PI / 2, 0.01);
}

TEST(RunScenario, EvolveCaseBUnitarity) {
  const auto cfg = parse_config({"evolve", "--case", "b", "--tau", "0.01", "--mass", "1", "--steps", "10000",
                                 "--record-every", "1000"});
  const auto rows = run_scenario(cfg);
  const std::size_t cn = column(rows.front(), "norm");
  EXPECT_NEAR(number(rows.back().fields[cn].second), 1.0, 1e-12);
  EXPECT_EQ(std::get<std::int64_t>(rows.back().fields[0].second), 10000);
}

TEST(RunScenario, CommutatorSweepAgreement) {
  const auto rows = run_scenario(parse_config({"commutators", "--draws", "100", "--seed", "7"}));
  ASSERT_EQ(rows.size(), 900u);
  const std::size_t ce = column(rows.front(), "abs_err");
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, number(r.fields[ce].second));
  EXPECT_LE(worst, 1e-8);
}

TEST(RunScenario, DerivativeResiduals) {
  const auto rows = run_scenario(parse_config({"derivative", "--case", "general", "--lambda-re", "0.3",
                                               "--lambda-im", "0.2", "--ds-re", "-0.1", "--ds-im", "0.25"}));
  const std::size_t cr = column(rows.front(), "residual");
  for (const auto& r : rows) EXPECT_LE(number(r.fields[cr].second), 1e-12);
}

TEST(RunScenario, ErrorsCarryContext) {
  const auto cfg = parse_config({"evolve", "--grid-n", "256", "--p-max", "8", "--steps", "5000"});
  try {
    run_scenario(cfg);
    FAIL() << "wrap guard did not fire";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("evolve"), std::string::npos) << e.what();
  }
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1e-300), "1e-300");
  EXPECT_EQ(format_number(2.0), "2");
  for (double v : {M_PI, 1.0 / 3.0, 6.02214076e23, -4.9e-324}) {
    EXPECT_EQ(std::strtod(format_number(v).c_str(), nullptr), v);
  }
}

TEST(Render, CsvLayout) {
  OutputRecord r;
  r.add("case", std::string("a"));
  r.add("step", std::int64_t{3});
  r.add("x", 0.5);
  EXPECT_EQ(render({r, r}, Format::Csv), "case,step,x\na,3,0.5\na,3,0.5\n");
}

TEST(Render, SchemaMismatchAndNonFinite) {
  OutputRecord a;
  a.add("x", 1.0);
  OutputRecord b;
  b.add("y", 1.0);
  EXPECT_THROW(render({a, b}, Format::Csv), InternalError);
  OutputRecord c;
  c.add("x", std::nan(""));
  EXPECT_THROW(render({c}, Format::Csv), InternalError);
}

TEST(Emit, EmptyRecordsCreateNoFile) {
  TempDir dir;
  const auto out = dir / "empty.csv";
  EXPECT_THROW(emit({}, Format::Csv, out.string()), InternalError);
  EXPECT_FALSE(fs::exists(out));
}

TEST(Emit, UnwritablePath) {
  OutputRecord r;
  r.add("x", 1.0);
  EXPECT_THROW(emit({r}, Format::Csv, "/nonexistent-dir/sub/out.csv"), IoError);
}

TEST(Emit, JsonRoundTrip) {
  TempDir dir;
  const auto cfg = parse_config({"dispersion", "--case", "a", "--tau", "0.3", "--sweep", "p:0:5:11", "--format", "json"});
  const auto rows = run_scenario(cfg);
  const auto out = dir / "d.json";
  emit(rows, Format::Json, out.string(), config_record(cfg));
  const auto doc = nlohmann::json::parse(slurp(out));
  ASSERT_EQ(doc.at("rows").size(), rows.size());
  EXPECT_EQ(doc.at("schema").get<std::vector<std::string>>(), schema(Command::Dispersion));
  EXPECT_EQ(doc.at("config").at("tau").get<double>(), 0.3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ASSERT_EQ(doc.at("rows")[i].size(), rows[i].fields.size());
    for (std::size_t c = 0; c < rows[i].fields.size(); ++c) {
      const auto& [name, value] = rows[i].fields[c];
      const auto& j = doc.at("rows")[i][c];
      if (const auto* s = std::get_if<std::string>(&value)) {
        EXPECT_EQ(j.get<std::string>(), *s);
      } else {
        EXPECT_EQ(j.get<double>(), number(value)) << name;
      }
    }
  }
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  EXPECT_EQ(run_cli("dispersion --out " + (dir / "a.csv").string()), 0);
  EXPECT_EQ(run_cli("evolve --grid-n 1000"), 2);
  EXPECT_EQ(run_cli("evolve --nonsense"), 2);
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("evolve --grid-n 256 --p-max 8 --steps 5000 --out " + (dir / "w.csv").string()), 1);
  EXPECT_EQ(run_cli("dispersion --out /nonexistent-dir/x.csv"), 1);
  EXPECT_FALSE(fs::exists(dir / "w.csv"));
}

TEST(Cli, ByteIdenticalAcrossRunsAndThreads) {
  TempDir dir;
  const std::vector<std::string> scenarios = {
      "commutators --draws 40 --seed 3",
      "dispersion --case b --tau 0.5 --sweep p:0:10:201",
      "derivative --case a --tau 0.2 --sweep tau:0.001:1:30:log",
      "evolve --case b --tau 0.05 --grid-n 512 --p-max 8 --steps 300 --record-every 10",
  };
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "8", "8"}) {
      const auto out = dir / ("s" + std::to_string(i) + "_" + threads + std::to_string(outputs.size()) + ".csv");
      ASSERT_EQ(run_cli(scenarios[i] + " --out " + out.string(), std::string("CHRONON_THREADS=") + threads), 0)
          << scenarios[i];
      outputs.push_back(slurp(out));
    }
    EXPECT_FALSE(outputs[0].empty());
    EXPECT_EQ(outputs[0], outputs[1]) << scenarios[i];
    EXPECT_EQ(outputs[1], outputs[2]) << scenarios[i];
  }
}

TEST(Cli, SelfDescribingRows) {
  const auto rows = run_scenario(parse_config({"dispersion", "--case", "b", "--tau", "0.4", "--mass", "0.3"}));
  const auto& r = rows.front();
  EXPECT_EQ(std::get<std::string>(r.fields[column(r, "case")].second), "b");
  EXPECT_EQ(number(r.fields[column(r, "tau")].second), 0.4);
  EXPECT_EQ(number(r.fields[column(r, "m")].second), 0.3);
}

}  // namespace
}  // namespace chronon::cli
