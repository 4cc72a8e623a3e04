#include "emkf/config.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "emkf/errors.hpp"
#include "emkf/experiment.hpp"
#include "emkf/trace_io.hpp"

namespace emkf {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            (std::string("emkf_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

ExperimentConfig parse(std::vector<std::string> args) {
  args.insert(args.begin(), "emkf_bench");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_config(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error_field(const KeyValues& kv) {
  try {
    config_from_key_values(kv);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

TEST(Config, Defaults) {
  const auto cfg = config_from_key_values({}, std::nullopt);
  EXPECT_EQ(cfg.run.horizon, 5000);
  EXPECT_EQ(cfg.run.window, 50);
  EXPECT_EQ(cfg.run.env.d, 20);
  EXPECT_EQ(cfg.run.env.k, 10);
  EXPECT_EQ(cfg.run.env.arms, 15);
  EXPECT_EQ(cfg.seeds.size(), 20u);
  EXPECT_EQ(cfg.seeds.front(), 0u);
  EXPECT_EQ(cfg.seeds.back(), 19u);
  EXPECT_EQ(cfg.agents.size(), 4u);
  EXPECT_EQ(cfg.eps_sweep, (std::vector<double>{0.1, 0.5, 1.0}));
  EXPECT_EQ(cfg.output_dir, fs::path("results"));
}

TEST(Config, OutputDirFallsBackToEnvironment) {
  EXPECT_EQ(config_from_key_values({}, "/tmp/x").output_dir, fs::path("/tmp/x"));
  EXPECT_EQ(config_from_key_values({{"out", "here"}}, "/tmp/x").output_dir, fs::path("here"));
}

TEST(Config, FlagsOverrideDefaults) {
  const auto cfg = parse({"--T", "100", "--seeds", "0,1", "--agents", "TS_PCO,EMKF_TS"});
  EXPECT_EQ(cfg.run.horizon, 100);
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{0, 1}));
  EXPECT_EQ(cfg.agents, (std::vector<AgentKind>{AgentKind::kTsPco, AgentKind::kEmkfTs}));
}

TEST(Config, FileThenFlags) {
  TempDir dir;
  const auto file = dir.path() / "run.cfg";
  std::ofstream(file) << "# comment\nT = 64\n\nd = 5\nk = 2\nseeds = 3..5\n";
  const auto cfg = parse({"--config", file.string(), "--T", "32"});
  EXPECT_EQ(cfg.run.horizon, 32);
  EXPECT_EQ(cfg.run.env.d, 5);
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{3, 4, 5}));
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(config_error_field({{"eps", "-1"}}), "eps");
  EXPECT_EQ(config_error_field({{"T", "0"}}), "T");
  EXPECT_EQ(config_error_field({{"T", "abc"}}), "T");
  EXPECT_EQ(config_error_field({{"k", "30"}}), "k");
  EXPECT_EQ(config_error_field({{"delta", "1"}}), "delta");
  EXPECT_EQ(config_error_field({{"agents", "FOO"}}), "agents");
  EXPECT_EQ(config_error_field({{"bogus", "1"}}), "bogus");
  EXPECT_THROW(parse({"--eps", "-1"}), ConfigError);
}

TEST(Config, MissingFile) {
  try {
    read_config_file("/nonexistent/emkf.cfg");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "config");
  }
}

TEST(Config, SeedLists) {
  EXPECT_EQ(parse_seed_list("seeds", "0..3,7"), (std::vector<std::uint64_t>{0, 1, 2, 3, 7}));
  EXPECT_THROW(parse_seed_list("seeds", "3..1"), ConfigError);
  EXPECT_THROW(parse_seed_list("seeds", ""), ConfigError);
}

TEST(Config, EveryKeyIsAccepted) {
  const auto& keys = config_keys();
  EXPECT_NE(std::find(keys.begin(), keys.end(), "init_model"), keys.end());
  EXPECT_NE(std::find(keys.begin(), keys.end(), "eps"), keys.end());
}

TEST(TraceIo, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345.678901234567}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(TraceIo, CsvRoundTrip) {
  Trace trace;
  for (int t = 1; t <= 3; ++t) {
    StepRecord r;
    r.t = t;
    r.agent = "EMKF_TS";
    r.arm = t % 2;
    r.reward = 0.1 * t;
    r.inst_regret = 1.0 / t;
    r.cum_regret = 2.0 / t;
    if (t != 2) r.est_err = 0.3 * t;
    r.a3_monitor = t;
    r.x_norm = 1.5;
    r.xhat_norm = 1.25;
    trace.push_back(r);
  }
  std::stringstream ss;
  ss << kCsvHeader << '\n';
  write_csv_rows(ss, trace, 0.5, 42);
  const auto rows = read_csv(ss);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].t, trace[i].t);
    EXPECT_EQ(rows[i].agent, "EMKF_TS");
    EXPECT_EQ(rows[i].eps, 0.5);
    EXPECT_EQ(rows[i].seed, 42u);
    EXPECT_EQ(rows[i].reward, trace[i].reward);
    EXPECT_EQ(rows[i].inst_regret, trace[i].inst_regret);
    EXPECT_EQ(rows[i].est_err, trace[i].est_err);
  }
}

TEST(TraceIo, ReadRejectsWrongHeader) {
  std::stringstream ss("a,b,c\n1,2,3\n");
  EXPECT_THROW(read_csv(ss), std::runtime_error);
}

TEST(Experiment, WritesCsvAndSummary) {
  TempDir dir;
  auto cfg = config_from_key_values({{"T", "10"},
                                     {"d", "4"},
                                     {"k", "2"},
                                     {"K", "3"},
                                     {"L", "5"},
                                     {"seeds", "0"},
                                     {"agents", "EMKF_TS"},
                                     {"eps", "0.5"},
                                     {"out", dir.path().string()}});
  std::stringstream log;
  const auto result = run_experiment(cfg, log);
  EXPECT_TRUE(result.ok());

  std::ifstream in(dir.path() / "trace.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kCsvHeader);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 10);
  EXPECT_TRUE(fs::exists(dir.path() / "summary.json"));
  EXPECT_NE(slurp(dir.path() / "summary.json").find("\"EMKF_TS\""), std::string::npos);
}

TEST(Experiment, RerunIsByteIdentical) {
  TempDir a, b;
  const KeyValues base = {{"T", "40"}, {"d", "5"}, {"k", "2"}, {"K", "3"}, {"L", "10"},
                          {"seeds", "0,1"}, {"eps", "0.1,1.0"}, {"jobs", "2"}};
  auto ka = base, kb = base;
  ka["out"] = (a.path() / "x").string();
  kb["out"] = (b.path() / "x").string();
  kb["jobs"] = "1";
  std::stringstream log;
  run_experiment(config_from_key_values(ka), log);
  run_experiment(config_from_key_values(kb), log);
  EXPECT_EQ(slurp(a.path() / "x" / "trace.csv"), slurp(b.path() / "x" / "trace.csv"));
}

TEST(Experiment, PerRunFiles) {
  TempDir dir;
  auto cfg = config_from_key_values({{"T", "5"}, {"d", "3"}, {"k", "1"}, {"K", "2"},
                                     {"seeds", "0,1"}, {"agents", "TS_PCO"}, {"eps", "0.5"},
                                     {"per_run_csv", "true"}, {"json", "false"},
                                     {"out", dir.path().string()}});
  std::stringstream log;
  run_experiment(cfg, log);
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir.path())) {
    EXPECT_EQ(e.path().extension(), ".csv");
    ++files;
  }
  EXPECT_EQ(files, 2);
  EXPECT_FALSE(fs::exists(dir.path() / "summary.json"));
}

#ifdef EMKF_BENCH_EXE
int run_cli(const std::string& args) {
  const std::string cmd = std::string(EMKF_BENCH_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  const std::string out = " --out " + dir.path().string();
  EXPECT_EQ(run_cli("--T 5 --d 3 --k 1 --K 2 --seeds 0 --eps 0.5" + out), 0);
  EXPECT_EQ(run_cli("--eps -1" + out), 2);
  EXPECT_EQ(run_cli("--no-such-flag 1" + out), 2);
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("--config /nonexistent.cfg"), 2);
}
#endif

}  // namespace
}  // namespace emkf
