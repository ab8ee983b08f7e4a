#if DAGPLAN_HAVE_CLI

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "dagplan/cli.hpp"
#include "dagplan/errors.hpp"
#include "dagplan/metrics.hpp"
#include "dagplan/telemetry.hpp"
#include "scenarios.hpp"

using dagplan::testing::source_path;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dagplan::cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dagplan_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string config() const { return source_path("configs/scripted_toy3.json").string(); }
  std::string tasks() const { return source_path("fixtures/toy3").string(); }
  std::string traces() const { return (dir_ / "traces").string(); }

  std::vector<fs::path> trace_files() const {
    std::vector<fs::path> out;
    if (!fs::exists(traces())) return out;
    for (const auto& e : fs::directory_iterator(traces())) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
  }

  fs::path dir_;
};

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

}  // namespace

TEST_F(CliTest, RunWritesOneTracePerTask) {
  const auto json_out = (dir_ / "metrics.json").string();
  const Result r = cli({"run", "--method", "tdp", "--tasks", tasks(), "--config", config(), "--trace-dir", traces(),
                        "--json", json_out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(trace_files().size(), 3u);
  EXPECT_NE(r.out.find("Wrote 3 trace(s)"), std::string::npos);
  EXPECT_EQ(read_json(json_out).size(), 3u);
}

TEST_F(CliTest, ReplayReproducesLiveMetrics) {
  const auto live_json = (dir_ / "live.json").string();
  ASSERT_EQ(cli({"run", "--method", "plan-act", "--tasks", tasks(), "--config", config(), "--trace-dir", traces(),
                 "--json", live_json})
                .code,
            0);
  const json live = read_json(live_json);
  json replayed = json::array();
  for (const auto& file : trace_files()) {
    const auto out = (dir_ / (file.stem().string() + ".replay.json")).string();
    const Result r = cli({"replay", "--trace", file.string(), "--json", out});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const auto& m : read_json(out)) replayed.push_back(m);
  }
  ASSERT_EQ(replayed.size(), live.size());
  for (const auto& m : live) {
    const auto it = std::find_if(replayed.begin(), replayed.end(),
                                 [&](const json& x) { return x["run_id"] == m["run_id"]; });
    ASSERT_NE(it, replayed.end());
    EXPECT_EQ(*it, m);
  }
}

TEST_F(CliTest, CompareAndReportShowTheReductionColumn) {
  const Result c = cli({"compare", "--methods", "tdp,plan-act", "--tasks", tasks(), "--config", config(),
                        "--trace-dir", traces(), "--jobs", "2"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NE(c.out.find("reduction_vs_plan-act"), std::string::npos);
  EXPECT_EQ(trace_files().size(), 6u);

  const auto report_json = (dir_ / "report.json").string();
  const Result r = cli({"report", "--traces", traces() + "/*.jsonl", "--json", report_json});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("reduction_vs_plan-act"), std::string::npos);
  const json doc = read_json(report_json);
  EXPECT_EQ(doc["methods"].size(), 2u);
  EXPECT_EQ(c.out.substr(c.out.find("method")), r.out);
}

TEST_F(CliTest, MissingPathsAreNamed) {
  const std::string ghost = (dir_ / "ghost").string();
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"run", "--tasks", ghost, "--config", config(), "--trace-dir", traces()},
           {"run", "--tasks", tasks(), "--config", ghost, "--trace-dir", traces()},
           {"replay", "--trace", ghost},
           {"report", "--traces", ghost}}) {
    const Result r = cli(args);
    EXPECT_NE(r.code, 0) << args[0];
    EXPECT_NE(r.err.find(ghost), std::string::npos) << r.err;
  }
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_NE(cli({}).code, 0);
  EXPECT_NE(cli({"run", "--tasks", tasks(), "--config", config(), "--bogus"}).code, 0);
  EXPECT_NE(cli({"run", "--method", "magic", "--tasks", tasks(), "--config", config()}).code, 0);
  EXPECT_NE(cli({"compare", "--methods", "tdp,magic", "--tasks", tasks(), "--config", config(), "--trace-dir",
                 traces()})
                .code,
            0);
  EXPECT_NE(cli({"run", "--jobs", "0", "--tasks", tasks(), "--config", config()}).code, 0);
  EXPECT_TRUE(trace_files().empty());
}

TEST_F(CliTest, RemoteConfigWithoutCredentialIsRefused) {
  ::unsetenv("DAGPLAN_TEST_ABSENT_KEY");
  const auto path = dir_ / "remote.json";
  std::ofstream(path) << json{{"backend",
                               {{"type", "remote"},
                                {"endpoint", "https://example.invalid/v1/chat/completions"},
                                {"model", "m"},
                                {"api_key_env", "DAGPLAN_TEST_ABSENT_KEY"}}}}
                             .dump();
  const Result r = cli({"run", "--tasks", tasks(), "--config", path.string(), "--trace-dir", traces()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("DAGPLAN_TEST_ABSENT_KEY"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(traces()));
}

TEST(CliPaths, TaskSetResolution) {
  EXPECT_THROW(dagplan::cli::resolve_task_set("no_such_set_here"), dagplan::FixtureError);
  const fs::path root = fs::temp_directory_path() / "dagplan_cli_fixture_root";
  fs::create_directories(root / "only_in_env_root");
  ::setenv("DAGPLAN_FIXTURES", root.c_str(), 1);
  EXPECT_EQ(dagplan::cli::resolve_task_set("only_in_env_root"), root / "only_in_env_root");
  ::unsetenv("DAGPLAN_FIXTURES");
  fs::remove_all(root);
}

#endif
