#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "schatten_lab/fuzz.hpp"
#include "schatten_lab/io.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace schatten_lab;

struct CliResult {
  int code;
  std::string out;
};

// Runs the CLI through the shell; stderr is folded into out when asked.
CliResult run(const std::string& args, bool with_stderr = false, const std::string& env = "") {
  const std::string cmd = env + " '" SCHATTEN_LAB_CLI "' " + args + (with_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> lines_of(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("schatten-lab-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, FuzzWritesRecordsAndSummary) {
  const CliResult r = run("fuzz --inequality thm1 --trials 50 --dims 2,4 --p-grid default --seed 1 --out " + path("a.jsonl"));
  EXPECT_EQ(r.code, 0);
  const auto lines = lines_of(path("a.jsonl"));
  ASSERT_EQ(lines.size(), 1 + 50 * default_p_grid().size());
  const json header = json::parse(lines.front())["header"];
  EXPECT_EQ(header["seed"], 1);
  EXPECT_EQ(header["command"], "fuzz");
  const json summary = json::parse(std::ifstream(path("a.jsonl.summary.json")));
  EXPECT_EQ(summary["failures"], 0);
  EXPECT_EQ(summary["records"], 50 * default_p_grid().size());
  EXPECT_FALSE(fs::exists(path("a.jsonl.tmp")));
}

TEST_F(Cli, FuzzBodiesAreDeterministic) {
  for (const char* name : {"a.jsonl", "b.jsonl"}) {
    ASSERT_EQ(run("fuzz --inequality thm2 --trials 20 --dims 1,3 --p-grid 1,1.5,2,3 --seed 9 --jobs 2 --out " +
                  path(name))
                  .code,
              0);
  }
  auto a = lines_of(path("a.jsonl"));
  auto b = lines_of(path("b.jsonl"));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]) << i;
}

TEST_F(Cli, EveryRecordRevalidates) {
  ASSERT_EQ(run("fuzz --inequality thm1 --trials 15 --dims 3 --p-grid 1.5,2.5,inf --sampler boundary --seed 4 --out " +
                path("r.jsonl"))
                .code,
            0);
  const auto lines = lines_of(path("r.jsonl"));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const CheckRecord r = io::record_from_json(json::parse(lines[i]));
    const CheckRecord again = evaluate_trial(FuzzTarget::Theorem1, r.seed, r.n, r.p, SamplerMode::Boundary);
    EXPECT_NEAR(again.lhs, r.lhs, 1e-12 * r.scale);
    EXPECT_NEAR(again.rhs, r.rhs, 1e-12 * r.scale);
  }
}

TEST_F(Cli, CsvSummary) {
  ASSERT_EQ(run("fuzz --inequality gross --trials 5 --p-grid 1,1.5,2 --seed 2 --format csv --out " + path("g.jsonl"))
                .code,
            0);
  const auto lines = lines_of(path("g.jsonl.summary.csv"));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0].substr(0, 14), "inequality_id,");
  EXPECT_EQ(lines[1].substr(0, 6), "gross,");
}

TEST_F(Cli, ViolationsExitOne) {
  // a negative tolerance demands a strictly positive margin, which the p = 1 equality case cannot give
  const CliResult r = run("fuzz --inequality thm1 --trials 3 --p-grid 1 --seed 1 --tol-rel -1e-3 --out " + path("v.jsonl"));
  EXPECT_EQ(r.code, 1);
  const json first = json::parse(lines_of(path("v.jsonl"))[1]);
  EXPECT_FALSE(first["pass"].get<bool>());
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(run("fuzz --trials 0 --seed 1").code, 2);
  EXPECT_EQ(run("fuzz --p-grid 1,abc --seed 1").code, 2);
  EXPECT_EQ(run("fuzz --inequality thm9 --seed 1").code, 2);
  EXPECT_EQ(run("fuzz --inequality thm2 --p-grid inf --seed 1").code, 2);
  EXPECT_EQ(run("nu-p --channel '{\"kind\":\"nope\"}' --seed 1").code, 2);
  EXPECT_EQ(run("nu-p --channel '{not json' --seed 1").code, 2);
  EXPECT_EQ(run("").code, 2);
  const CliResult diag = run("check --block '{\"n\":1}' --seed 1", true);
  EXPECT_EQ(diag.code, 2);
  EXPECT_NE(diag.out.find("missing field"), std::string::npos);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, NonConvergenceExitsThree) {
  // amplitude damping with gamma = 1/2; unlike the depolarizing channel its output norm depends on the input
  const std::string channel =
      R"({"kind":"kraus","ops":[{"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[0.7071067811865476,0]]},)"
      R"({"rows":2,"cols":2,"data":[[0,0],[0.7071067811865476,0],[0,0],[0,0]]}]})";
  const CliResult r = run("nu-p --channel '" + channel + "' --p 3 --restarts 4 --max-iters 1 --seed 1");
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(json::parse(r.out)["result"]["converged"].get<bool>());
}

TEST_F(Cli, SeedFallsBackToEnvironmentThenRandom) {
  const CliResult env = run("check --inequality gross --p 1.5", false, "SCHATTEN_LAB_SEED=123");
  EXPECT_EQ(env.code, 0);
  EXPECT_EQ(json::parse(env.out.substr(0, env.out.find('\n')))["header"]["seed"], 123);
  const CliResult drawn = run("check --inequality gross --p 1.5", true, "env -u SCHATTEN_LAB_SEED");
  EXPECT_EQ(drawn.code, 0);
  EXPECT_NE(drawn.out.find("seed: "), std::string::npos);
  EXPECT_EQ(run("check --inequality gross --p 1.5", false, "SCHATTEN_LAB_SEED=abc").code, 2);
}

TEST_F(Cli, CheckFromBlockFile) {
  const json block = {{"n", 1},
                      {"X", {{"rows", 1}, {"cols", 1}, {"data", {{2.0, 0.0}}}}},
                      {"Y", {{"rows", 1}, {"cols", 1}, {"data", {{1.0, 0.0}}}}},
                      {"Z", {{"rows", 1}, {"cols", 1}, {"data", {{3.0, 0.0}}}}}};
  std::ofstream(path("block.json")) << block.dump();
  const CliResult r = run("check --inequality thm1 --p 1,2,inf --block @" + path("block.json"));
  EXPECT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  int count = 0;
  while (std::getline(in, line)) {
    const json rec = json::parse(line);
    EXPECT_TRUE(rec["pass"].get<bool>());
    ++count;
  }
  EXPECT_EQ(count, 3);
}

TEST_F(Cli, NuPMatchesDepolarizingClosedForm) {
  const CliResult r = run("nu-p --channel '{\"kind\":\"depolarizing\",\"lambda\":0.5}' --p 3 --seed 1");
  EXPECT_EQ(r.code, 0);
  const double expect = std::cbrt(0.75 * 0.75 * 0.75 + 0.25 * 0.25 * 0.25);
  EXPECT_NEAR(json::parse(r.out)["result"]["value"].get<double>(), expect, 1e-6);
}

TEST_F(Cli, SMinAndGap) {
  const CliResult s = run("smin --channel '{\"kind\":\"depolarizing\",\"lambda\":0.5}' --seed 1 --restarts 8");
  EXPECT_EQ(s.code, 0);
  EXPECT_NEAR(json::parse(s.out)["result"]["value"].get<double>(), -(0.75 * std::log(0.75) + 0.25 * std::log(0.25)),
              1e-9);
  const CliResult g = run("gap --channel '{\"kind\":\"depolarizing\",\"lambda\":0.5}' --channel2 "
                    "'{\"kind\":\"depolarizing\",\"lambda\":0.3}' --p 3 --seed 1 --restarts 8");
  EXPECT_EQ(g.code, 0);
  const json j = json::parse(g.out);
  EXPECT_LE(j["gap"].get<double>(), 1e-5 * j["nu_product"].get<double>());
}

TEST_F(Cli, ScanThresholdFindsWernerHolevoCrossing) {
  const CliResult r = run("scan-threshold --channel '{\"kind\":\"werner_holevo\",\"d\":3}' --p-from 4.5 --p-to 5.0 --step "
                    "0.01 --seed 1 --restarts 4 --out " +
                    path("scan.json"));
  EXPECT_EQ(r.code, 0);
  const json j = json::parse(std::ifstream(path("scan.json")));
  EXPECT_EQ(j["sign_changes"], 1);
  EXPECT_EQ(j["points"].size(), 51u);
  const double first = j["first_positive_p"].get<double>();
  EXPECT_GE(first, 4.70);
  EXPECT_LE(first, 4.90);
}

TEST_F(Cli, ReportAggregatesMinMargins) {
  ASSERT_EQ(run("fuzz --inequality lemma3 --trials 10 --p-grid 1.3,1.7 --seed 3 --out " + path("l3.jsonl")).code, 0);
  ASSERT_EQ(run("fuzz --inequality gross --trials 10 --p-grid 1.3 --seed 3 --out " + path("g.jsonl")).code, 0);
  const CliResult r = run("report " + path("l3.jsonl") + " " + path("g.jsonl") + " --out " + path("report.md"));
  EXPECT_EQ(r.code, 0);
  std::stringstream ss;
  ss << std::ifstream(path("report.md")).rdbuf();
  const std::string md = ss.str();
  EXPECT_NE(md.find("| LEMMA3 | 1.3 | 10 | 0 | 0 |"), std::string::npos) << md;
  EXPECT_NE(md.find("| LEMMA3 | 1.7 | 10 | 0 | 0 |"), std::string::npos) << md;
  EXPECT_NE(md.find("| GROSS | 1.3 | 10 | 0 | 0 |"), std::string::npos) << md;
  EXPECT_NE(md.find("(seed 3)"), std::string::npos);

  std::ofstream(path("broken.jsonl")) << "{\"inequality_id\": \"THM1A\"}\n";
  const CliResult bad = run("report " + path("broken.jsonl"), true);
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("broken.jsonl:1"), std::string::npos);
}

}  // namespace
