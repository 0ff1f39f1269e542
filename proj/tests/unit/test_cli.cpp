// Copyright 2026 The edgealloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "edgealloc/csv.hpp"
#include "edgealloc/dataset_io.hpp"
#include "edgealloc/instance_io.hpp"
#include "edgealloc/knapsack.hpp"

namespace edgealloc::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

const fs::path kFixture = fs::path(EDGEALLOC_FIXTURE_DIR) / "tiny_config.json";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("edgealloc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string out() const { return dir_.generic_string(); }
  fs::path dir_;
};

TEST(Config, DefaultsRoundTrip) {
  const auto c = parse_config("{}");
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{1}));
  EXPECT_EQ(c.dataset_path(), fs::path("edgealloc_out") / "dataset");
  EXPECT_FALSE(c.benchmark.weights.has_value());
  EXPECT_EQ(parse_config(c.to_json()).to_json(), c.to_json());
}

TEST(Config, OverridesApplyInOrder) {
  const auto c = parse_config(R"({"crl":{"episodes":10},"seeds":3})",
                              {{"crl.episodes", "20"}, {"crl.episodes", "30"}, {"output_dir", "x y"},
                               {"weights", R"({"w1":0.25})"}});
  EXPECT_EQ(c.benchmark.crl.episodes, 30u);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{3}));
  EXPECT_EQ(c.output_dir, fs::path("x y"));
  ASSERT_TRUE(c.benchmark.weights.has_value());
  EXPECT_EQ(c.benchmark.weights->w2(), 0.75);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config("[1]"), UsageError);
  EXPECT_THROW(parse_config(R"({"nope":1})"), UsageError);
  EXPECT_THROW(parse_config(R"({"crl":{"mode":"deep"}})"), UsageError);
  EXPECT_THROW(parse_config(R"({"weights":"auto"})"), UsageError);
  EXPECT_THROW(parse_config(R"({"seeds":[]})"), UsageError);
  EXPECT_THROW(parse_config(R"({"generator":{"n_days":-1}})"), UsageError);
  EXPECT_THROW(parse_config(R"({"policies":["oracle","magic"]})"), UsageError);
  EXPECT_THROW(parse_config("{}", {{"seeds.x", "1"}}), UsageError);
  EXPECT_THROW(parse_override("novalue"), UsageError);
  EXPECT_EQ(parse_override("a.b=c=d"), (Override{"a.b", "c=d"}));
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli({}).code, kUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kUsage);
  EXPECT_EQ(cli({"solve", "--day", "1"}).code, kUsage);
  const auto r = cli({"gen", "--set", "generator.nope=1", "-o", out()});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find("edgealloc: error:"), std::string::npos);
  EXPECT_EQ(cli({"gen", "-c", (dir_ / "missing.json").string()}).code, kUsage);
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(cli({"--help"}).code, kOk); }

TEST_F(CliTest, GenTrainRunSolveReport) {
  const std::string cfg = kFixture.string();
  auto r = cli({"gen", "-c", cfg, "-o", out()});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["n_days"], 24);
  EXPECT_EQ(j["task_rows"], 24 * 12);
  EXPECT_EQ(j["seed"], 7);
  for (const auto& f : dataset_files()) EXPECT_TRUE(fs::exists(dir_ / "dataset" / f)) << f;

  r = cli({"train", "-c", cfg, "-o", out()});
  ASSERT_EQ(r.code, kOk) << r.err;
  j = json::parse(r.out);
  EXPECT_EQ(j["crl_days"], 5);
  EXPECT_EQ(j["svm_epochs"], 60);
  EXPECT_TRUE(fs::exists(dir_ / kPolicyFile));
  EXPECT_TRUE(fs::exists(dir_ / kSvmModelFile));

  const std::string ds = (dir_ / "dataset").generic_string();
  r = cli({"run", "-c", cfg, "-o", out(), "--dataset", ds});
  ASSERT_EQ(r.code, kOk) << r.err;
  j = json::parse(r.out);
  EXPECT_EQ(j["rows"], 3 * 5);
  const auto rows = read_report(dir_ / kReportFile);
  EXPECT_EQ(rows.size(), 15u);
  const auto summary = json::parse(csv::read_text(dir_ / kSummaryFile));
  EXPECT_TRUE(summary["policies"].contains("dcta"));

  // Oracle solve agrees with branch and bound on the stored instance.
  const auto loaded = read_dataset(dir_ / "dataset");
  const int day = loaded.days[22].day_id;
  r = cli({"solve", "-c", cfg, "-o", out(), "--policy", "oracle", "--day", std::to_string(day)});
  ASSERT_EQ(r.code, kOk) << r.err;
  j = json::parse(r.out);
  EXPECT_EQ(j["objective"].get<double>(), solve_branch_bound(loaded.instance(22)).objective);
  EXPECT_EQ(j["policy"], "oracle");

  r = cli({"solve", "-c", cfg, "-o", out(), "--policy", "dcta", "--day", std::to_string(day)});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(json::parse(r.out).contains("weights"));

  // A day without a trained policy is a data problem.
  r = cli({"solve", "-c", cfg, "-o", out(), "--policy", "crl", "--day", std::to_string(loaded.days[0].day_id)});
  EXPECT_EQ(r.code, kData);

  r = cli({"report", (dir_ / kReportFile).string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(json::parse(r.out), summary);
}

TEST_F(CliTest, RunWithoutArtifactsIsDataError) {
  const std::string cfg = kFixture.string();
  ASSERT_EQ(cli({"gen", "-c", cfg, "-o", out()}).code, kOk);
  const std::string ds = (dir_ / "dataset").generic_string();
  EXPECT_EQ(cli({"run", "-c", cfg, "-o", out(), "--dataset", ds}).code, kData);
  // Baselines need no artifacts.
  const auto r = cli({"run", "-c", cfg, "-o", out(), "--dataset", ds, "--policy", "oracle", "--policy", "rm"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(json::parse(r.out)["rows"], 6);
}

TEST_F(CliTest, TrainedSplitMustMatch) {
  const std::string cfg = kFixture.string();
  ASSERT_EQ(cli({"gen", "-c", cfg, "-o", out()}).code, kOk);
  ASSERT_EQ(cli({"train", "-c", cfg, "-o", out()}).code, kOk);
  const std::string ds = (dir_ / "dataset").generic_string();
  EXPECT_EQ(cli({"run", "-c", cfg, "-o", out(), "--dataset", ds, "--set", "benchmark.knn_k=1"}).code, kData);
}

TEST_F(CliTest, SplitWithoutHistoryIsInfeasible) {
  const std::string cfg = kFixture.string();
  ASSERT_EQ(cli({"gen", "-c", cfg, "-o", out()}).code, kOk);
  EXPECT_EQ(cli({"train", "-c", cfg, "-o", out(), "--set", "benchmark.n_test_days=22"}).code,
            kInfeasible);
  EXPECT_EQ(cli({"run", "-c", cfg, "-o", out(), "--set", "generator.n_days=5"}).code, kInfeasible);
}

TEST_F(CliTest, MissingDatasetIsDataError) {
  EXPECT_EQ(cli({"train", "-c", kFixture.string(), "-o", out()}).code, kData);
}

TEST_F(CliTest, OracleCommandMatchesSolvers) {
  fs::create_directories(dir_);
  const TaskSet tasks{{0, 4, 2, 3.0, 100, 0}, {1, 4, 2, 1.0, 100, 0}, {2, 9, 1, 2.0, 100, 0}};
  DeviceSet devices{{0, 3, 4.75e-7, 3.25e-7, 1.42e-7, 1.42e-7, 1e7}, {1, 3, 4.75e-7, 3.25e-7, 1.42e-7, 1.42e-7, 1e7}};
  csv::write_text(dir_ / "tasks.csv", tasks_to_csv(tasks));
  csv::write_text(dir_ / "devices.csv", devices_to_csv(devices));
  const Instance in{tasks, devices, 10.0};
  for (const std::string method : {"brute", "bb", "greedy"}) {
    const auto r = cli({"oracle", "--tasks", (dir_ / "tasks.csv").string(), "--devices",
                        (dir_ / "devices.csv").string(), "--deadline", "10", "--method", method});
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto j = json::parse(r.out);
    const double expected =
        method == "greedy" ? solve_greedy_density(in).objective : solve_branch_bound(in).objective;
    EXPECT_EQ(j["objective"].get<double>(), expected) << method;
  }
  EXPECT_EQ(cli({"oracle", "--tasks", (dir_ / "nope.csv").string(), "--devices",
                 (dir_ / "devices.csv").string(), "--deadline", "10"})
                .code,
            kData);
  EXPECT_EQ(cli({"oracle", "--tasks", (dir_ / "tasks.csv").string(), "--devices",
                 (dir_ / "devices.csv").string(), "--deadline", "10", "--method", "magic"})
                .code,
            kUsage);
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  const std::string cfg = kFixture.string();
  std::vector<std::string> outputs;
  for (int pass = 0; pass < 2; ++pass) {
    fs::remove_all(dir_);
    ASSERT_EQ(cli({"gen", "-c", cfg, "-o", out()}).code, kOk);
    ASSERT_EQ(cli({"train", "-c", cfg, "-o", out()}).code, kOk);
    ASSERT_EQ(cli({"run", "-c", cfg, "-o", out(), "--dataset", (dir_ / "dataset").generic_string()}).code, kOk);
    std::string all;
    for (const char* f : {kPolicyFile, kSvmModelFile, kReportFile, kSummaryFile}) all += csv::read_text(dir_ / f);
    outputs.push_back(all);
  }
  EXPECT_EQ(outputs[0], outputs[1]);
}

}  // namespace
}  // namespace edgealloc::cli
