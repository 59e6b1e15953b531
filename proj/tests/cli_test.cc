// Copyright 2026 The Robusta Authors
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

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"
#include "test_support.h"

namespace {

std::string Cli() { return ROBUSTA_CLI_PATH; }
std::string Demo(const std::string& file) { return std::string(ROBUSTA_DEMO_DIR) + "/" + file; }

int Exec(const std::string& args) {
  const int status = std::system((Cli() + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string DemoFlags() {
  return "--dataset " + Demo("tasks.jsonl") + " --embeddings " + Demo("vectors.txt");
}

TEST(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(Exec(""), 1);
  EXPECT_EQ(Exec("evaluate --bogus"), 1);
  EXPECT_EQ(Exec("evaluate " + DemoFlags()), 1);  // no --out
  EXPECT_EQ(Exec("frobnicate"), 1);
}

TEST(CliTest, RuntimeFailureExitsTwo) {
  robusta::testing::TempDir dir;
  EXPECT_EQ(Exec("evaluate --dataset /nonexistent --embeddings " + Demo("vectors.txt") +
                " --out " + dir.path().string()),
            2);
}

TEST(CliTest, MockCampaignSucceedsAndIsDeterministic) {
  robusta::testing::TempDir a, b;
  const std::string common = DemoFlags() + " --k 1 --mock-theta 2 --rng-seed 3";
  const std::string flags = common + " --n 2";
  ASSERT_EQ(Exec("evaluate " + flags + " --out " + a.path().string()), 0);
  ASSERT_EQ(Exec("evaluate " + flags + " --parallelism 3 --out " + b.path().string()), 0);
  const std::string report = Slurp(a.path() / "report.json");
  EXPECT_EQ(report, Slurp(b.path() / "report.json"));
  const auto j = nlohmann::json::parse(report);
  EXPECT_EQ(j["entries"].size(), 1u);
  EXPECT_TRUE(std::filesystem::exists(a.path() / "report.csv"));
  EXPECT_TRUE(std::filesystem::exists(a.path() / "points.jsonl"));
  // Re-running into the same directory resumes with nothing left to do.
  EXPECT_EQ(Exec("evaluate " + flags + " --out " + a.path().string()), 0);
  EXPECT_EQ(Slurp(a.path() / "report.json"), report);
  // A different configuration cannot reuse the directory.
  EXPECT_EQ(Exec("evaluate " + common + " --n 3 --out " + a.path().string()), 2);
}

TEST(CliTest, ConfigFileIsOverriddenByFlags) {
  robusta::testing::TempDir dir;
  const auto conf = dir.path() / "run.conf";
  std::ofstream(conf) << "# demo\nmetric = lev_char\nn = 2\nk = 1\nmock_theta = 6\nformat = json\n";
  const auto out = dir.path() / "out";
  ASSERT_EQ(Exec("evaluate --config " + conf.string() + " " + DemoFlags() +
                " --metric lev_word --mock-theta 2 --out " + out.string()),
            0);
  const auto run = nlohmann::json::parse(Slurp(out / "run.json"));
  EXPECT_EQ(run["config"]["metric"], "lev_word");
  EXPECT_EQ(run["config"]["params"]["n"], 2);
  EXPECT_TRUE(std::filesystem::exists(out / "report.json"));
  EXPECT_FALSE(std::filesystem::exists(out / "report.csv"));
  std::ofstream(conf, std::ios::app) << "no_such_key = 1\n";
  EXPECT_EQ(Exec("evaluate --config " + conf.string() + " " + DemoFlags() + " --out " +
                (dir.path() / "out2").string()),
            1);
}

TEST(CliTest, UnreachableModelExitsThree) {
  robusta::testing::TempDir dir;
  EXPECT_EQ(Exec("evaluate " + DemoFlags() +
                " --model remote --endpoint http://127.0.0.1:1/v1 --model-retries 0 --n 1 --k 1"
                " --out " + dir.path().string()),
            3);
}

TEST(CliTest, TreedistAndAnalyze) {
  robusta::testing::TempDir dir;
  const auto a = dir.path() / "a.java";
  const auto b = dir.path() / "b.java";
  std::ofstream(a) << "f(x) { return g(x); }";
  std::ofstream(b) << "f(x) { return h(x, y); }";
  const auto out = dir.path() / "d.txt";
  ASSERT_EQ(std::system((Cli() + " treedist " + a.string() + " " + b.string() + " > " +
                         out.string())
                            .c_str()),
            0);
  EXPECT_FALSE(Slurp(out).empty());
  const auto run = dir.path() / "run";
  ASSERT_EQ(Exec("evaluate " + DemoFlags() + " --n 2 --k 1 --out " + run.string()), 0);
  const auto analysis = dir.path() / "analysis";
  ASSERT_EQ(Exec("analyze --run " + run.string() + " --dataset " + Demo("tasks.jsonl") +
                " --out " + analysis.string()),
            0);
  EXPECT_EQ(Slurp(analysis / "report.json"), Slurp(run / "report.json"));
  EXPECT_EQ(Slurp(analysis / "report.csv"), Slurp(run / "report.csv"));
}

}  // namespace
