// Copyright 2026 The nba Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "nba/cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace nba {
namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "nba");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  CliResult r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path TempDir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("nba_cli_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

TEST(CliTest, RunWritesOutputs) {
  const auto dir = TempDir("run");
  WriteText(dir / "c.json",
            R"({"spec":{"process":"g_bounded","g":2},"n":100,"m":10000,
                "repetitions":4,"seed":3})");
  const CliResult r = Invoke({"run", "--config", (dir / "c.json").string(),
                           "--out", (dir / "out").string(), "--workers", "2",
                           "--log-level", "error"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "summary.json"));
  const std::string csv = Slurp(dir / "out" / "runs.csv");
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  EXPECT_EQ(lines, 5u);
}

TEST(CliTest, RunIsByteIdenticalAcrossWorkers) {
  const auto dir = TempDir("det");
  WriteText(dir / "c.json",
            R"({"spec":{"process":"sigma_noisy_load","sigma":2},"n":100,
                "m":5000,"repetitions":9})");
  ASSERT_EQ(Invoke({"run", "--config", (dir / "c.json").string(), "--out",
                 (dir / "a").string(), "--workers", "1", "--log-level",
                 "error"})
                .code,
            kExitOk);
  ASSERT_EQ(Invoke({"run", "--config", (dir / "c.json").string(), "--out",
                 (dir / "b").string(), "--workers", "8", "--log-level",
                 "error"})
                .code,
            kExitOk);
  EXPECT_EQ(Slurp(dir / "a" / "runs.csv"), Slurp(dir / "b" / "runs.csv"));
  EXPECT_EQ(Slurp(dir / "a" / "summary.json"),
            Slurp(dir / "b" / "summary.json"));
}

TEST(CliTest, ConfigErrors) {
  const auto dir = TempDir("bad");
  WriteText(dir / "bad.json", "{\n \"n\": 1,,\n}");
  CliResult r = Invoke({"run", "--config", (dir / "bad.json").string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("bad.json:2:"), std::string::npos) << r.err;

  WriteText(dir / "n0.json", R"({"spec":{"process":"two_choice"},"n":0,"m":1})");
  r = Invoke({"run", "--config", (dir / "n0.json").string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("n must be >= 1"), std::string::npos) << r.err;

  EXPECT_EQ(Invoke({"run", "--config", (dir / "missing.json").string()}).code,
            kExitConfig);
  EXPECT_EQ(Invoke({"run", "--preset", "bogus"}).code, kExitConfig);
  EXPECT_EQ(Invoke({"frobnicate"}).code, kExitConfig);
  EXPECT_EQ(Invoke({}).code, kExitConfig);
}

TEST(CliTest, FailedAssertionIsViolation) {
  const auto dir = TempDir("assert");
  WriteText(dir / "c.json",
            R"({"spec":{"process":"one_choice"},"n":10,"m":100,
                "repetitions":3,"assertion":{"min_gap":1000}})");
  EXPECT_EQ(Invoke({"run", "--config", (dir / "c.json").string(), "--out",
                 (dir / "o").string(), "--log-level", "error"})
                .code,
            kExitViolation);
}

TEST(CliTest, Sweep) {
  const auto dir = TempDir("sweep");
  WriteText(dir / "s.json",
            R"({"base":{"spec":{"process":"g_bounded","g":1},"n":50,"m":5000,
                "repetitions":2},"parameter":"g","values":[1,2]})");
  const CliResult r = Invoke({"sweep", "--config", (dir / "s.json").string(),
                           "--out", (dir / "o").string(), "--log-level",
                           "error"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "o" / "sweep.csv"));
}

TEST(CliTest, PresetDump) {
  const CliResult r = Invoke({"preset", "table4"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("\"b_batch\""), std::string::npos);
  EXPECT_EQ(Invoke({"preset", "nope"}).code, kExitConfig);
}

TEST(CliTest, Verify) {
  CliResult r = Invoke({"verify", "--trials", "100", "--suite", "a,d"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("\"super_exp\""), std::string::npos);
  EXPECT_NE(r.out.find("\"worst_margin\""), std::string::npos);
  r = Invoke({"verify", "--trials", "50", "--negative-control"});
  EXPECT_EQ(r.code, kExitViolation);
  EXPECT_EQ(Invoke({"verify", "--trials", "0"}).code, kExitConfig);
  EXPECT_EQ(Invoke({"verify", "--suite", "zzz"}).code, kExitConfig);
}

TEST(CliTest, Constants) {
  CliResult r = Invoke({"constants", "--g", "4", "--n", "100000"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("\"kappa\""), std::string::npos);
  EXPECT_NE(r.out.find("365"), std::string::npos);
  EXPECT_NE(r.out.find("216"), std::string::npos);
  EXPECT_NE(r.out.find("\"layer_plan\": null"), std::string::npos);

  r = Invoke({"constants", "--g", "2", "--log-n", "1.4e15"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("\"k\": 7"), std::string::npos) << r.out;

  r = Invoke({"constants", "--g", "1", "--n", "100000"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("requires g > 1"), std::string::npos);

  EXPECT_EQ(Invoke({"constants", "--g", "0"}).code, kExitConfig);
  EXPECT_EQ(Invoke({"constants", "--g", "3", "--n", "1"}).code, kExitConfig);
}

}  // namespace
}  // namespace nba
