// Copyright 2026 The Fatou Workbench Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.h"
#include "fatou/families.h"
#include "fatou/sequence.h"

namespace fatou {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fatou_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const nlohmann::json& j) const {
    std::ofstream(path(name)) << j.dump(2);
  }
  fs::path dir_;
};

TEST_F(CliTest, BuildThenVerify) {
  const CliRun b = run({"build", "--alpha", "2", "--out", path("b2.json")});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(b.out.find("built X_2"), std::string::npos);
  const CliRun v = run({"verify", "--bundle", path("b2.json"), "--n-budget", "16"});
  EXPECT_EQ(v.code, 0) << v.out << v.err;
  const CliRun va = run({"verify", "--alpha", "w+1", "--n-budget", "8", "--components", "3",
                      "--depth", "3", "--json"});
  ASSERT_EQ(va.code, 0) << va.out << va.err;
  const auto j = nlohmann::json::parse(va.out);
  EXPECT_EQ(j.at("parameters").at("seed"), 20260101);
}

TEST_F(CliTest, RankOfExportedFirstWitness) {
  ASSERT_EQ(run({"export", "--alpha", "1", "--what", "truncation", "--out", path("t1.json")}).code,
            0);
  const CliRun r = run({"rank", "--tree", path("t1.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "2\n");
  EXPECT_EQ(run({"rank", "--alpha", "w"}).out, "w+1\n");
  ASSERT_EQ(run({"export", "--alpha", "w", "--out", path("tw.json")}).code, 0);
  EXPECT_EQ(run({"rank", "--tree", path("tw.json")}).out, "w+1\n");
  const CliRun dot = run({"export", "--alpha", "2", "--format", "dot"});
  EXPECT_EQ(dot.out.rfind("digraph", 0), 0u) << dot.out;
}

TEST_F(CliTest, GameRoundsAndExpectations) {
  const CliRun g = run({"game", "--alpha", "1", "--strategy-ii", "tree"});
  EXPECT_EQ(g.code, 0) << g.err;
  EXPECT_NE(g.out.find("round 1: I plays 0"), std::string::npos) << g.out;
  EXPECT_NE(g.out.find("winner: II"), std::string::npos) << g.out;
  EXPECT_EQ(run({"game", "--alpha", "1", "--strategy-ii", "tree", "--expect", "I"}).code, 1);
  const nlohmann::json z = [] {
    nlohmann::json j;
    to_json(j, SequenceSpec::canonical_z(Space::base()));
    return j;
  }();
  write("z.json", z);
  // The constant 1 is a certified reply against the canonical z.
  const CliRun p = run({"game", "--alpha", "1", "--strategy-ii", "pool", "--pool", "50", "--z",
                        path("z.json"), "--expect", "II"});
  EXPECT_EQ(p.code, 0) << p.out << p.err;
  EXPECT_NE(p.out.find("string certified"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitThree) {
  EXPECT_EQ(run({}).code, 3);
  EXPECT_EQ(run({"frobnicate"}).code, 3);
  EXPECT_EQ(run({"build"}).code, 3);
  EXPECT_EQ(run({"build", "--alpha", "w+"}).code, 3);
  EXPECT_EQ(run({"build", "--alpha", "0"}).code, 3);
  EXPECT_EQ(run({"rank", "--tree", path("missing.json")}).code, 3);
  EXPECT_EQ(run({"conv", "sideways", "--seq", path("missing.json")}).code, 3);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_NE(run({"--help"}).out.find("omega"), std::string::npos);
}

TEST_F(CliTest, ConvergenceVerdictsMapToExitCodes) {
  nlohmann::json z;
  to_json(z, SequenceSpec::canonical_z(Space::base()));
  write("z.json", z);
  EXPECT_EQ(run({"conv", "down0", "--seq", path("z.json")}).code, 0);
  EXPECT_EQ(run({"conv", "uniform", "--seq", path("z.json")}).code, 1);
  EXPECT_EQ(run({"conv", "down0-norm", "--seq", path("z.json")}).code, 1);
  nlohmann::json inv;
  to_json(inv, SequenceSpec::scaled(one(Space::base()), Polynomial::constant(Rational(1)),
                                    Polynomial::identity()));
  write("inv.json", inv);
  EXPECT_EQ(run({"conv", "down0-norm", "--seq", path("inv.json")}).code, 2);
  EXPECT_EQ(run({"conv", "down0-norm", "--seq", path("inv.json"), "--sigma-continuous"}).code, 0);
  EXPECT_EQ(run({"conv", "sigma", "--seq", path("z.json"), "--witness", path("z.json")}).code, 0);
}

TEST_F(CliTest, ReplayIsIdentical) {
  ASSERT_EQ(run({"game", "--alpha", "2", "--strategy-ii", "tree", "--out", path("t.json")}).code,
            0);
  const CliRun rt = run({"replay", path("t.json")});
  EXPECT_EQ(rt.code, 0) << rt.out << rt.err;
  EXPECT_EQ(rt.out.rfind("identical", 0), 0u);

  ASSERT_EQ(run({"verify", "--alpha", "3", "--n-budget", "8", "--out", path("r.json")}).code, 0);
  const CliRun rr = run({"replay", path("r.json")});
  EXPECT_EQ(rr.code, 0) << rr.out << rr.err;
  EXPECT_EQ(rr.out, "identical: overall pass\n");

  nlohmann::json t = nlohmann::json::parse(std::ifstream(path("t.json")));
  t["winner"] = t["winner"] == "I" ? "II" : "I";
  write("t2.json", t);
  EXPECT_EQ(run({"replay", path("t2.json")}).code, 1);
}

TEST_F(CliTest, SameSeedSameBytes) {
  const CliRun a = run({"verify", "--alpha", "2", "--sweep", "50", "--n-budget", "8", "--json"});
  const CliRun b = run({"verify", "--alpha", "2", "--sweep", "50", "--n-budget", "8", "--json"});
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
}

}  // namespace
}  // namespace fatou
