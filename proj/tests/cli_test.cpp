// Copyright 2026 The SSPSC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "cli.hpp"

#include <gtest/gtest.h>
#include <unistd.h>

#include <filesystem>
#include <sstream>

#include "sspsc/classifier.hpp"
#include "sspsc/errors.hpp"
#include "sspsc/io.hpp"

namespace sspsc::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("sspsc_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run_cli(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void synth(const std::string& sub, std::vector<std::string> extra = {}) {
    std::vector<std::string> args{"synth", "--out-dir", path(sub)};
    args.insert(args.end(), extra.begin(), extra.end());
    ASSERT_EQ(run_cli(args), kExitOk) << err_.str();
  }

  void write(const std::string& name, const std::string& text) { write_file_atomic(path(name), text); }

  // A two-feature model with theta = [1 0], w = 0, and the given target classifier.
  void write_model(const std::string& name, const Vector& varphi) {
    SavedModel model;
    model.hp.subspace_dim = 1;
    model.state.theta = Matrix{{1.0, 0.0}};
    model.state.w = Vector::Zero(1);
    model.state.phi = Vector::Zero(2);
    model.state.varphi = varphi;
    model.state.pi = Vector::Ones(3);
    model.state.recompute_adaptation();
    save_model(path(name), model);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, SynthIsDeterministicAndBalanced) {
  synth("a", {"--n1", "100", "--n2", "100", "--n3", "10"});
  synth("b", {"--n1", "100", "--n2", "100", "--n3", "10"});
  for (const char* f : {"source.csv", "target.csv", "target_full.csv"}) {
    EXPECT_EQ(read_file(dir_ / "a" / f), read_file(dir_ / "b" / f)) << f;
  }
  const CsvData source = read_csv(dir_ / "a" / "source.csv");
  EXPECT_EQ(std::count(source.labels.begin(), source.labels.end(), 1), 50);
  EXPECT_EQ(read_csv(dir_ / "a" / "target.csv").labels.size(), 10u);
  EXPECT_EQ(read_csv(dir_ / "a" / "target_full.csv").labels.size(), 100u);
}

TEST_F(CliTest, TrainWritesReloadableModelAndTrace) {
  synth("d");
  ASSERT_EQ(run_cli({"train", "--source", path("d/source.csv"), "--target", path("d/target.csv"), "--model",
                     path("m.txt")}),
            kExitOk)
      << err_.str();
  const SavedModel model = load_model(path("m.txt"));
  EXPECT_EQ(model.state.theta.rows(), 4);
  const nlohmann::json trace = nlohmann::json::parse(read_file(path("m.txt.trace.json")));
  EXPECT_GT(trace.at("iterations_run").get<int>(), 0);
  EXPECT_TRUE(trace.at("stop_reason") == "converged" || trace.at("stop_reason") == "max_iters");
  EXPECT_FALSE(fs::exists(path("m.txt.tmp")));
}

TEST_F(CliTest, InfeasibleDeltaIsAUsageError) {
  synth("d", {"--n1", "30", "--n2", "30", "--n3", "6"});
  EXPECT_EQ(run_cli({"train", "--source", path("d/source.csv"), "--target", path("d/target.csv"), "--model",
                     path("m.txt"), "--delta", "0.5"}),
            kExitUsage);
  EXPECT_NE(err_.str().find("δ < 1 makes π constraints infeasible"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("m.txt")));
}

TEST_F(CliTest, MalformedCsvNamesTheLine) {
  write("s.csv", "label,f0,f1\n1,0,1\n-1,2,oops\n");
  write("t.csv", "label,f0,f1\n1,0,1\n,2,3\n");
  EXPECT_EQ(run_cli({"train", "--source", path("s.csv"), "--target", path("t.csv"), "--model", path("m.txt")}),
            kExitUsage);
  EXPECT_NE(err_.str().find("s.csv:3:"), std::string::npos) << err_.str();
}

TEST_F(CliTest, ConfigAndFlagsAreExclusive) {
  synth("d", {"--n1", "30", "--n2", "30", "--n3", "6"});
  RunConfig c;
  c.source = path("d/source.csv");
  c.target = path("d/target.csv");
  c.model = path("m.txt");
  c.hp.max_outer_iters = 3;
  write("run.json", format_config(c));
  EXPECT_EQ(run_cli({"train", "--config", path("run.json"), "--c1", "5"}), kExitUsage);
  EXPECT_NE(err_.str().find("not both"), std::string::npos);
  EXPECT_EQ(run_cli({"train", "--config", path("run.json")}), kExitOk) << err_.str();
  const nlohmann::json trace = nlohmann::json::parse(read_file(path("m.txt.trace.json")));
  EXPECT_LE(trace.at("iterations_run").get<int>(), 3);
}

TEST_F(CliTest, ConfigRoundTripsAndRejectsUnknownFields) {
  RunConfig c;
  c.hp.c1 = 0.1;
  c.hp.subspace_dim = 3;
  c.hp.loss = LossKind::kHinge;
  c.hp.theta_selection = ThetaSelection::kLargest;
  c.label_budget = 20;
  c.grid = {0.01, 0.1, 1.0 / 3.0};
  c.sweep_param = "c3";
  const std::string text = format_config(c);
  EXPECT_EQ(format_config(parse_config(text)), text);
  EXPECT_THROW(parse_config(R"({"c4": 1})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"c1": "ten"})"), ValidationError);
  EXPECT_THROW(parse_config("{"), ValidationError);
}

TEST_F(CliTest, PredictConventions) {
  write_model("zero.txt", Vector::Zero(2));
  write("x.csv", "label,f0,f1\n,1,0\n,-3,5\n");
  ASSERT_EQ(run_cli({"predict", "--model", path("zero.txt"), "--input", path("x.csv"), "--out", path("p.csv")}),
            kExitOk)
      << err_.str();
  EXPECT_EQ(read_file(path("p.csv")), "score,label\n0,1\n0,1\n");

  write_model("two.txt", Vector{{2.0, 0.0}});
  write("e1.csv", "label,f0,f1\n,1,0\n");
  ASSERT_EQ(run_cli({"predict", "--model", path("two.txt"), "--input", path("e1.csv"), "--out", path("q.csv")}),
            kExitOk);
  EXPECT_EQ(read_file(path("q.csv")), "score,label\n2,1\n");
}

TEST_F(CliTest, PredictMatchesInProcessScores) {
  synth("d", {"--n1", "40", "--n2", "40", "--n3", "8"});
  ASSERT_EQ(run_cli({"train", "--source", path("d/source.csv"), "--target", path("d/target.csv"), "--model",
                     path("m.txt"), "--max-iters", "5"}),
            kExitOk);
  ASSERT_EQ(run_cli({"predict", "--model", path("m.txt"), "--input", path("d/target.csv"), "--out", path("p.csv")}),
            kExitOk);
  const SavedModel model = load_model(path("m.txt"));
  const CsvData x = read_csv(path("d/target.csv"));
  std::string expected = "score,label\n";
  for (Index r = 0; r < x.features.rows(); ++r) {
    const Prediction p = predict_target(model.state.varphi, x.features.row(r).transpose());
    expected += format_double(p.score) + "," + std::to_string(p.label) + "\n";
  }
  EXPECT_EQ(read_file(path("p.csv")), expected);
}

TEST_F(CliTest, PredictDimensionMismatch) {
  write_model("m.txt", Vector::Zero(2));
  write("x.csv", "label,f0,f1,f2\n,1,0,0\n");
  EXPECT_EQ(run_cli({"predict", "--model", path("m.txt"), "--input", path("x.csv"), "--out", path("p.csv")}),
            kExitUsage);
  EXPECT_NE(err_.str().find("dimension mismatch"), std::string::npos);
}

TEST_F(CliTest, EvalWritesReport) {
  synth("d", {"--n1", "50", "--n2", "50"});
  ASSERT_EQ(run_cli({"eval", "--source", path("d/source.csv"), "--target", path("d/target_full.csv"), "--report",
                     path("r.json"), "--max-iters", "5", "--seed", "4"}),
            kExitOk)
      << err_.str();
  const nlohmann::json report = nlohmann::json::parse(read_file(path("r.json")));
  EXPECT_EQ(report.at("folds").size(), 10u);
  EXPECT_EQ(report.at("seed"), 4);
  EXPECT_EQ(report.at("config").at("max_iters"), 5);
  EXPECT_GT(report.at("mean").get<double>(), 0.5);
}

TEST_F(CliTest, EvalNeedsFullyLabeledTarget) {
  synth("d", {"--n1", "30", "--n2", "30", "--n3", "6"});
  EXPECT_EQ(run_cli({"eval", "--source", path("d/source.csv"), "--target", path("d/target.csv")}), kExitUsage);
}

TEST_F(CliTest, SweepRowsFollowTheGrid) {
  synth("d", {"--n1", "40", "--n2", "40"});
  const std::vector<std::string> args{"sweep",  "--source",  path("d/source.csv"), "--target",
                                      path("d/target_full.csv"), "--param", "c1", "--grid",
                                      "0.01,0.1,1,10,100", "--max-iters", "3", "--c2", "0.5",
                                      "--report", path("s.csv")};
  ASSERT_EQ(run_cli(args), kExitOk) << err_.str();
  const std::string first = read_file(path("s.csv"));
  ASSERT_EQ(run_cli(args), kExitOk);
  EXPECT_EQ(read_file(path("s.csv")), first);

  std::istringstream lines(first);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "param,value,mean,stddev,c1,c2,c3");
  const std::vector<std::string> values{"0.01", "0.10000000000000001", "1", "10", "100"};
  for (const std::string& v : values) {
    ASSERT_TRUE(std::getline(lines, line));
    EXPECT_EQ(line.rfind("c1," + v + ",", 0), 0u) << line;
    EXPECT_NE(line.find("," + v + ",0.5,100"), std::string::npos) << line;
  }
  EXPECT_FALSE(std::getline(lines, line));
}

TEST_F(CliTest, SweepRejectsEmptyGridAndBadParam) {
  synth("d", {"--n1", "30", "--n2", "30"});
  EXPECT_EQ(run_cli({"sweep", "--source", path("d/source.csv"), "--target", path("d/target_full.csv"), "--param",
                     "c1"}),
            kExitUsage);
  EXPECT_NE(err_.str().find("grid is empty"), std::string::npos);
  EXPECT_EQ(run_cli({"sweep", "--source", path("d/source.csv"), "--target", path("d/target_full.csv"), "--param",
                     "k", "--grid", "1"}),
            kExitUsage);
}

TEST_F(CliTest, NumericFailureExitCode) {
  write("s.csv", "label,f0,f1\n1,1e200,1\n-1,-1e200,2\n1,3e200,0\n");
  write("t.csv", "label,f0,f1\n1,1e200,0\n,-2e200,1\n,1e200,-1\n");
  EXPECT_EQ(run_cli({"train", "--source", path("s.csv"), "--target", path("t.csv"), "--model", path("m.txt"),
                     "--loss", "exponential", "--neighbors", "1", "--subspace-dim", "1", "--step", "1"}),
            kExitNumeric)
      << err_.str();
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}), kExitUsage);
  EXPECT_EQ(run_cli({"train", "--bogus"}), kExitUsage);
  EXPECT_EQ(run_cli({"train", "--loss", "squared"}), kExitUsage);
  EXPECT_EQ(run_cli({"predict", "--model", path("missing.txt"), "--input", path("x.csv"), "--out", path("p.csv")}),
            kExitUsage);
  EXPECT_EQ(run_cli({"--help"}), kExitOk);
}

}  // namespace
}  // namespace sspsc::cli
