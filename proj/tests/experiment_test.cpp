// Copyright 2026 The slcq Authors
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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "slcq/experiment.hpp"
#include "test_support.hpp"

namespace slcq {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t data_rows(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  return n - 1;
}

class ExperimentTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("slcq_experiment_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  ExperimentConfig small_config() const {
    ExperimentConfig cfg = preset_vtype_exp1();
    cfg.control.slices = 40;
    cfg.training.max_iterations = 15;
    cfg.evaluation.count = 30;
    cfg.output_dir = dir_;
    return cfg;
  }

  fs::path dir_;
};

TEST_F(ExperimentTest, ControlCsvRoundTripIsExact) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    ControlField c = testing::random_control(3, 17, 2.5, rng, 1e3);
    c(0, 0) = 1.0 / 3.0;
    c(2, 16) = -5e-310;  // subnormal
    write_control_csv(dir_ / "c.csv", c);
    EXPECT_EQ(read_control_csv(dir_ / "c.csv", 3, 17, 2.5), c);
  }
}

TEST_F(ExperimentTest, ControlCsvShapeErrors) {
  write_control_csv(dir_ / "c.csv", initial_control_sin(4, 10, 5.0));
  EXPECT_THROW(read_control_csv(dir_ / "c.csv", 3, 10, 5.0), std::invalid_argument);
  EXPECT_THROW(read_control_csv(dir_ / "c.csv", 4, 11, 5.0), std::invalid_argument);
  EXPECT_THROW(read_control_csv(dir_ / "c.csv", 4, 9, 5.0), std::invalid_argument);
  EXPECT_THROW(read_control_csv(dir_ / "missing.csv", 4, 10, 5.0), std::runtime_error);
  std::ofstream(dir_ / "bad.csv") << "t,u_1\n0.5,abc\n";
  EXPECT_THROW(read_control_csv(dir_ / "bad.csv", 1, 1, 1.0), std::invalid_argument);
}

TEST_F(ExperimentTest, TrainWritesArtifacts) {
  const auto cfg = small_config();
  const auto rec = cmd_train(cfg);
  for (const char* f : {"training_log.csv", "control_initial.csv", "control_final.csv", "train_summary.json"})
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  EXPECT_EQ(data_rows(dir_ / "control_final.csv"), 40u);
  EXPECT_EQ(data_rows(dir_ / "control_initial.csv"), 40u);
  EXPECT_EQ(data_rows(dir_ / "training_log.csv"), rec.j_history.size());
  EXPECT_EQ(slurp(dir_ / "control_final.csv").substr(0, 20), "t,u_1,u_2,u_3,u_4\n0.");

  const auto summary = nlohmann::json::parse(slurp(dir_ / "train_summary.json"));
  EXPECT_EQ(summary["iterations_run"], rec.iterations_run);
  EXPECT_EQ(summary["final_J_N"].get<double>(), rec.j_history.back());
  EXPECT_EQ(summary["stop_reason"], "max_iterations");
  EXPECT_EQ(summary["config"]["evaluation"]["seed"], cfg.evaluation.seed);
  EXPECT_EQ(summary["training_samples"], 7);
}

TEST_F(ExperimentTest, ZeroEtaKeepsInitialControl) {
  auto cfg = small_config();
  cfg.training.eta = 0.0;
  cmd_train(cfg);
  EXPECT_EQ(slurp(dir_ / "control_final.csv"), slurp(dir_ / "control_initial.csv"));
}

TEST_F(ExperimentTest, EvaluateFromFileMatchesInMemory) {
  const auto cfg = small_config();
  const auto result = cmd_run(cfg);
  const auto in_memory = evaluate(cfg.system, cfg.uncertainty, result.training.final_control, test_samples(cfg),
                                  cfg.evaluation.histogram_bins);
  ASSERT_EQ(result.evaluation.per_sample.size(), in_memory.per_sample.size());
  for (std::size_t i = 0; i < in_memory.per_sample.size(); ++i)
    EXPECT_EQ(result.evaluation.per_sample[i].fidelity, in_memory.per_sample[i].fidelity);
  EXPECT_EQ(result.evaluation.mean_fidelity, in_memory.mean_fidelity);
  EXPECT_EQ(data_rows(dir_ / "evaluation.csv"), 30u);

  const auto summary = nlohmann::json::parse(slurp(dir_ / "eval_summary.json"));
  EXPECT_EQ(summary["mean_fidelity"].get<double>(), in_memory.mean_fidelity);
  EXPECT_EQ(summary["count"], 30);
  EXPECT_EQ(summary["histogram"]["counts"].size(), 50u);
}

TEST_F(ExperimentTest, EvaluateRejectsWrongShape) {
  const auto cfg = small_config();
  EXPECT_THROW(cmd_evaluate(cfg, initial_control_sin(4, 41, 5.0)), std::invalid_argument);
  EXPECT_THROW(cmd_evaluate(cfg, initial_control_sin(3, 40, 5.0)), std::invalid_argument);
  write_control_csv(dir_ / "wrong.csv", initial_control_sin(4, 20, 5.0));
  EXPECT_THROW(cmd_evaluate(cfg, dir_ / "wrong.csv"), std::invalid_argument);
}

TEST_F(ExperimentTest, NoUncertaintyGivesIdenticalFidelityColumn) {
  auto cfg = small_config();
  cfg.uncertainty.omega_bound = 0.0;
  cfg.evaluation.count = 200;
  cmd_evaluate(cfg, initial_control_sin(4, 40, 5.0));
  std::ifstream in(dir_ / "evaluation.csv");
  std::string line;
  std::getline(in, line);
  std::set<std::string> fid;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    fid.insert(line.substr(line.rfind(',') + 1));
    ++rows;
  }
  EXPECT_EQ(rows, 200u);
  EXPECT_EQ(fid.size(), 1u);
}

TEST_F(ExperimentTest, InitFromControlFile) {
  auto cfg = small_config();
  std::mt19937_64 rng(12);
  const auto start = testing::random_control(4, 40, 5.0, rng);
  write_control_csv(dir_ / "start.csv", start);
  cfg.control.init = InitKind::file;
  cfg.control.init_file = dir_ / "start.csv";
  EXPECT_EQ(initial_control(cfg), start);
  cfg.control.init = InitKind::zero;
  EXPECT_EQ(initial_control(cfg), ControlField(4, 40, 5.0));
}

TEST_F(ExperimentTest, UnwritableOutputDirFails) {
  auto cfg = small_config();
  fs::create_directories(dir_);
  std::ofstream(dir_ / "plain_file") << "x";
  cfg.output_dir = dir_ / "plain_file" / "sub";
  cfg.training.max_iterations = 1;
  EXPECT_THROW(cmd_train(cfg), std::runtime_error);
}

TEST(GradCheck, PresetPassesAndCorruptionFails) {
  const auto cases = gradcheck_cases(preset_vtype_exp1(), 1);
  EXPECT_EQ(cases.size(), 23u);
  const auto ok = run_gradcheck(cases);
  EXPECT_TRUE(ok.passed) << "worst " << ok.worst;
  EXPECT_LE(ok.worst, kGradCheckTol);
  const auto bad = run_gradcheck(cases, /*corrupt=*/true);
  EXPECT_FALSE(bad.passed);
  EXPECT_GT(bad.worst, 1.0);
}

TEST(GradCheck, TwoLevelSingleControlInstance) {
  std::mt19937_64 rng(8);
  const auto c = random_gradcheck_case(2, 1, 10, rng, "d=2");
  EXPECT_TRUE(run_gradcheck({c}).passed);
}

}  // namespace
}  // namespace slcq
