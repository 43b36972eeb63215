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

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "slcq/experiment.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> eta;
  std::optional<std::size_t> iterations;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Config JSON file or preset name (vtype_exp1, vtype_exp2)")->required();
  cmd->add_option("--output-dir", o.output_dir, "Override output_dir");
  cmd->add_option("--seed", o.seed, "Override evaluation.seed");
  cmd->add_option("--eta", o.eta, "Override training.eta");
  cmd->add_option("--iterations", o.iterations, "Override training.max_iterations");
}

slcq::ExperimentConfig resolve(const Overrides& o) {
  slcq::ExperimentConfig cfg = slcq::load_config(o.config);
  if (o.output_dir) cfg.output_dir = *o.output_dir;
  if (o.seed) cfg.evaluation.seed = *o.seed;
  if (o.eta) cfg.training.eta = *o.eta;
  if (o.iterations) cfg.training.max_iterations = *o.iterations;
  cfg.training.validate();
  return cfg;
}

void report_training(const slcq::TrainingRecord& rec) {
  std::printf("training: %zu iterations (%s), J_N %.6f -> %.6f\n", rec.iterations_run,
              std::string(slcq::to_string(rec.stop_reason)).c_str(), rec.j_history.front(), rec.j_history.back());
}

void report_evaluation(const slcq::EvaluationReport& rep) {
  std::printf("evaluation: %zu samples, fidelity mean %.6f min %.6f max %.6f\n", rep.per_sample.size(),
              rep.mean_fidelity, rep.min_fidelity, rep.max_fidelity);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slcq: sampling-based learning control for uncertain closed quantum systems"};
  app.require_subcommand(1);

  Overrides train_opts, eval_opts, run_opts, check_opts, show_opts;
  std::string control_file;
  bool corrupt = false;
  std::uint64_t check_seed = 1;

  auto* train_cmd = app.add_subcommand("train", "Train a robust control on the sampled augmented system");
  add_common(train_cmd, train_opts);

  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a control on random uncertainty samples");
  add_common(eval_cmd, eval_opts);
  eval_cmd->add_option("--control", control_file, "Control CSV (default: <output_dir>/control_final.csv)");

  auto* run_cmd = app.add_subcommand("run", "Train, then evaluate the trained control");
  add_common(run_cmd, run_opts);

  auto* check_cmd = app.add_subcommand("grad-check", "Compare the analytic gradient with finite differences");
  check_cmd->add_option("--config", check_opts.config, "Config JSON file or preset name")->required();
  check_cmd->add_option("--seed", check_seed, "Seed for the randomized instances");
  check_cmd->add_flag("--corrupt-gradient", corrupt, "Flip the analytic gradient sign (checker self-test)")
      ->group("");

  auto* show_cmd = app.add_subcommand("show-config", "Print the resolved config as JSON");
  show_cmd->add_option("--config", show_opts.config, "Config JSON file or preset name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) {
      const auto cfg = resolve(train_opts);
      report_training(slcq::cmd_train(cfg));
      std::printf("wrote %s\n", cfg.output_dir.string().c_str());
    } else if (*eval_cmd) {
      const auto cfg = resolve(eval_opts);
      const std::filesystem::path ctrl = control_file.empty() ? cfg.output_dir / "control_final.csv"
                                                              : std::filesystem::path(control_file);
      report_evaluation(slcq::cmd_evaluate(cfg, ctrl));
      std::printf("wrote %s\n", cfg.output_dir.string().c_str());
    } else if (*run_cmd) {
      const auto cfg = resolve(run_opts);
      const auto result = slcq::cmd_run(cfg);
      report_training(result.training);
      report_evaluation(result.evaluation);
      std::printf("wrote %s\n", cfg.output_dir.string().c_str());
    } else if (*check_cmd) {
      const auto cfg = slcq::load_config(check_opts.config);
      const auto rep = slcq::run_gradcheck(slcq::gradcheck_cases(cfg, check_seed), corrupt);
      for (const auto& c : rep.cases) std::printf("%-44s max rel err %.3e\n", c.label.c_str(), c.max_rel_error);
      std::printf("worst %.3e (tolerance %.0e): %s\n", rep.worst, slcq::kGradCheckTol, rep.passed ? "PASS" : "FAIL");
      return rep.passed ? 0 : 1;
    } else if (*show_cmd) {
      std::cout << slcq::config_to_json(slcq::load_config(show_opts.config)).dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "slcq: %s\n", e.what());
    return 2;
  }
  return 0;
}
