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

#pragma once

// Experiment drivers behind the slcq subcommands: train, evaluate and the
// gradient check, plus the CSV/JSON artifacts they write.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "slcq/config.hpp"
#include "slcq/learn.hpp"

namespace slcq {

/// 17 significant digits: enough to round-trip any double.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline double parse_double(const std::string& s, const std::string& where) {
  double x = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc{} || ptr != last) throw std::invalid_argument(where + ": cannot parse '" + s + "' as a number");
  return x;
}

}  // namespace detail

/// Header `t,u_1,...,u_M`, one row per slice at its midpoint time.
inline void write_control_csv(const std::filesystem::path& path, const ControlField& ctrl) {
  auto out = detail::open_output(path);
  out << 't';
  for (std::size_t m = 0; m < ctrl.channels(); ++m) out << ",u_" << (m + 1);
  out << '\n';
  for (std::size_t q = 0; q < ctrl.slices(); ++q) {
    out << format_double(ctrl.midpoint(q));
    for (std::size_t m = 0; m < ctrl.channels(); ++m) out << ',' << format_double(ctrl(m, q));
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

/// Reads a control CSV and checks it against the expected M x Q shape.
inline ControlField read_control_csv(const std::filesystem::path& path, std::size_t channels, std::size_t slices,
                                     double horizon) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open control file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("control file " + path.string() + " is empty");
  const auto header = detail::split_csv(line);
  if (header.size() != channels + 1)
    throw std::invalid_argument("control file " + path.string() + " has " + std::to_string(header.size() - 1) +
                                " control columns, expected " + std::to_string(channels));
  ControlField ctrl(channels, slices, horizon);
  std::size_t q = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (q >= slices)
      throw std::invalid_argument("control file " + path.string() + " has more than " + std::to_string(slices) +
                                  " rows");
    const auto cells = detail::split_csv(line);
    if (cells.size() != channels + 1)
      throw std::invalid_argument("control file " + path.string() + " row " + std::to_string(q + 1) +
                                  " has the wrong column count");
    for (std::size_t m = 0; m < channels; ++m)
      ctrl(m, q) = detail::parse_double(cells[m + 1], path.string() + " row " + std::to_string(q + 1));
    ++q;
  }
  if (q != slices)
    throw std::invalid_argument("control file " + path.string() + " has " + std::to_string(q) + " rows, expected " +
                                std::to_string(slices));
  if (!ctrl.all_finite()) throw std::invalid_argument("control file " + path.string() + " has non-finite values");
  return ctrl;
}

inline ControlField initial_control(const ExperimentConfig& cfg) {
  const std::size_t m = cfg.system.num_controls();
  switch (cfg.control.init) {
    case InitKind::sin:
      return initial_control_sin(m, cfg.control.slices, cfg.control.horizon);
    case InitKind::zero:
      return ControlField(m, cfg.control.slices, cfg.control.horizon);
    case InitKind::file:
      break;
  }
  return read_control_csv(cfg.control.init_file, m, cfg.control.slices, cfg.control.horizon);
}

inline std::vector<UncertaintySample> training_samples(const ExperimentConfig& cfg) {
  return training_grid(cfg.uncertainty, cfg.grid);
}

inline std::vector<UncertaintySample> test_samples(const ExperimentConfig& cfg) {
  return random_test_samples(cfg.uncertainty, {cfg.evaluation.count, cfg.evaluation.seed});
}

/// Trains and writes training_log.csv, control_initial.csv,
/// control_final.csv and train_summary.json into cfg.output_dir.
inline TrainingRecord cmd_train(const ExperimentConfig& cfg) {
  const auto& dir = cfg.output_dir;
  const ControlField init = initial_control(cfg);
  const auto samples = training_samples(cfg);
  TrainingRecord rec = train(cfg.system, cfg.uncertainty, samples, init, cfg.training);

  {
    auto out = detail::open_output(dir / "training_log.csv");
    out << "iteration,J_N\n";
    for (std::size_t k = 0; k < rec.j_history.size(); ++k) out << k << ',' << format_double(rec.j_history[k]) << '\n';
    if (!out) throw std::runtime_error("failed writing training_log.csv");
  }
  write_control_csv(dir / "control_initial.csv", init);
  write_control_csv(dir / "control_final.csv", rec.final_control);

  nlohmann::json summary = {
      {"config", config_to_json(cfg)},
      {"settings",
       {{"eta", cfg.training.eta},
        {"max_iterations", cfg.training.max_iterations},
        {"plateau_tol", cfg.training.plateau_tol},
        {"plateau_window", cfg.training.plateau_window}}},
      {"training_samples", samples.size()},
      {"iterations_run", rec.iterations_run},
      {"initial_J_N", rec.j_history.front()},
      {"final_J_N", rec.j_history.back()},
      {"stop_reason", to_string(rec.stop_reason)},
  };
  detail::write_json(dir / "train_summary.json", summary);
  return rec;
}

/// Evaluates ctrl on the config's random test samples and writes
/// evaluation.csv and eval_summary.json into cfg.output_dir.
inline EvaluationReport cmd_evaluate(const ExperimentConfig& cfg, const ControlField& ctrl) {
  if (ctrl.channels() != cfg.system.num_controls() || ctrl.slices() != cfg.control.slices)
    throw std::invalid_argument("control shape does not match the config (expected " +
                                std::to_string(cfg.system.num_controls()) + " channels x " +
                                std::to_string(cfg.control.slices) + " slices)");
  const auto& dir = cfg.output_dir;
  const EvaluationReport rep =
      evaluate(cfg.system, cfg.uncertainty, ctrl, test_samples(cfg), cfg.evaluation.histogram_bins);

  {
    auto out = detail::open_output(dir / "evaluation.csv");
    out << "index,omega,theta,fidelity\n";
    for (std::size_t i = 0; i < rep.per_sample.size(); ++i) {
      const auto& s = rep.per_sample[i];
      out << i << ',' << format_double(s.sample.omega) << ',' << format_double(s.sample.theta) << ','
          << format_double(s.fidelity) << '\n';
    }
    if (!out) throw std::runtime_error("failed writing evaluation.csv");
  }

  nlohmann::json summary = {
      {"config", config_to_json(cfg)},
      {"seed", cfg.evaluation.seed},
      {"count", rep.per_sample.size()},
      {"mean_fidelity", rep.mean_fidelity},
      {"min_fidelity", rep.min_fidelity},
      {"max_fidelity", rep.max_fidelity},
      {"histogram", {{"edges", rep.histogram.edges}, {"counts", rep.histogram.counts}}},
  };
  detail::write_json(dir / "eval_summary.json", summary);
  return rep;
}

inline EvaluationReport cmd_evaluate(const ExperimentConfig& cfg, const std::filesystem::path& control_file) {
  return cmd_evaluate(cfg, read_control_csv(control_file, cfg.system.num_controls(), cfg.control.slices,
                                            cfg.control.horizon));
}

struct RunResult {
  TrainingRecord training;
  EvaluationReport evaluation;
};

/// Train, then evaluate the control as re-read from control_final.csv.
inline RunResult cmd_run(const ExperimentConfig& cfg) {
  TrainingRecord rec = cmd_train(cfg);
  EvaluationReport rep = cmd_evaluate(cfg, cfg.output_dir / "control_final.csv");
  return {std::move(rec), std::move(rep)};
}

// --- gradient check -------------------------------------------------------

inline constexpr double kGradCheckTol = 1e-4;
inline constexpr double kGradCheckEps = 1e-6;

struct GradCheckCase {
  std::string label;
  QuantumSystem system;
  UncertaintySpec spec;
  UncertaintySample sample;
  ControlField control;
};

struct GradCheckResult {
  std::string label;
  double max_rel_error;
};

struct GradCheckReport {
  std::vector<GradCheckResult> cases;
  double worst = 0.0;
  bool passed = false;
};

namespace detail {

inline double symmetric_uniform(std::mt19937_64& rng) { return 2.0 * unit_uniform(rng) - 1.0; }

inline ComplexMatrix random_hermitian(std::size_t d, std::mt19937_64& rng) {
  ComplexMatrix h(d);
  for (std::size_t r = 0; r < d; ++r) {
    h(r, r) = symmetric_uniform(rng);
    for (std::size_t c = r + 1; c < d; ++c) {
      h(r, c) = Complex{symmetric_uniform(rng), symmetric_uniform(rng)};
      h(c, r) = std::conj(h(r, c));
    }
  }
  return h;
}

inline ComplexVector random_state(std::size_t d, std::mt19937_64& rng) {
  ComplexVector v(d);
  for (std::size_t i = 0; i < d; ++i) v[i] = Complex{symmetric_uniform(rng), symmetric_uniform(rng)};
  return v.normalized();
}

}  // namespace detail

/// A random dense instance with cosine-modulated drift and coupling.
inline GradCheckCase random_gradcheck_case(std::size_t d, std::size_t channels, std::size_t slices,
                                           std::mt19937_64& rng, std::string label) {
  QuantumSystem sys;
  sys.drift = detail::random_hermitian(d, rng);
  for (std::size_t m = 0; m < channels; ++m) sys.controls.push_back(detail::random_hermitian(d, rng));
  sys.psi0 = detail::random_state(d, rng);
  sys.psi_target = detail::random_state(d, rng);
  const UncertaintySpec spec{0.3, 0.3, ModulationForm::cosine, ModulationForm::cosine};
  const auto sample = UncertaintySample::modulated(0.3 * detail::symmetric_uniform(rng),
                                                   0.3 * detail::symmetric_uniform(rng));
  ControlField ctrl(channels, slices, 0.5 + 2.5 * unit_uniform(rng));
  for (double& u : ctrl.values()) u = detail::symmetric_uniform(rng);
  return {std::move(label), std::move(sys), spec, sample, std::move(ctrl)};
}

/// 20 random d=3 instances (M in 1..4, Q in {5, 10}), one d=2/M=1 instance,
/// and the config's system at Q=10 on its nominal and extreme samples.
inline std::vector<GradCheckCase> gradcheck_cases(const ExperimentConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<GradCheckCase> cases;
  for (int i = 0; i < 20; ++i) {
    const std::size_t m = 1 + static_cast<std::size_t>(rng() % 4);
    const std::size_t q = (i % 2 == 0) ? 5 : 10;
    cases.push_back(random_gradcheck_case(3, m, q, rng, "random d=3 #" + std::to_string(i + 1)));
  }
  cases.push_back(random_gradcheck_case(2, 1, 10, rng, "random d=2 M=1"));

  const std::size_t m = cfg.system.num_controls();
  ControlField ctrl = initial_control_sin(m, 10, cfg.control.horizon);
  cases.push_back({"config system, nominal", cfg.system, cfg.uncertainty, UncertaintySample::nominal(), ctrl});
  cases.push_back({"config system, omega=+Omega theta=+Theta", cfg.system, cfg.uncertainty,
                   UncertaintySample::modulated(cfg.uncertainty.omega_bound, cfg.uncertainty.theta_bound), ctrl});
  return cases;
}

/// Analytic vs central-difference gradient on every case. `corrupt` flips
/// the analytic sign, as a negative control for the checker itself.
inline GradCheckReport run_gradcheck(const std::vector<GradCheckCase>& cases, bool corrupt = false,
                                     double eps = kGradCheckEps, double tol = kGradCheckTol) {
  GradCheckReport rep;
  for (const auto& c : cases) {
    const Trajectory tr = propagate(c.system, c.sample, c.spec, c.control);
    GradientField analytic = sample_gradient(c.system, c.sample, c.spec, c.control, tr);
    if (corrupt)
      for (double& x : analytic.values()) x = -x;
    const GradientField fd = finite_difference_gradient(c.system, c.sample, c.spec, c.control, eps);
    const double err = max_relative_error(analytic, fd);
    rep.cases.push_back({c.label, err});
    rep.worst = std::isfinite(err) ? std::max(rep.worst, err) : std::numeric_limits<double>::infinity();
  }
  rep.passed = !rep.cases.empty() && rep.worst <= tol;
  return rep;
}

}  // namespace slcq
