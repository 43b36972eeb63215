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

// Experiment definitions: JSON schema, validation and the bundled V-type
// presets. Complex numbers are [re, im] pairs throughout.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "slcq/learn.hpp"
#include "slcq/model.hpp"
#include "slcq/sampling.hpp"

namespace slcq {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error("config field '" + field + "': " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class InitKind { sin, zero, file };

struct ControlSettings {
  double horizon = 5.0;
  std::size_t slices = 200;
  InitKind init = InitKind::sin;
  std::filesystem::path init_file;  // when init == file
};

struct EvaluationSettings {
  std::size_t count = 200;
  std::uint64_t seed = 0;
  std::size_t histogram_bins = 50;
};

struct ExperimentConfig {
  std::string name;
  QuantumSystem system;
  UncertaintySpec uncertainty;
  GridSpec grid;
  ControlSettings control;
  TrainSettings training;
  EvaluationSettings evaluation;
  std::filesystem::path output_dir;
};

inline constexpr std::size_t kMaxDimension = 64;
inline constexpr std::size_t kMaxSlices = 1'000'000;

namespace detail {

using nlohmann::json;

inline const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

inline std::uint64_t count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0))
    throw ConfigError(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

inline std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

inline Complex complex_pair(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(path, "expected a complex number as [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline ComplexVector vector_of(const json& j, std::size_t d, const std::string& path) {
  if (!j.is_array() || j.size() != d) throw ConfigError(path, "expected " + std::to_string(d) + " entries");
  ComplexVector v(d);
  for (std::size_t i = 0; i < d; ++i) v[i] = complex_pair(j[i], path + "[" + std::to_string(i) + "]");
  if (!v.is_normalized()) throw ConfigError(path, "state is not normalized");
  return v;
}

inline ComplexMatrix matrix_of(const json& j, std::size_t d, const std::string& path) {
  if (!j.is_array() || j.size() != d) throw ConfigError(path, "expected " + std::to_string(d) + " rows");
  ComplexMatrix m(d);
  for (std::size_t r = 0; r < d; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != d) throw ConfigError(rp, "expected " + std::to_string(d) + " entries");
    for (std::size_t c = 0; c < d; ++c) m(r, c) = complex_pair(j[r][c], rp + "[" + std::to_string(c) + "]");
  }
  if (!m.is_hermitian()) throw ConfigError(path, "matrix is not Hermitian");
  return m;
}

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const ComplexVector& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(to_json(z));
  return out;
}

inline json to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.dim(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

inline std::string_view to_string(GradientRule r) {
  return r == GradientRule::left_endpoint ? "left_endpoint" : "exact_slice";
}

}  // namespace detail

/// Parses and validates a config document. Relative init-file paths are
/// resolved against base_dir.
inline ExperimentConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {}) {
  using detail::field;
  using detail::join;
  ExperimentConfig cfg;
  if (!doc.is_object()) throw ConfigError("<root>", "expected a JSON object");
  cfg.name = doc.contains("name") ? detail::text(doc["name"], "name") : std::string{};

  const auto& sys = field(doc, "system", "");
  const auto d = detail::count(field(sys, "dimension", "system"), "system.dimension");
  if (d < 2 || d > kMaxDimension)
    throw ConfigError("system.dimension", "must lie in [2, " + std::to_string(kMaxDimension) + "]");
  cfg.system.drift = detail::matrix_of(field(sys, "H0", "system"), d, "system.H0");
  const auto& ctrls = field(sys, "controls", "system");
  if (!ctrls.is_array() || ctrls.empty()) throw ConfigError("system.controls", "expected a non-empty array of matrices");
  for (std::size_t m = 0; m < ctrls.size(); ++m)
    cfg.system.controls.push_back(detail::matrix_of(ctrls[m], d, "system.controls[" + std::to_string(m) + "]"));
  cfg.system.psi0 = detail::vector_of(field(sys, "psi0", "system"), d, "system.psi0");
  cfg.system.psi_target = detail::vector_of(field(sys, "psi_target", "system"), d, "system.psi_target");

  const auto& unc = field(doc, "uncertainty", "");
  cfg.uncertainty.omega_bound = detail::number(field(unc, "Omega", "uncertainty"), "uncertainty.Omega");
  cfg.uncertainty.theta_bound = detail::number(field(unc, "Theta", "uncertainty"), "uncertainty.Theta");
  try {
    cfg.uncertainty.g_form = parse_modulation_form(detail::text(field(unc, "g_form", "uncertainty"), "uncertainty.g_form"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("uncertainty.g_form", e.what());
  }
  try {
    cfg.uncertainty.f_form = parse_modulation_form(detail::text(field(unc, "f_form", "uncertainty"), "uncertainty.f_form"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("uncertainty.f_form", e.what());
  }
  if (!(cfg.uncertainty.omega_bound >= 0.0 && cfg.uncertainty.omega_bound <= 1.0))
    throw ConfigError("uncertainty.Omega", "must lie in [0, 1]");
  if (!(cfg.uncertainty.theta_bound >= 0.0 && cfg.uncertainty.theta_bound <= 1.0))
    throw ConfigError("uncertainty.Theta", "must lie in [0, 1]");

  const auto& grid = field(doc, "grid", "");
  cfg.grid.n_omega = detail::count(field(grid, "N_omega", "grid"), "grid.N_omega");
  cfg.grid.n_theta = detail::count(field(grid, "N_theta", "grid"), "grid.N_theta");
  if (cfg.grid.n_omega < 1) throw ConfigError("grid.N_omega", "must be at least 1");
  if (cfg.grid.n_theta < 1) throw ConfigError("grid.N_theta", "must be at least 1");
  if (grid.contains("train_sample_kind")) {
    try {
      cfg.grid.kind = parse_sample_kind(detail::text(grid["train_sample_kind"], "grid.train_sample_kind"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("grid.train_sample_kind", e.what());
    }
  }

  const auto& ctl = field(doc, "control", "");
  cfg.control.horizon = detail::number(field(ctl, "T", "control"), "control.T");
  if (!(cfg.control.horizon > 0.0) || !std::isfinite(cfg.control.horizon))
    throw ConfigError("control.T", "must be positive");
  cfg.control.slices = detail::count(field(ctl, "Q", "control"), "control.Q");
  if (cfg.control.slices < 1 || cfg.control.slices > kMaxSlices)
    throw ConfigError("control.Q", "must lie in [1, " + std::to_string(kMaxSlices) + "]");
  const std::string init = detail::text(field(ctl, "init", "control"), "control.init");
  if (init == "sin") {
    cfg.control.init = InitKind::sin;
  } else if (init == "zero") {
    cfg.control.init = InitKind::zero;
  } else {
    cfg.control.init = InitKind::file;
    std::filesystem::path p(init);
    cfg.control.init_file = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }

  const auto& tr = field(doc, "training", "");
  cfg.training.eta = detail::number(field(tr, "eta", "training"), "training.eta");
  if (!(cfg.training.eta >= 0.0) || !std::isfinite(cfg.training.eta))
    throw ConfigError("training.eta", "must be finite and non-negative");
  cfg.training.max_iterations = detail::count(field(tr, "max_iterations", "training"), "training.max_iterations");
  if (cfg.training.max_iterations < 1) throw ConfigError("training.max_iterations", "must be at least 1");
  cfg.training.plateau_tol = detail::number(field(tr, "plateau_tol", "training"), "training.plateau_tol");
  if (!(cfg.training.plateau_tol >= 0.0)) throw ConfigError("training.plateau_tol", "must be non-negative");
  cfg.training.plateau_window = detail::count(field(tr, "plateau_window", "training"), "training.plateau_window");
  if (cfg.training.plateau_window < 1) throw ConfigError("training.plateau_window", "must be at least 1");
  if (tr.contains("eta_decay")) {
    cfg.training.eta_decay = detail::number(tr["eta_decay"], "training.eta_decay");
    if (!(cfg.training.eta_decay > 0.0)) throw ConfigError("training.eta_decay", "must be positive");
  }
  if (tr.contains("gradient_rule")) {
    const std::string rule = detail::text(tr["gradient_rule"], "training.gradient_rule");
    if (rule == "exact_slice") {
      cfg.training.rule = GradientRule::exact_slice;
    } else if (rule == "left_endpoint") {
      cfg.training.rule = GradientRule::left_endpoint;
    } else {
      throw ConfigError("training.gradient_rule", "expected exact_slice or left_endpoint");
    }
  }

  const auto& ev = field(doc, "evaluation", "");
  cfg.evaluation.count = detail::count(field(ev, "count", "evaluation"), "evaluation.count");
  if (cfg.evaluation.count < 1) throw ConfigError("evaluation.count", "must be at least 1");
  cfg.evaluation.seed = detail::count(field(ev, "seed", "evaluation"), "evaluation.seed");
  if (ev.contains("histogram_bins")) {
    cfg.evaluation.histogram_bins = detail::count(ev["histogram_bins"], "evaluation.histogram_bins");
    if (cfg.evaluation.histogram_bins < 1) throw ConfigError("evaluation.histogram_bins", "must be at least 1");
  }

  cfg.output_dir = detail::text(field(doc, "output_dir", ""), "output_dir");
  return cfg;
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  using nlohmann::json;
  json controls = json::array();
  for (const auto& h : cfg.system.controls) controls.push_back(detail::to_json(h));
  std::string init = "sin";
  if (cfg.control.init == InitKind::zero) init = "zero";
  if (cfg.control.init == InitKind::file) init = cfg.control.init_file.generic_string();
  return json{
      {"name", cfg.name},
      {"system",
       {{"dimension", cfg.system.dim()},
        {"H0", detail::to_json(cfg.system.drift)},
        {"controls", std::move(controls)},
        {"psi0", detail::to_json(cfg.system.psi0)},
        {"psi_target", detail::to_json(cfg.system.psi_target)}}},
      {"uncertainty",
       {{"Omega", cfg.uncertainty.omega_bound},
        {"Theta", cfg.uncertainty.theta_bound},
        {"g_form", to_string(cfg.uncertainty.g_form)},
        {"f_form", to_string(cfg.uncertainty.f_form)}}},
      {"grid",
       {{"N_omega", cfg.grid.n_omega}, {"N_theta", cfg.grid.n_theta}, {"train_sample_kind", to_string(cfg.grid.kind)}}},
      {"control", {{"T", cfg.control.horizon}, {"Q", cfg.control.slices}, {"init", init}}},
      {"training",
       {{"eta", cfg.training.eta},
        {"max_iterations", cfg.training.max_iterations},
        {"plateau_tol", cfg.training.plateau_tol},
        {"plateau_window", cfg.training.plateau_window},
        {"eta_decay", cfg.training.eta_decay},
        {"gradient_rule", detail::to_string(cfg.training.rule)}}},
      {"evaluation",
       {{"count", cfg.evaluation.count},
        {"seed", cfg.evaluation.seed},
        {"histogram_bins", cfg.evaluation.histogram_bins}}},
      {"output_dir", cfg.output_dir.generic_string()},
  };
}

/// Experiment 1: only the drift is uncertain, g = 1 - omega cos t with
/// |omega| <= 0.28, trained on a 7-point grid.
inline ExperimentConfig preset_vtype_exp1() {
  ExperimentConfig cfg;
  cfg.name = "vtype_exp1";
  cfg.system = vtype_system();
  cfg.uncertainty = {0.28, 0.0, ModulationForm::cosine, ModulationForm::constant_one};
  cfg.grid = {7, 1, SampleKind::static_factor};
  cfg.control = {5.0, 200, InitKind::sin, {}};
  cfg.training = TrainSettings{};
  cfg.evaluation = {200, 42, 50};
  cfg.output_dir = "out/vtype_exp1";
  return cfg;
}

/// Experiment 2: drift and coupling both uncertain, 7 x 7 training grid.
inline ExperimentConfig preset_vtype_exp2() {
  ExperimentConfig cfg = preset_vtype_exp1();
  cfg.name = "vtype_exp2";
  cfg.uncertainty = {0.28, 0.28, ModulationForm::cosine, ModulationForm::cosine};
  cfg.grid = {7, 7, SampleKind::static_factor};
  cfg.output_dir = "out/vtype_exp2";
  return cfg;
}

inline std::optional<ExperimentConfig> preset_config(std::string_view name) {
  if (name == "vtype_exp1") return preset_vtype_exp1();
  if (name == "vtype_exp2") return preset_vtype_exp2();
  return std::nullopt;
}

/// Loads a JSON config file; a bare preset name that is not an existing
/// file resolves to the bundled preset.
inline ExperimentConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    if (auto preset = preset_config(path.string())) return *preset;
    throw ConfigError("<file>", "cannot open " + path.string());
  }
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return config_from_json(doc, path.parent_path());
}

}  // namespace slcq
