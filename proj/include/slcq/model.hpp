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

// Uncertain controlled Hamiltonian
//   H(t) = g(t) H0 + sum_m f(t) u_m(t) H_m
// with piecewise-constant controls on Q equal slices of [0, T].

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slcq/linalg.hpp"

namespace slcq {

struct QuantumSystem {
  ComplexMatrix drift;                  // H0
  std::vector<ComplexMatrix> controls;  // H_1..H_M
  ComplexVector psi0;
  ComplexVector psi_target;

  std::size_t dim() const noexcept { return drift.dim(); }
  std::size_t num_controls() const noexcept { return controls.size(); }

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const {
    const std::size_t d = dim();
    if (d < 2) throw std::invalid_argument("system dimension must be at least 2");
    if (controls.empty()) throw std::invalid_argument("system needs at least one control Hamiltonian");
    if (!drift.is_hermitian()) throw std::invalid_argument("H0 is not Hermitian");
    for (std::size_t m = 0; m < controls.size(); ++m) {
      if (controls[m].dim() != d)
        throw std::invalid_argument("control Hamiltonian " + std::to_string(m + 1) + " has wrong dimension");
      if (!controls[m].is_hermitian())
        throw std::invalid_argument("control Hamiltonian " + std::to_string(m + 1) + " is not Hermitian");
    }
    if (psi0.size() != d || psi_target.size() != d) throw std::invalid_argument("state dimension mismatch");
    if (!psi0.is_normalized()) throw std::invalid_argument("psi0 is not normalized");
    if (!psi_target.is_normalized()) throw std::invalid_argument("psi_target is not normalized");
  }
};

/// The V-type three-level system: H0 = diag(1.5, 1, 0), two Pauli-like
/// couplings from level 1 to each of levels 2 and 3, psi0 = (1,1,1)/sqrt3,
/// target |3>.
inline QuantumSystem vtype_system() {
  const Complex i{0.0, 1.0};
  const Complex mi{0.0, -1.0};
  const double a = 1.0 / std::sqrt(3.0);
  QuantumSystem sys;
  const double h0[] = {1.5, 1.0, 0.0};
  sys.drift = ComplexMatrix::diagonal(h0);
  sys.controls = {
      ComplexMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 0}},
      ComplexMatrix{{0, mi, 0}, {i, 0, 0}, {0, 0, 0}},
      ComplexMatrix{{0, 0, 1}, {0, 0, 0}, {1, 0, 0}},
      ComplexMatrix{{0, 0, mi}, {0, 0, 0}, {i, 0, 0}},
  };
  sys.psi0 = ComplexVector{a, a, a};
  sys.psi_target = ComplexVector::basis(3, 2);
  return sys;
}

/// M x Q slice amplitudes; slice q (0-based) covers (q dt, (q+1) dt].
class ControlField {
 public:
  ControlField(std::size_t channels, std::size_t slices, double horizon)
      : m_(channels), q_(slices), horizon_(horizon), amp_(channels * slices, 0.0) {
    if (channels < 1) throw std::invalid_argument("control field needs at least one channel");
    if (slices < 1) throw std::invalid_argument("control field needs at least one slice");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon T must be positive");
  }

  std::size_t channels() const noexcept { return m_; }
  std::size_t slices() const noexcept { return q_; }
  double horizon() const noexcept { return horizon_; }
  double dt() const noexcept { return horizon_ / static_cast<double>(q_); }
  double midpoint(std::size_t q) const noexcept { return (static_cast<double>(q) + 0.5) * dt(); }

  double& operator()(std::size_t m, std::size_t q) { return amp_[m * q_ + q]; }
  double operator()(std::size_t m, std::size_t q) const { return amp_[m * q_ + q]; }

  std::span<double> values() noexcept { return amp_; }
  std::span<const double> values() const noexcept { return amp_; }

  bool all_finite() const {
    for (double x : amp_)
      if (!std::isfinite(x)) return false;
    return true;
  }

  /// Same control on a grid with `factor` times more slices.
  ControlField refined(std::size_t factor) const {
    ControlField out(m_, q_ * factor, horizon_);
    for (std::size_t m = 0; m < m_; ++m)
      for (std::size_t q = 0; q < q_ * factor; ++q) out(m, q) = (*this)(m, q / factor);
    return out;
  }

  bool operator==(const ControlField&) const = default;

 private:
  std::size_t m_;
  std::size_t q_;
  double horizon_;
  std::vector<double> amp_;
};

enum class ModulationForm { constant_one, cosine };

inline std::string_view to_string(ModulationForm f) {
  return f == ModulationForm::cosine ? "cosine" : "constant_one";
}

inline ModulationForm parse_modulation_form(std::string_view s) {
  if (s == "cosine") return ModulationForm::cosine;
  if (s == "constant_one") return ModulationForm::constant_one;
  throw std::invalid_argument("unknown modulation form '" + std::string(s) + "'");
}

/// constant_one -> 1, cosine -> 1 - p cos(t).
inline double modulation_value(ModulationForm form, double p, double t) {
  return form == ModulationForm::cosine ? 1.0 - p * std::cos(t) : 1.0;
}

struct UncertaintySpec {
  double omega_bound = 0.0;  // Omega
  double theta_bound = 0.0;  // Theta
  ModulationForm g_form = ModulationForm::cosine;
  ModulationForm f_form = ModulationForm::constant_one;

  void validate() const {
    if (!(omega_bound >= 0.0 && omega_bound <= 1.0)) throw std::invalid_argument("Omega must lie in [0, 1]");
    if (!(theta_bound >= 0.0 && theta_bound <= 1.0)) throw std::invalid_argument("Theta must lie in [0, 1]");
  }

  /// Whether the control-coupling factor f can differ from 1.
  bool f_active() const noexcept { return f_form != ModulationForm::constant_one && theta_bound > 0.0; }
};

enum class SampleKind { static_factor, modulated };

inline std::string_view to_string(SampleKind k) {
  return k == SampleKind::modulated ? "modulated" : "static_factor";
}

inline SampleKind parse_sample_kind(std::string_view s) {
  if (s == "static_factor") return SampleKind::static_factor;
  if (s == "modulated") return SampleKind::modulated;
  throw std::invalid_argument("unknown sample kind '" + std::string(s) + "'");
}

/// One uncertainty realization. Static samples carry fixed multipliers
/// (g_factor, f_factor); modulated samples carry scalar parameters
/// (omega, theta) fed through the spec's modulation forms. Fields of the
/// other kind keep their neutral values.
struct UncertaintySample {
  SampleKind kind = SampleKind::static_factor;
  double g_factor = 1.0;
  double f_factor = 1.0;
  double omega = 0.0;
  double theta = 0.0;

  static UncertaintySample static_factor(double g, double f) {
    return {SampleKind::static_factor, g, f, 0.0, 0.0};
  }
  static UncertaintySample modulated(double omega, double theta) {
    return {SampleKind::modulated, 1.0, 1.0, omega, theta};
  }
  static UncertaintySample nominal() { return static_factor(1.0, 1.0); }

  bool consistent_with(const UncertaintySpec& spec, double tol = 1e-12) const {
    if (kind == SampleKind::static_factor)
      return std::abs(g_factor - 1.0) <= spec.omega_bound + tol && std::abs(f_factor - 1.0) <= spec.theta_bound + tol;
    return std::abs(omega) <= spec.omega_bound + tol && std::abs(theta) <= spec.theta_bound + tol;
  }

  bool operator==(const UncertaintySample&) const = default;
};

struct Factors {
  double g;
  double f;
};

inline Factors factors_at(const UncertaintySample& s, const UncertaintySpec& spec, double t) {
  if (s.kind == SampleKind::static_factor) return {s.g_factor, s.f_factor};
  return {modulation_value(spec.g_form, s.omega, t), modulation_value(spec.f_form, s.theta, t)};
}

/// Hamiltonian on slice q (0-based), with the modulation frozen at the
/// slice midpoint.
inline ComplexMatrix hamiltonian_at(const QuantumSystem& sys, const UncertaintySample& sample,
                                    const UncertaintySpec& spec, const ControlField& ctrl, std::size_t q) {
  if (q >= ctrl.slices()) throw std::invalid_argument("hamiltonian_at: slice index out of range");
  if (ctrl.channels() != sys.num_controls())
    throw std::invalid_argument("hamiltonian_at: control channel count does not match the system");
  const auto [g, f] = factors_at(sample, spec, ctrl.midpoint(q));
  ComplexMatrix h = g * sys.drift;
  for (std::size_t m = 0; m < sys.num_controls(); ++m) {
    const double w = f * ctrl(m, q);
    if (w != 0.0) h.add_scaled(sys.controls[m], w);
  }
  return h;
}

}  // namespace slcq
