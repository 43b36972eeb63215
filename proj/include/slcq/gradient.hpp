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

// Gradient of J = |<psi(T)|psi_target>|^2 with respect to the slice
// amplitudes, expressed as a functional gradient (per unit time) so that
// the ascent step is u <- u + eta * grad with no dt factor.
//
// For slice q with H_q = V diag(lambda) V^dagger the derivative of the slice
// propagator along B = f H_m is
//   dU_q = V (Gamma o (V^dagger B V)) V^dagger,
//   Gamma_jk = (exp(-i dt lambda_j) - exp(-i dt lambda_k)) / (lambda_j - lambda_k),
// and the gradient entry is (2/dt) Re(<psi(T)|psi_t> <chi_{q+1}| dU_q |psi_{q-1}>)
// where chi_{q+1} is the target propagated backwards to the end of slice q.
// As dt -> 0 this reduces to
//   2 Im(<psi(T)|psi_t> <psi_t| U(T) U^dagger(t) f H_m U(t) |psi0>),
// which is available as GradientRule::left_endpoint.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "slcq/parallel.hpp"
#include "slcq/propagation.hpp"

namespace slcq {

enum class GradientRule {
  exact_slice,    // exact derivative of the discretized propagation
  left_endpoint,  // continuous-time formula sampled at the slice start
};

class GradientField {
 public:
  GradientField(std::size_t channels, std::size_t slices)
      : m_(channels), q_(slices), values_(channels * slices, 0.0) {}

  std::size_t channels() const noexcept { return m_; }
  std::size_t slices() const noexcept { return q_; }
  double& operator()(std::size_t m, std::size_t q) { return values_[m * q_ + q]; }
  double operator()(std::size_t m, std::size_t q) const { return values_[m * q_ + q]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  bool all_finite() const {
    for (double x : values_)
      if (!std::isfinite(x)) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : values_) m = std::max(m, std::abs(x));
    return m;
  }

  bool operator==(const GradientField&) const = default;

 private:
  std::size_t m_;
  std::size_t q_;
  std::vector<double> values_;
};

namespace detail {

// -i tau exp(-i tau mean) sinc(tau delta / 2): the divided difference of
// exp(-i tau x) at (x_j, x_k), stable for near-degenerate pairs.
inline Complex exp_divided_difference(double tau, double xj, double xk) {
  const double mean = 0.5 * (xj + xk);
  const double half = 0.5 * tau * (xj - xk);
  const double sinc = std::abs(half) < 1e-4 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
  return Complex{0.0, -tau} * std::polar(1.0, -tau * mean) * sinc;
}

// sum_rs H_rs Y_rs
inline Complex contract(const ComplexMatrix& h, const ComplexMatrix& y) {
  Complex s{};
  const std::size_t d = h.dim();
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) s += h(r, c) * y(r, c);
  return s;
}

}  // namespace detail

inline GradientField sample_gradient(const QuantumSystem& sys, const UncertaintySample& sample,
                                     const UncertaintySpec& spec, const ControlField& ctrl, const Trajectory& traj,
                                     GradientRule rule = GradientRule::exact_slice) {
  const std::size_t d = sys.dim();
  const std::size_t nq = ctrl.slices();
  const std::size_t nm = ctrl.channels();
  if (traj.slices() != nq || traj.channels != nm || traj.states.size() != nq + 1 ||
      traj.states.front().size() != d || traj.dt != ctrl.dt())
    throw std::invalid_argument("sample_gradient: trajectory does not match the control field");
  if (nm != sys.num_controls())
    throw std::invalid_argument("sample_gradient: control channel count does not match the system");

  GradientField grad(nm, nq);
  const Complex overlap = traj.final_overlap;
  if (overlap == Complex{}) return grad;

  const double dt = traj.dt;
  ComplexVector chi = sys.psi_target;  // (U_Q ... U_{q+1})^dagger psi_target
  ComplexMatrix y(d);
  for (std::size_t q = nq; q-- > 0;) {
    const ComplexVector& before = traj.states[q];
    const double f = factors_at(sample, spec, ctrl.midpoint(q)).f;
    Complex weight;
    if (rule == GradientRule::left_endpoint) {
      chi = traj.slice_props[q].adjoint_times(chi);
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) y(r, c) = std::conj(chi[r]) * before[c];
      // 2 Im(overlap * z) = 2 Re(-i overlap * z)
      weight = Complex{0.0, -2.0} * overlap * f;
    } else {
      const HermitianEigen& eig = traj.slice_eigen[q];
      const ComplexMatrix& v = eig.vectors;
      const ComplexVector bt = v.adjoint_times(chi);
      const ComplexVector pt = v.adjoint_times(before);
      // X_jk = conj(bt_j) Gamma_jk pt_k ; Y = conj(V) X V^T
      ComplexMatrix x(d);
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k)
          x(j, k) = std::conj(bt[j]) * detail::exp_divided_difference(dt, eig.values[j], eig.values[k]) * pt[k];
      ComplexMatrix xv(d);  // X V^T
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t c = 0; c < d; ++c) {
          Complex s{};
          for (std::size_t k = 0; k < d; ++k) s += x(j, k) * v(c, k);
          xv(j, c) = s;
        }
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
          Complex s{};
          for (std::size_t j = 0; j < d; ++j) s += std::conj(v(r, j)) * xv(j, c);
          y(r, c) = s;
        }
      weight = 2.0 * overlap * f / dt;
      chi = traj.slice_props[q].adjoint_times(chi);
    }
    for (std::size_t m = 0; m < nm; ++m) grad(m, q) = (weight * detail::contract(sys.controls[m], y)).real();
  }
  return grad;
}

struct AugmentedGradient {
  GradientField gradient;
  double j_n;
};

/// Mean gradient and mean J over the samples; per-sample work runs in
/// parallel, the reduction is in sample order.
inline AugmentedGradient augmented_gradient(const QuantumSystem& sys, const std::vector<UncertaintySample>& samples,
                                            const UncertaintySpec& spec, const ControlField& ctrl,
                                            GradientRule rule = GradientRule::exact_slice) {
  if (samples.empty()) throw std::invalid_argument("augmented_gradient: sample list is empty");
  const std::size_t n = samples.size();
  std::vector<GradientField> grads(n, GradientField(ctrl.channels(), ctrl.slices()));
  std::vector<double> js(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const Trajectory tr = propagate(sys, samples[i], spec, ctrl);
    grads[i] = sample_gradient(sys, samples[i], spec, ctrl, tr, rule);
    js[i] = performance_J(tr);
  });

  AugmentedGradient out{GradientField(ctrl.channels(), ctrl.slices()), 0.0};
  auto acc = out.gradient.values();
  for (std::size_t i = 0; i < n; ++i) {
    const auto g = grads[i].values();
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += g[k];
    out.j_n += js[i];
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (double& x : acc) x *= inv;
  out.j_n *= inv;
  return out;
}

/// Central differences of J, divided by dt to match the functional gradient.
inline GradientField finite_difference_gradient(const QuantumSystem& sys, const UncertaintySample& sample,
                                                const UncertaintySpec& spec, const ControlField& ctrl, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("finite_difference_gradient: eps must be positive");
  GradientField grad(ctrl.channels(), ctrl.slices());
  ControlField probe = ctrl;
  for (std::size_t m = 0; m < ctrl.channels(); ++m)
    for (std::size_t q = 0; q < ctrl.slices(); ++q) {
      const double u = ctrl(m, q);
      probe(m, q) = u + eps;
      const double jp = performance_J(propagate(sys, sample, spec, probe));
      probe(m, q) = u - eps;
      const double jm = performance_J(propagate(sys, sample, spec, probe));
      probe(m, q) = u;
      grad(m, q) = (jp - jm) / (2.0 * eps * ctrl.dt());
    }
  return grad;
}

/// max over entries of |a - b| / (|b| + floor).
inline double max_relative_error(const GradientField& analytic, const GradientField& reference,
                                 double floor = 1e-8) {
  if (analytic.channels() != reference.channels() || analytic.slices() != reference.slices())
    throw std::invalid_argument("max_relative_error: shape mismatch");
  double worst = 0.0;
  const auto a = analytic.values();
  const auto b = reference.values();
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]) / (std::abs(b[k]) + floor));
  return worst;
}

}  // namespace slcq
