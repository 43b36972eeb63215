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

// Sampling-based learning control: gradient-flow training on an augmented
// set of uncertainty samples, then fidelity evaluation on fresh samples.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slcq/gradient.hpp"
#include "slcq/parallel.hpp"
#include "slcq/propagation.hpp"
#include "slcq/sampling.hpp"

namespace slcq {

struct TrainSettings {
  double eta = 0.2;
  std::size_t max_iterations = 500;
  double plateau_tol = 1e-7;
  std::size_t plateau_window = 10;
  double eta_decay = 1.0;  // eta_k = eta * eta_decay^k
  GradientRule rule = GradientRule::exact_slice;

  void validate() const {
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be finite and non-negative");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
    if (!(plateau_tol >= 0.0)) throw std::invalid_argument("plateau_tol must be non-negative");
    if (plateau_window < 1) throw std::invalid_argument("plateau_window must be at least 1");
    if (!(eta_decay > 0.0)) throw std::invalid_argument("eta_decay must be positive");
  }
};

enum class StopReason { max_iterations, plateau };

inline std::string_view to_string(StopReason r) {
  return r == StopReason::plateau ? "plateau" : "max_iterations";
}

struct TrainingRecord {
  std::vector<double> j_history;  // J_N(u^k), k = 0..iterations_run
  ControlField final_control;
  std::size_t iterations_run = 0;
  StopReason stop_reason = StopReason::max_iterations;
};

/// u_m[q] = sin(t_q*) on every channel.
inline ControlField initial_control_sin(std::size_t channels, std::size_t slices, double horizon) {
  ControlField ctrl(channels, slices, horizon);
  for (std::size_t m = 0; m < channels; ++m)
    for (std::size_t q = 0; q < slices; ++q) ctrl(m, q) = std::sin(ctrl.midpoint(q));
  return ctrl;
}

inline TrainingRecord train(const QuantumSystem& sys, const UncertaintySpec& spec,
                            const std::vector<UncertaintySample>& samples, const ControlField& init,
                            const TrainSettings& settings) {
  if (samples.empty()) throw std::invalid_argument("train: training sample list is empty");
  settings.validate();
  TrainingRecord rec{{}, init, 0, StopReason::max_iterations};
  ControlField& u = rec.final_control;
  rec.j_history.reserve(settings.max_iterations + 1);

  double eta = settings.eta;
  for (std::size_t k = 0;; ++k) {
    const AugmentedGradient step = augmented_gradient(sys, samples, spec, u, settings.rule);
    if (!std::isfinite(step.j_n) || !step.gradient.all_finite())
      throw std::runtime_error("train: non-finite objective or gradient at iteration " + std::to_string(k));
    rec.j_history.push_back(step.j_n);

    const std::size_t h = rec.j_history.size();
    if (h > settings.plateau_window) {
      double worst = 0.0;
      for (std::size_t i = h - settings.plateau_window; i < h; ++i)
        worst = std::max(worst, std::abs(rec.j_history[i] - rec.j_history[i - 1]));
      if (worst < settings.plateau_tol) {
        rec.stop_reason = StopReason::plateau;
        break;
      }
    }
    if (k == settings.max_iterations) break;

    auto amp = u.values();
    const auto g = step.gradient.values();
    for (std::size_t i = 0; i < amp.size(); ++i) amp[i] += eta * g[i];
    eta *= settings.eta_decay;
    rec.iterations_run = k + 1;
  }
  return rec;
}

struct Histogram {
  std::vector<double> edges;  // bins + 1 uniform edges over [lo, hi]
  std::vector<std::size_t> counts;
};

/// Uniform bins over [lo, hi]; the last bin is closed on the right and
/// out-of-range values are clamped into the end bins.
inline Histogram make_histogram(std::span<const double> values, std::size_t bins, double lo = 0.0, double hi = 1.0) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  h.counts.assign(bins, 0);
  for (double v : values) {
    const double pos = (v - lo) / (hi - lo) * static_cast<double>(bins);
    const auto idx = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
    ++h.counts[std::min(idx, bins - 1)];
  }
  return h;
}

struct SampleFidelity {
  UncertaintySample sample;
  double fidelity;
};

struct EvaluationReport {
  std::vector<SampleFidelity> per_sample;
  double mean_fidelity = 0.0;
  double min_fidelity = 0.0;
  double max_fidelity = 0.0;
  Histogram histogram;
};

inline EvaluationReport evaluate(const QuantumSystem& sys, const UncertaintySpec& spec, const ControlField& ctrl,
                                 const std::vector<UncertaintySample>& samples, std::size_t histogram_bins = 50) {
  if (samples.empty()) throw std::invalid_argument("evaluate: test sample list is empty");
  std::vector<double> fid(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    fid[i] = fidelity(propagate(sys, samples[i], spec, ctrl).final_state(), sys.psi_target);
  });

  EvaluationReport rep;
  rep.per_sample.reserve(samples.size());
  double sum = 0.0;
  rep.min_fidelity = std::numeric_limits<double>::infinity();
  rep.max_fidelity = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    rep.per_sample.push_back({samples[i], fid[i]});
    sum += fid[i];
    rep.min_fidelity = std::min(rep.min_fidelity, fid[i]);
    rep.max_fidelity = std::max(rep.max_fidelity, fid[i]);
  }
  rep.mean_fidelity = sum / static_cast<double>(samples.size());
  // Summation order can push the mean an ulp outside [min, max] for equal values.
  rep.mean_fidelity = std::clamp(rep.mean_fidelity, rep.min_fidelity, rep.max_fidelity);
  rep.histogram = make_histogram(fid, histogram_bins);
  return rep;
}

}  // namespace slcq
