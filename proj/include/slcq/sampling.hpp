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

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "slcq/model.hpp"

namespace slcq {

struct GridSpec {
  std::size_t n_omega = 1;
  std::size_t n_theta = 1;
  SampleKind kind = SampleKind::static_factor;
};

struct RandomSpec {
  std::size_t count = 1;
  std::uint64_t seed = 0;
};

/// Midpoints of n equal subintervals of [center - half_width, center + half_width].
inline std::vector<double> midpoint_grid(double center, double half_width, std::size_t n) {
  if (n < 1) throw std::invalid_argument("grid count must be at least 1");
  std::vector<double> out(n);
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = center - half_width + static_cast<double>(2 * i + 1) * half_width / nn;
  return out;
}

/// Cartesian product of the g-axis and f-axis grids, g outer. The f-axis
/// collapses to the single nominal value when f cannot vary.
inline std::vector<UncertaintySample> training_grid(const UncertaintySpec& spec, const GridSpec& grid) {
  spec.validate();
  const bool f_varies = spec.f_active();
  std::vector<UncertaintySample> out;
  if (grid.kind == SampleKind::static_factor) {
    const auto gs = midpoint_grid(1.0, spec.omega_bound, grid.n_omega);
    const auto fs = f_varies ? midpoint_grid(1.0, spec.theta_bound, grid.n_theta) : std::vector<double>{1.0};
    out.reserve(gs.size() * fs.size());
    for (double g : gs)
      for (double f : fs) out.push_back(UncertaintySample::static_factor(g, f));
  } else {
    const auto ws = midpoint_grid(0.0, spec.omega_bound, grid.n_omega);
    const auto ts = f_varies ? midpoint_grid(0.0, spec.theta_bound, grid.n_theta) : std::vector<double>{0.0};
    out.reserve(ws.size() * ts.size());
    for (double w : ws)
      for (double t : ts) out.push_back(UncertaintySample::modulated(w, t));
  }
  return out;
}

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw; avoids
/// the library-defined behaviour of std::uniform_real_distribution.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Modulated test samples with omega ~ U[-Omega, Omega] and theta ~
/// U[-Theta, Theta] (theta pinned to 0 when f is constant), drawn from
/// mt19937_64(seed) in the order omega_1, theta_1, omega_2, ...
inline std::vector<UncertaintySample> random_test_samples(const UncertaintySpec& spec, const RandomSpec& rnd) {
  spec.validate();
  if (rnd.count < 1) throw std::invalid_argument("random sample count must be at least 1");
  std::mt19937_64 rng(rnd.seed);
  const bool f_varies = spec.f_form != ModulationForm::constant_one;
  std::vector<UncertaintySample> out;
  out.reserve(rnd.count);
  for (std::size_t i = 0; i < rnd.count; ++i) {
    const double omega = spec.omega_bound * (2.0 * unit_uniform(rng) - 1.0);
    const double theta = f_varies ? spec.theta_bound * (2.0 * unit_uniform(rng) - 1.0) : 0.0;
    out.push_back(UncertaintySample::modulated(omega, theta));
  }
  return out;
}

}  // namespace slcq
