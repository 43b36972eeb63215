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

// Time-sliced Schrodinger propagation: one exact exponential per slice of
// the midpoint-frozen Hamiltonian.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "slcq/linalg.hpp"
#include "slcq/model.hpp"

namespace slcq {

struct Trajectory {
  double dt = 0.0;
  std::size_t channels = 0;
  std::vector<HermitianEigen> slice_eigen;    // eigensystem of H on each slice
  std::vector<ComplexMatrix> slice_props;     // U_q = exp(-i H_q dt), q = 1..Q
  std::vector<ComplexMatrix> cumulative;      // W_0 = I, W_q = U_q W_{q-1}
  std::vector<ComplexVector> states;          // psi_q = W_q psi0
  Complex final_overlap{};                    // <psi(T)|psi_target>

  std::size_t slices() const noexcept { return slice_props.size(); }
  const ComplexVector& final_state() const { return states.back(); }
};

inline Trajectory propagate(const QuantumSystem& sys, const UncertaintySample& sample, const UncertaintySpec& spec,
                            const ControlField& ctrl) {
  const std::size_t d = sys.dim();
  if (ctrl.channels() != sys.num_controls())
    throw std::invalid_argument("propagate: control channel count does not match the system");
  if (sys.psi0.size() != d || sys.psi_target.size() != d)
    throw std::invalid_argument("propagate: state dimension does not match the Hamiltonian");
  const std::size_t nq = ctrl.slices();

  Trajectory tr;
  tr.dt = ctrl.dt();
  tr.channels = ctrl.channels();
  tr.slice_eigen.reserve(nq);
  tr.slice_props.reserve(nq);
  tr.cumulative.reserve(nq + 1);
  tr.states.reserve(nq + 1);
  tr.cumulative.push_back(ComplexMatrix::identity(d));
  tr.states.push_back(sys.psi0);
  for (std::size_t q = 0; q < nq; ++q) {
    tr.slice_eigen.push_back(eig_hermitian(hamiltonian_at(sys, sample, spec, ctrl, q)));
    tr.slice_props.push_back(expm_unitary(tr.slice_eigen.back(), tr.dt));
    tr.cumulative.push_back(tr.slice_props.back() * tr.cumulative.back());
    tr.states.push_back(tr.slice_props.back() * tr.states.back());
  }
  tr.final_overlap = inner_product(tr.states.back(), sys.psi_target);
  return tr;
}

/// |<a|b>| for unit vectors.
inline double fidelity(const ComplexVector& a, const ComplexVector& b) {
  if (!a.is_normalized(1e-6) || !b.is_normalized(1e-6))
    throw std::invalid_argument("fidelity: inputs must be unit-norm");
  return std::abs(inner_product(a, b));
}

/// J = |<psi(T)|psi_target>|^2.
inline double performance_J(const Trajectory& tr) { return std::norm(tr.final_overlap); }

}  // namespace slcq
