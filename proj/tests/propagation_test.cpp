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

#include <random>

#include "slcq/learn.hpp"
#include "slcq/propagation.hpp"
#include "test_support.hpp"

namespace slcq {
namespace {

const UncertaintySpec kExp1{0.28, 0.0, ModulationForm::cosine, ModulationForm::constant_one};

double distance(const ComplexVector& a, const ComplexVector& b) { return (a - b).norm(); }

TEST(Propagate, ZeroHamiltonianIsIdentity) {
  QuantumSystem sys;
  sys.drift = ComplexMatrix(3);
  sys.controls = {ComplexMatrix(3)};
  sys.psi0 = ComplexVector::basis(3, 1);
  sys.psi_target = ComplexVector::basis(3, 2);
  const auto tr = propagate(sys, UncertaintySample::nominal(), UncertaintySpec{}, ControlField(1, 7, 2.0));
  ASSERT_EQ(tr.slices(), 7u);
  for (const auto& u : tr.slice_props) EXPECT_EQ(u, ComplexMatrix::identity(3));
  EXPECT_EQ(tr.final_state(), sys.psi0);
  EXPECT_EQ(performance_J(tr), 0.0);
}

TEST(Propagate, DriftOnlyChangesPhases) {
  const auto sys = vtype_system();
  const double T = 5.0;
  const auto tr = propagate(sys, UncertaintySample::nominal(), kExp1, ControlField(4, 200, T));
  const double a = 1.0 / std::sqrt(3.0);
  const ComplexVector expect{a * std::polar(1.0, -1.5 * T), a * std::polar(1.0, -T), a};
  EXPECT_LE(distance(tr.final_state(), expect), 1e-12);
  EXPECT_NEAR(fidelity(tr.final_state(), sys.psi_target), 1.0 / std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(performance_J(tr), 1.0 / 3.0, 1e-14);
}

TEST(Propagate, StructureAndExactInitialState) {
  std::mt19937_64 rng(1);
  const auto sys = testing::random_system(3, 2, rng);
  const auto ctrl = testing::random_control(2, 9, 1.7, rng);
  const auto tr = propagate(sys, UncertaintySample::static_factor(1.1, 0.9), UncertaintySpec{0.2, 0.2}, ctrl);
  EXPECT_EQ(tr.slice_props.size(), 9u);
  EXPECT_EQ(tr.cumulative.size(), 10u);
  EXPECT_EQ(tr.states.size(), 10u);
  EXPECT_EQ(tr.states.front(), sys.psi0);
  EXPECT_EQ(tr.cumulative.front(), ComplexMatrix::identity(3));
  EXPECT_DOUBLE_EQ(tr.dt, 1.7 / 9);
}

TEST(Propagate, DimensionMismatchThrows) {
  auto sys = vtype_system();
  EXPECT_THROW(propagate(sys, UncertaintySample::nominal(), kExp1, ControlField(3, 4, 1.0)), std::invalid_argument);
  sys.psi0 = ComplexVector::basis(2, 0);
  EXPECT_THROW(propagate(sys, UncertaintySample::nominal(), kExp1, ControlField(4, 4, 1.0)), std::invalid_argument);
}

TEST(Propagate, UnitarityNormAndComposition) {
  std::mt19937_64 rng(17);
  const UncertaintySpec spec{0.5, 0.5, ModulationForm::cosine, ModulationForm::cosine};
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 2 + trial % 4;
    const auto sys = testing::random_system(d, 1 + trial % 3, rng);
    const auto ctrl = testing::random_control(sys.num_controls(), 25, 3.0, rng, 4.0);
    const auto s = UncertaintySample::modulated(testing::uniform(rng, -0.5, 0.5), testing::uniform(rng, -0.5, 0.5));
    const auto tr = propagate(sys, s, spec, ctrl);
    for (const auto& u : tr.slice_props) EXPECT_LE(u.unitary_defect(), 1e-10);
    for (const auto& w : tr.cumulative) EXPECT_LE(w.unitary_defect(), 1e-10);
    for (const auto& psi : tr.states) EXPECT_NEAR(psi.norm(), 1.0, 1e-9);
    // W_Q psi0 against the sequentially applied states
    EXPECT_LE(distance(tr.cumulative.back() * sys.psi0, tr.final_state()), 1e-9);
    EXPECT_NEAR(performance_J(tr), std::norm(inner_product(tr.final_state(), sys.psi_target)), 0.0);
  }
}

TEST(Fidelity, Values) {
  const auto e0 = ComplexVector::basis(3, 0);
  EXPECT_EQ(fidelity(e0, e0), 1.0);
  EXPECT_EQ(fidelity(e0, ComplexVector::basis(3, 1)), 0.0);
  const double a = 1.0 / std::sqrt(3.0);
  EXPECT_NEAR(fidelity(ComplexVector{a, a, a}, ComplexVector::basis(3, 2)), 0.577350, 1e-6);
}

TEST(Fidelity, RejectsUnnormalizedInputs) {
  EXPECT_THROW(fidelity(ComplexVector{1.0, 1.0}, ComplexVector::basis(2, 0)), std::invalid_argument);
}

TEST(PerformanceJ, TargetAndOrthogonal) {
  QuantumSystem sys;
  sys.drift = ComplexMatrix(2);
  sys.controls = {ComplexMatrix(2)};
  sys.psi0 = ComplexVector::basis(2, 0);
  sys.psi_target = ComplexVector::basis(2, 0);
  const ControlField c(1, 3, 1.0);
  EXPECT_EQ(performance_J(propagate(sys, UncertaintySample::nominal(), UncertaintySpec{}, c)), 1.0);
  sys.psi_target = ComplexVector::basis(2, 1);
  EXPECT_EQ(performance_J(propagate(sys, UncertaintySample::nominal(), UncertaintySpec{}, c)), 0.0);
}

TEST(Propagate, StaticSampleAgreesWithRk4) {
  // Slice Hamiltonians are exactly constant, so the only error is RK4's.
  const auto sys = vtype_system();
  const auto ctrl = initial_control_sin(4, 50, 5.0);
  const auto s = UncertaintySample::static_factor(1.24, 1.0);
  const auto exact = propagate(sys, s, kExp1, ctrl).final_state();
  EXPECT_LE(distance(exact, testing::rk4_final_state(sys, s, kExp1, ctrl, 100)), 1e-9);
}

TEST(Propagate, MidpointRuleConvergesToRk4Solution) {
  // The coarse control stays fixed; only the propagation grid is refined.
  const auto sys = vtype_system();
  const auto ctrl = initial_control_sin(4, 200, 5.0);
  const auto s = UncertaintySample::modulated(0.28, 0.0);
  const auto reference = testing::rk4_final_state(sys, s, kExp1, ctrl, 40);
  double prev = 0.0;
  for (std::size_t factor : {1u, 2u, 4u}) {
    const double err = distance(propagate(sys, s, kExp1, ctrl.refined(factor)).final_state(), reference);
    if (factor > 1) {
      EXPECT_GE(prev / err, 3.0) << "refinement " << factor;
    }
    prev = err;
  }
  EXPECT_LE(distance(propagate(sys, s, kExp1, ctrl.refined(100)).final_state(), reference), 1e-7);
}

}  // namespace
}  // namespace slcq
