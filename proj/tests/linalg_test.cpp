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

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "slcq/linalg.hpp"
#include "slcq/model.hpp"
#include "test_support.hpp"

namespace slcq {
namespace {

using namespace std::complex_literals;

TEST(InnerProduct, IdentityAndOrthogonality) {
  const auto e0 = ComplexVector::basis(3, 0);
  const auto e1 = ComplexVector::basis(3, 1);
  EXPECT_EQ(inner_product(e0, e0), Complex(1.0));
  EXPECT_EQ(inner_product(e0, e1), Complex(0.0));
}

TEST(InnerProduct, UniformAgainstTopLevel) {
  const double a = 1.0 / std::sqrt(3.0);
  const Complex z = inner_product(ComplexVector{a, a, a}, ComplexVector::basis(3, 2));
  EXPECT_NEAR(z.real(), 0.577350269189626, 1e-15);
  EXPECT_EQ(z.imag(), 0.0);
}

TEST(InnerProduct, ConjugateLinearInFirstArgument) {
  const ComplexVector a{1i, 0.0};
  const ComplexVector b{1.0, 0.0};
  EXPECT_EQ(inner_product(a, b), Complex(0.0, -1.0));
}

TEST(InnerProduct, DimensionMismatchThrows) {
  EXPECT_THROW(inner_product(ComplexVector(2), ComplexVector(3)), std::invalid_argument);
}

TEST(InnerProduct, SelfOverlapIsRealNonNegative) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    ComplexVector v(5);
    for (std::size_t k = 0; k < 5; ++k) v[k] = Complex{testing::uniform(rng, -3, 3), testing::uniform(rng, -3, 3)};
    const Complex z = inner_product(v, v);
    EXPECT_GE(z.real(), 0.0);
    EXPECT_LE(std::abs(z.imag()), 1e-14);
  }
}

TEST(EigHermitian, DiagonalMatrixSortsAscending) {
  const double d[] = {1.5, 1.0, 0.0};
  const auto e = eig_hermitian(ComplexMatrix::diagonal(d));
  EXPECT_EQ(e.values, (std::vector<double>{0.0, 1.0, 1.5}));
  // Columns are the reversed identity columns.
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(std::abs(e.vectors(2 - k, k)), 1.0, 1e-15);
  EXPECT_LE(e.vectors.unitary_defect(), 1e-12);
}

TEST(EigHermitian, CouplingOperatorHasUnitSpectrum) {
  // det(H1 - x) = -x (x^2 - 1)
  const auto e = eig_hermitian(vtype_system().controls[0]);
  ASSERT_EQ(e.values.size(), 3u);
  EXPECT_NEAR(e.values[0], -1.0, 1e-14);
  EXPECT_NEAR(e.values[1], 0.0, 1e-14);
  EXPECT_NEAR(e.values[2], 1.0, 1e-14);
}

TEST(EigHermitian, ZeroMatrix) {
  const auto e = eig_hermitian(ComplexMatrix(3));
  EXPECT_EQ(e.values, (std::vector<double>{0.0, 0.0, 0.0}));
  EXPECT_EQ(e.vectors, ComplexMatrix::identity(3));
}

TEST(EigHermitian, RejectsNonHermitian) {
  ComplexMatrix h(2);
  h(0, 1) = 1.0;
  EXPECT_THROW(eig_hermitian(h), std::invalid_argument);
}

TEST(EigHermitian, ReconstructsRandomMatricesAndAgreesWithEigen) {
  std::mt19937_64 rng(11);
  for (std::size_t d : {2u, 3u, 5u, 8u, 16u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto h = testing::random_hermitian(d, rng, 3.0);
      const auto e = eig_hermitian(h);
      EXPECT_LE(max_abs_diff(e.reconstruct(), h), 1e-10) << "d=" << d;
      EXPECT_LE(e.vectors.unitary_defect(), 1e-10) << "d=" << d;
      EXPECT_TRUE(std::is_sorted(e.values.begin(), e.values.end()));

      Eigen::MatrixXcd m(d, d);
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) m(r, c) = h(r, c);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ref(m);
      for (std::size_t k = 0; k < d; ++k) EXPECT_NEAR(e.values[k], ref.eigenvalues()[k], 1e-12);
    }
  }
}

TEST(EigHermitian, DegenerateSpectrum) {
  std::mt19937_64 rng(3);
  // Q diag(2, 2, -1, -1) Q^dagger with a random unitary Q.
  const auto q = expm_unitary(testing::random_hermitian(4, rng), 1.3);
  const double d[] = {2.0, 2.0, -1.0, -1.0};
  const auto h = q * ComplexMatrix::diagonal(d) * q.adjoint();
  ComplexMatrix hs = 0.5 * (h + h.adjoint());
  const auto e = eig_hermitian(hs);
  EXPECT_NEAR(e.values[0], -1.0, 1e-12);
  EXPECT_NEAR(e.values[1], -1.0, 1e-12);
  EXPECT_NEAR(e.values[2], 2.0, 1e-12);
  EXPECT_NEAR(e.values[3], 2.0, 1e-12);
  EXPECT_LE(max_abs_diff(e.reconstruct(), hs), 1e-10);
}

TEST(ExpmUnitary, ZeroHamiltonianIsIdentity) {
  for (double tau : {0.0, 0.025, 1.0, -7.5}) EXPECT_EQ(expm_unitary(ComplexMatrix(3), tau), ComplexMatrix::identity(3));
}

TEST(ExpmUnitary, DiagonalDrift) {
  const double d[] = {1.5, 1.0, 0.0};
  const auto u = expm_unitary(ComplexMatrix::diagonal(d), 0.025);
  ComplexMatrix expect(3);
  expect(0, 0) = std::polar(1.0, -0.0375);
  expect(1, 1) = std::polar(1.0, -0.025);
  expect(2, 2) = 1.0;
  EXPECT_LE(max_abs_diff(u, expect), 1e-15);
}

TEST(ExpmUnitary, QuarterRotation) {
  const auto u = expm_unitary(vtype_system().controls[0], std::numbers::pi / 2);
  const ComplexMatrix expect{{0, -1i, 0}, {-1i, 0, 0}, {0, 0, 1}};
  EXPECT_LE(max_abs_diff(u, expect), 1e-14);
}

TEST(ExpmUnitary, RejectsNonHermitian) {
  ComplexMatrix h(2);
  h(0, 0) = 1i;
  EXPECT_THROW(expm_unitary(h, 1.0), std::invalid_argument);
}

TEST(ExpmUnitary, UnitaryAndSemigroupOnRandomInputs) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + trial % 6;
    const auto h = testing::random_hermitian(d, rng, 4.0);
    const double t1 = testing::uniform(rng, -2, 2);
    const double t2 = testing::uniform(rng, -2, 2);
    const auto u1 = expm_unitary(h, t1);
    EXPECT_LE(u1.unitary_defect(), 1e-10);
    EXPECT_LE(max_abs_diff(u1 * expm_unitary(h, t2), expm_unitary(h, t1 + t2)), 1e-9);
  }
}

TEST(ExpmUnitary, MatchesTaylorSeriesForSmallSteps) {
  std::mt19937_64 rng(9);
  const auto h = testing::random_hermitian(3, rng);
  const double tau = 1e-3;
  // I - i tau H - tau^2 H^2 / 2 + i tau^3 H^3 / 6
  const auto h2 = h * h;
  const auto series = ComplexMatrix::identity(3) + Complex(0, -tau) * h + Complex(-tau * tau / 2) * h2 +
                      Complex(0, tau * tau * tau / 6) * (h2 * h);
  EXPECT_LE(max_abs_diff(expm_unitary(h, tau), series), 1e-12);
}

}  // namespace
}  // namespace slcq
