// Copyright 2026 The qchan Authors
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

#include <random>

#include <gtest/gtest.h>

#include "qchan/channels.hpp"
#include "qchan/linalg.hpp"
#include "test_support.hpp"

namespace {

using namespace qchan;
using namespace qchan::linalg;
using qchan::testing::max_abs_diff;

ComplexMatrix random_matrix(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

HermitianOperator random_hermitian(std::size_t d, std::mt19937_64& rng) {
  const ComplexMatrix m = random_matrix(d, rng);
  return HermitianOperator::symmetrized(m + m.adjoint());
}

TEST(HermitianOperator, RejectsNonHermitianInput) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(HermitianOperator{m}, NumericalError);
  EXPECT_THROW(HermitianOperator{ComplexMatrix::Zero(2, 3)}, DimensionError);
}

TEST(HermitianOperator, ArithmeticAndInner) {
  const auto a = HermitianOperator(pauli::x());
  const auto b = HermitianOperator(pauli::z());
  EXPECT_NEAR((a + b).inner(a), 2.0, 1e-15);
  EXPECT_NEAR((2.0 * a - a).inner(a), 2.0, 1e-15);
  EXPECT_NEAR(a.inner(b), 0.0, 1e-15);
  EXPECT_NEAR(HermitianOperator::identity(3).trace(), 3.0, 1e-15);
}

TEST(Kron, MatchesBlockStructure) {
  const ComplexMatrix k = kron(pauli::x(), pauli::z());
  EXPECT_EQ(k.rows(), 4);
  EXPECT_NEAR(std::abs(k(0, 2) - Complex(1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(k(1, 3) - Complex(-1.0)), 0.0, 1e-15);
}

TEST(PartialTrace, OfProductIsScaledFactor) {
  std::mt19937_64 rng(3);
  const auto a = random_hermitian(2, rng);
  const auto b = random_hermitian(3, rng);
  const auto ab = kron(a, b);
  EXPECT_LT(max_abs_diff(partial_trace(ab, {2, 3}, Subsystem::second).matrix(), b.trace() * a.matrix()), 1e-12);
  EXPECT_LT(max_abs_diff(partial_trace(ab, {2, 3}, Subsystem::first).matrix(), a.trace() * b.matrix()), 1e-12);
}

TEST(PartialTrace, IsAdjointOfTensoringIdentity) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = random_hermitian(6, rng);
    const auto x = random_hermitian(3, rng);
    const double lhs = partial_trace(m, {2, 3}, Subsystem::first).inner(x);
    const double rhs = m.inner(kron(HermitianOperator::identity(2), x));
    EXPECT_NEAR(lhs, rhs, 1e-10);
  }
}

TEST(PartialTranspose, TwiceIsIdentityAndSwapsProductFactor) {
  std::mt19937_64 rng(7);
  const auto m = random_hermitian(4, rng);
  const auto back = partial_transpose(partial_transpose(m, {2, 2}, Subsystem::first), {2, 2}, Subsystem::first);
  EXPECT_LT(max_abs_diff(back.matrix(), m.matrix()), 1e-14);
  const ComplexMatrix p = kron(pauli::y(), pauli::z());
  EXPECT_LT(max_abs_diff(partial_transpose(p, {2, 2}, Subsystem::first), kron(pauli::y().transpose(), pauli::z())),
            1e-15);
  EXPECT_LT(max_abs_diff(partial_transpose(p, {2, 2}, Subsystem::second), kron(pauli::y(), pauli::z().transpose())),
            1e-15);
}

TEST(PartialTranspose, OfMaximallyEntangledStateIsSwapOverD) {
  const auto phi = channels::max_entangled(3);
  const auto pt = partial_transpose(phi.op(), {3, 3}, Subsystem::second);
  EXPECT_LT(max_abs_diff(pt.matrix(), swap(3) / 3.0), 1e-14);
}

TEST(Eigen, ReconstructsRandomHermitianMatrices) {
  std::mt19937_64 rng(11);
  for (std::size_t d : {1u, 2u, 4u, 8u}) {
    const auto m = random_hermitian(d, rng);
    const auto e = eig_hermitian(m);
    const ComplexMatrix rebuilt = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT(max_abs_diff(rebuilt, m.matrix()), 1e-10);
    EXPECT_LT(max_abs_diff(e.vectors.adjoint() * e.vectors, ComplexMatrix::Identity(d, d)), 1e-12);
    for (Eigen::Index i = 1; i < e.values.size(); ++i) EXPECT_GE(e.values(i - 1), e.values(i));
  }
}

TEST(Eigen, ThousandRandomFourByFour) {
  std::mt19937_64 rng(12);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto m = random_hermitian(4, rng);
    const auto e = eig_hermitian(m);
    const ComplexMatrix rebuilt = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    worst = std::max(worst, (rebuilt - m.matrix()).norm());
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Norms, TraceNormTriangleInequality) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_hermitian(3, rng);
    const auto b = random_hermitian(3, rng);
    EXPECT_LE(trace_norm(a + b), trace_norm(a) + trace_norm(b) + 1e-10);
  }
}

TEST(PartialTranspose, CommutesWithTracingTheOtherFactor) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_hermitian(6, rng);
    const auto lhs = partial_trace(partial_transpose(m, {2, 3}, Subsystem::first), {2, 3}, Subsystem::second);
    const ComplexMatrix rhs = partial_trace(m, {2, 3}, Subsystem::second).matrix().transpose();
    EXPECT_LT(max_abs_diff(lhs.matrix(), rhs), 1e-12);
  }
}

TEST(Eigen, DegenerateSpectrum) {
  const auto e = eig_hermitian(HermitianOperator::identity(4));
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(e.values(i), 1.0, 1e-15);
}

TEST(Spectral, SqrtAndInverseSqrt) {
  std::mt19937_64 rng(13);
  const ComplexMatrix g = random_matrix(3, rng);
  const auto p = HermitianOperator::symmetrized(g * g.adjoint() + ComplexMatrix::Identity(3, 3));
  const auto s = sqrt_psd(p);
  EXPECT_LT(max_abs_diff(s.matrix() * s.matrix(), p.matrix()), 1e-10);
  const auto r = inv_sqrt_pd(p);
  EXPECT_LT(max_abs_diff(r.matrix() * p.matrix() * r.matrix(), ComplexMatrix::Identity(3, 3)), 1e-10);
  EXPECT_TRUE(is_psd(p));
  EXPECT_FALSE(is_psd(-p));
  EXPECT_GT(min_eigenvalue(p), 1.0 - 1e-12);
}

TEST(Norms, TraceNormOfPauliAndFidelityBounds) {
  EXPECT_NEAR(trace_norm(HermitianOperator(pauli::x())), 2.0, 1e-14);
  EXPECT_NEAR(frobenius_norm(pauli::identity()), std::sqrt(2.0), 1e-15);
  ComplexVector zero(2), plus(2);
  zero << 1.0, 0.0;
  plus << qchan::testing::kInvSqrt2, qchan::testing::kInvSqrt2;
  EXPECT_NEAR(fidelity(projector(zero), projector(zero)), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(projector(zero), projector(plus)), 0.5, 1e-12);
  EXPECT_NEAR(root_fidelity(projector(zero), projector(plus)), std::sqrt(0.5), 1e-12);
  const auto mixed = HermitianOperator::identity(2) / 2.0;
  EXPECT_NEAR(fidelity(projector(zero), mixed), 0.5, 1e-12);
}

TEST(HermitianBasis, IsOrthonormalAndRoundTrips) {
  std::mt19937_64 rng(17);
  const HermitianBasis basis(3);
  ASSERT_EQ(basis.size(), 9u);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      EXPECT_NEAR(basis.element(i).inner(basis.element(j)), i == j ? 1.0 : 0.0, 1e-14);
  const auto m = random_hermitian(3, rng);
  EXPECT_LT(max_abs_diff(basis.matrix(basis.coordinates(m.matrix())), m.matrix()), 1e-13);
}

TEST(Pauli, Algebra) {
  const Complex i(0.0, 1.0);
  EXPECT_LT(max_abs_diff(pauli::x() * pauli::y(), i * pauli::z()), 1e-15);
  EXPECT_LT(max_abs_diff(pauli::z() * pauli::z(), pauli::identity()), 1e-15);
  EXPECT_LT(max_abs_diff(swap(2) * swap(2), ComplexMatrix::Identity(4, 4)), 1e-15);
}

}  // namespace
