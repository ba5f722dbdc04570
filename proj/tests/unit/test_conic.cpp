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

#include "qchan/conic.hpp"
#include "test_support.hpp"

namespace {

using namespace qchan;
using namespace qchan::conic;
using linalg::HermitianOperator;

HermitianOperator random_hermitian(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
  return HermitianOperator::symmetrized(m + m.adjoint());
}

ComplexMatrix identity_choi() {
  ComplexMatrix j = ComplexMatrix::Zero(4, 4);
  j(0, 0) = j(0, 3) = j(3, 0) = j(3, 3) = 1.0;
  return j;
}

TEST(ConicSolver, MinimumEigenvalueOverDensityMatrices) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    const auto c = random_hermitian(3, rng);
    ConicProgram p;
    const auto x = p.add_psd_block("X", 3);
    p.add_equality(LinearFunctional{}.add_trace(x, 3), 1.0);
    p.set_objective(LinearFunctional{}.add(x, c.matrix()));
    const auto s = solve(p);
    ASSERT_EQ(s.status, SolveStatus::optimal);
    EXPECT_NEAR(s.objective, linalg::min_eigenvalue(c), 1e-7);
    EXPECT_NEAR(s.dual_objective, s.objective, 1e-7);
    const auto report = verify_solution(p, s);
    EXPECT_TRUE(report.passed) << (report.violations.empty() ? "" : report.violations.front());
  }
}

TEST(ConicSolver, MaximumEigenvalueThroughFreeScalarAndPsdConstraint) {
  std::mt19937_64 rng(2);
  const auto c = random_hermitian(4, rng);
  ConicProgram p;
  const auto t = p.add_free_scalar("t");
  MatrixExpression e(4);
  e.add(t, ComplexMatrix::Identity(4, 4)).add_constant(-c.matrix());
  const auto con = p.add_psd_constraint("t - C", e);
  p.set_objective(LinearFunctional{}.add(t, 1.0));
  const auto s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::optimal);
  EXPECT_NEAR(s.scalar(t), linalg::max_eigenvalue(c), 1e-7);
  // The negated multiplier of the PSD constraint is a density matrix on the
  // top eigenspace.
  const auto w = -s.dual_matrix(con.rows);
  EXPECT_NEAR(w.trace(), 1.0, 1e-6);
  EXPECT_NEAR(w.inner(c), linalg::max_eigenvalue(c), 1e-6);
  EXPECT_TRUE(verify_solution(p, s).passed);
}

TEST(ConicSolver, ObjectiveConstantIsReported) {
  ConicProgram p;
  const auto x = p.add_psd_block("X", 2);
  p.add_equality(LinearFunctional{}.add_trace(x, 2), 1.0);
  p.set_objective(LinearFunctional{}.add_trace(x, 2), 2.5);
  const auto s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::optimal);
  EXPECT_NEAR(s.objective, 3.5, 1e-8);
}

TEST(ConicSolver, RootFidelityFromSubBlockProgram) {
  ComplexVector k0(2), k1(2);
  k0 << 1.0, 0.0;
  k1 << std::cos(0.4), std::sin(0.4);
  const auto rho = 0.8 * linalg::projector(k0) + 0.2 * HermitianOperator::identity(2) / 2.0;
  const auto sigma = 0.6 * linalg::projector(k1) + 0.4 * HermitianOperator::identity(2) / 2.0;
  ConicProgram p;
  const auto z = p.add_psd_block("Z", 4);
  MatrixExpression top(2), bottom(2);
  top.add_sub_block(z, 4, 0);
  bottom.add_sub_block(z, 4, 2);
  p.add_equality(top, rho.matrix());
  p.add_equality(bottom, sigma.matrix());
  ComplexMatrix c = ComplexMatrix::Zero(4, 4);
  c.topRightCorner(2, 2) = -0.5 * ComplexMatrix::Identity(2, 2);
  c.bottomLeftCorner(2, 2) = -0.5 * ComplexMatrix::Identity(2, 2);
  p.set_objective(LinearFunctional{}.add(z, c));
  const auto s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::optimal);
  EXPECT_NEAR(-s.objective, linalg::root_fidelity(rho, sigma), 1e-7);
}

TEST(ConicSolver, PartialTraceAndTransposeExpressions) {
  // min t s.t. Y PSD, Tr_2 Y = t 1, (J + Y)^{T_1} PSD, for J the identity
  // channel Choi matrix; the optimum is 1.
  const ComplexMatrix j = identity_choi();
  ConicProgram p;
  const auto y = p.add_psd_block("Y", 4);
  const auto t = p.add_free_scalar("t");
  MatrixExpression tr(2);
  tr.add_partial_trace(y, {2, 2}, linalg::Subsystem::second).add(t, -ComplexMatrix::Identity(2, 2));
  p.add_equality(tr, ComplexMatrix::Zero(2, 2));
  MatrixExpression pt(4);
  pt.add_partial_transpose(y, {2, 2}, linalg::Subsystem::first)
      .add_constant(linalg::partial_transpose(j, {2, 2}, linalg::Subsystem::first));
  p.add_psd_constraint("ppt", pt);
  p.set_objective(LinearFunctional{}.add(t, 1.0));
  const auto s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::optimal);
  EXPECT_NEAR(s.objective, 1.0, 1e-7);
  EXPECT_TRUE(verify_solution(p, s).passed);
}

TEST(ConicSolver, DetectsInfeasibilityWithFarkasRay) {
  ConicProgram p;
  const auto x = p.add_psd_block("X", 2);
  p.add_equality(LinearFunctional{}.add_trace(x, 2), -1.0);
  p.set_objective(LinearFunctional{});
  const auto s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::infeasible);
  ASSERT_EQ(s.dual.size(), 1);
  EXPECT_NEAR(-1.0 * s.dual(0), 1.0, 1e-8);  // b . nu = 1
  EXPECT_LE(s.dual(0), 0.0);                 // nu * 1 <= 0
}

TEST(ConicSolver, DetectsInconsistentLinearSystem) {
  ConicProgram p;
  const auto x = p.add_psd_block("X", 2);
  p.add_equality(LinearFunctional{}.add_trace(x, 2), 1.0);
  p.add_equality(LinearFunctional{}.add_trace(x, 2), 2.0);
  const auto s = solve(p);
  EXPECT_EQ(s.status, SolveStatus::infeasible);
}

TEST(ConicSolver, ToleratesDependentRows) {
  ConicProgram p;
  const auto x = p.add_psd_block("X", 2);
  p.add_equality(LinearFunctional{}.add_trace(x, 2), 1.0);
  p.add_equality(LinearFunctional{}.add_trace(x, 2, 2.0), 2.0);
  p.set_objective(LinearFunctional{}.add(x, linalg::pauli::z()));
  const auto s = solve(p);
  ASSERT_EQ(s.status, SolveStatus::optimal);
  EXPECT_NEAR(s.objective, -1.0, 1e-7);
  EXPECT_EQ(s.dual.size(), 2);
}

TEST(ConicSolver, DetectsUnboundedness) {
  {
    ConicProgram p;
    const auto x = p.add_psd_block("X", 2);
    ComplexMatrix e00 = ComplexMatrix::Zero(2, 2), e11 = ComplexMatrix::Zero(2, 2);
    e00(0, 0) = 1.0;
    e11(1, 1) = -1.0;
    p.add_equality(LinearFunctional{}.add(x, e00), 1.0);
    p.set_objective(LinearFunctional{}.add(x, e11));
    EXPECT_EQ(solve(p).status, SolveStatus::unbounded);
  }
  {
    ConicProgram p;
    const auto t = p.add_free_scalar("t");
    p.add_psd_block("X", 1);
    p.set_objective(LinearFunctional{}.add(t, 1.0));
    EXPECT_EQ(solve(p).status, SolveStatus::unbounded);
  }
}

// min <C, X> over density matrices with one off-diagonal constraint.
ConicProgram random_program(std::mt19937_64& rng, double scale) {
  const auto c = random_hermitian(3, rng);
  ConicProgram p;
  const auto x = p.add_psd_block("X", 3);
  p.add_equality(LinearFunctional{}.add_trace(x, 3), 1.0);
  ComplexMatrix e01 = ComplexMatrix::Zero(3, 3);
  e01(0, 1) = e01(1, 0) = 0.5;
  p.add_equality(LinearFunctional{}.add(x, e01), 0.1);
  p.set_objective(LinearFunctional{}.add(x, scale * c.matrix()));
  return p;
}

TEST(ConicSolver, WeakDualityScalingAndDeterminism) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    const auto base = solve(random_program(rng, 1.0));
    ASSERT_EQ(base.status, SolveStatus::optimal);
    EXPECT_LE(base.dual_objective, base.objective + 1e-7);
    for (double c : {2.0, 10.0}) {
      std::mt19937_64 again(seed);
      const auto scaled = solve(random_program(again, c));
      ASSERT_EQ(scaled.status, SolveStatus::optimal);
      EXPECT_LE(std::abs(scaled.objective - c * base.objective), 1e-7 * std::max(1.0, std::abs(c * base.objective)));
    }
    std::mt19937_64 same(seed);
    EXPECT_NEAR(solve(random_program(same, 1.0)).objective, base.objective, 1e-9);
  }
}

TEST(ConicSolver, VerificationFlagsCorruptedSolution) {
  std::mt19937_64 rng(4);
  const auto p = random_program(rng, 1.0);
  auto s = solve(p);
  ASSERT_TRUE(verify_solution(p, s).passed);
  // Push one eigenvalue of the primal block to -1e-3.
  const auto e = linalg::eig_hermitian(linalg::HermitianOperator::symmetrized(s.blocks[0]));
  const Eigen::Index last = e.values.size() - 1;
  const double shift = e.values(last) + 1e-3;
  s.blocks[0] -= shift * e.vectors.col(last) * e.vectors.col(last).adjoint();
  const auto report = verify_solution(p, s);
  EXPECT_FALSE(report.passed);
  EXPECT_LT(report.min_primal_eigenvalue, -5e-4);
}

TEST(ConicProgram, ValidationRejectsUnknownVariables) {
  {
    ConicProgram p;
    p.add_psd_block("X", 2);
    LinearFunctional bad;
    bad.add(BlockId{5}, ComplexMatrix::Identity(2, 2));
    p.add_equality(bad, 1.0);
    EXPECT_THROW(p.validate(), std::invalid_argument);
    EXPECT_THROW(solve(p), std::invalid_argument);
  }
  {
    ConicProgram p;
    p.add_psd_block("X", 2);
    LinearFunctional wrong_shape;
    wrong_shape.add(BlockId{0}, ComplexMatrix::Identity(3, 3));
    p.add_equality(wrong_shape, 1.0);
    EXPECT_THROW(p.validate(), std::invalid_argument);
  }
}

TEST(ConicProgram, JsonDumpListsStructure) {
  ConicProgram p;
  const auto x = p.add_psd_block("rho", 2);
  p.add_equality(LinearFunctional{}.add_trace(x, 2), 1.0);
  const std::string j = to_json(p);
  EXPECT_NE(j.find("\"rho\""), std::string::npos);
  EXPECT_NE(j.find("equalities"), std::string::npos);
}

TEST(ConicSolver, StatusNames) {
  EXPECT_EQ(to_string(SolveStatus::numerical_failure), "numerical-failure");
  EXPECT_EQ(to_string(SolveStatus::optimal), "optimal");
}

}  // namespace
