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

#pragma once

// Small dense semidefinite programs over Hermitian PSD blocks.
//
// A ConicProgram is stated in primal standard form with free scalars:
//
//   minimize    sum_b Re Tr(C_b X_b) + c_f . t + c_0
//   subject to  sum_b Re Tr(A_ib X_b) + a_if . t = b_i      (i = 1..p)
//               X_b Hermitian PSD, t free.
//
// Its dual is
//
//   maximize    b . nu + c_0
//   subject to  Z_b = C_b - sum_i nu_i A_ib  PSD,   c_f - sum_i nu_i a_if = 0.
//
// Inequalities (LMIs) are added through slack blocks. 1x1 blocks are
// nonnegative reals, so linear programs are expressed in the same model.

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qchan/linalg.hpp"

namespace qchan::conic {

struct BlockId {
  std::size_t index = 0;
};

struct ScalarId {
  std::size_t index = 0;
};

/// Contiguous range of equality rows produced by one matrix equality, in
/// HermitianBasis(dim) order.
struct ConstraintRange {
  std::size_t first = 0;
  std::size_t count = 0;
  std::size_t dim = 0;
};

/// A real-linear functional over program variables.
class LinearFunctional {
 public:
  struct BlockTerm {
    std::size_t block;
    ComplexMatrix coeff;  // Hermitian; contributes Re Tr(coeff X_b)
  };
  struct ScalarTerm {
    std::size_t scalar;
    double coeff;
  };

  LinearFunctional& add(BlockId b, const ComplexMatrix& coeff);
  LinearFunctional& add(ScalarId s, double coeff);
  /// Adds c * Re Tr(X_b) (the trace of a block).
  LinearFunctional& add_trace(BlockId b, std::size_t dim, double c = 1.0);

  const std::vector<BlockTerm>& block_terms() const { return blocks_; }
  const std::vector<ScalarTerm>& scalar_terms() const { return scalars_; }

 private:
  std::vector<BlockTerm> blocks_;
  std::vector<ScalarTerm> scalars_;
};

/// Affine Hermitian-matrix-valued expression in the program variables.
/// Each block term is stored through the adjoint of its linear map, which is
/// what lowering to scalar equality rows needs.
class MatrixExpression {
 public:
  using Adjoint = std::function<ComplexMatrix(const ComplexMatrix&)>;

  explicit MatrixExpression(std::size_t dim);

  std::size_t dim() const { return dim_; }

  /// c * X_b; the block must have dimension dim().
  MatrixExpression& add(BlockId b, std::size_t block_dim, double c = 1.0);
  /// c * Tr_traced(X_b) for a block on dims.first * dims.second.
  MatrixExpression& add_partial_trace(BlockId b, linalg::Dims dims, linalg::Subsystem traced,
                                      double c = 1.0);
  /// c * X_b^{T_side}.
  MatrixExpression& add_partial_transpose(BlockId b, linalg::Dims dims,
                                          linalg::Subsystem transposed, double c = 1.0);
  /// c * (principal sub-block of X_b starting at offset, size dim()).
  MatrixExpression& add_sub_block(BlockId b, std::size_t block_dim, std::size_t offset,
                                  double c = 1.0);
  /// t * M for a free scalar t and a Hermitian M.
  MatrixExpression& add(ScalarId s, const ComplexMatrix& m);
  MatrixExpression& add_constant(const ComplexMatrix& m);

  /// Re Tr(E * expr) for Hermitian E, split into its linear part and the
  /// constant offset.
  LinearFunctional functional(const ComplexMatrix& e, double* constant) const;

 private:
  struct Term {
    std::size_t block;
    Adjoint adjoint;
  };
  struct ScalarTerm {
    std::size_t scalar;
    ComplexMatrix m;
  };
  std::size_t dim_;
  std::vector<Term> terms_;
  std::vector<ScalarTerm> scalar_terms_;
  ComplexMatrix constant_;
};

struct BlockInfo {
  std::string label;
  std::size_t dim;
};

struct Equality {
  LinearFunctional lhs;
  double rhs;
};

/// Slack block introduced for an LMI together with the rows defining it.
struct PsdConstraint {
  BlockId slack;
  ConstraintRange rows;
};

class ConicProgram {
 public:
  BlockId add_psd_block(std::string label, std::size_t dim);
  ScalarId add_free_scalar(std::string label);

  std::size_t add_equality(LinearFunctional lhs, double rhs);
  /// lhs == rhs entrywise (rhs Hermitian of dimension lhs.dim()).
  ConstraintRange add_equality(const MatrixExpression& lhs, const ComplexMatrix& rhs);
  /// expr PSD, via a slack block S with S - expr = 0.
  PsdConstraint add_psd_constraint(std::string label, const MatrixExpression& expr);

  void set_objective(LinearFunctional objective, double constant = 0.0);

  const std::vector<BlockInfo>& blocks() const { return blocks_; }
  const std::vector<std::string>& scalars() const { return scalars_; }
  const std::vector<Equality>& equalities() const { return equalities_; }
  const LinearFunctional& objective() const { return objective_; }
  double objective_constant() const { return objective_constant_; }

  /// Throws std::invalid_argument if a functional references an undeclared
  /// variable or a coefficient has the wrong shape.
  void validate() const;

 private:
  void check_block(std::size_t index) const;

  std::vector<BlockInfo> blocks_;
  std::vector<std::string> scalars_;
  std::vector<Equality> equalities_;
  LinearFunctional objective_;
  double objective_constant_ = 0.0;
};

enum class SolveStatus { optimal, infeasible, unbounded, numerical_failure };

std::string to_string(SolveStatus s);

struct Solution {
  SolveStatus status = SolveStatus::numerical_failure;
  double objective = 0.0;       // primal objective incl. constant
  double dual_objective = 0.0;  // b . nu + constant
  double gap = 0.0;             // complementarity sum_b <X_b, Z_b>
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;

  std::vector<ComplexMatrix> blocks;  // X_b
  std::vector<double> scalars;        // t
  /// Multipliers nu, one per equality. For status infeasible this is a
  /// Farkas ray: sum_i nu_i A_ib <= 0, a_f . nu = 0 and b . nu = 1.
  RealVector dual;
  std::vector<ComplexMatrix> dual_slacks;  // Z_b

  const ComplexMatrix& block(BlockId b) const { return blocks.at(b.index); }
  double scalar(ScalarId s) const { return scalars.at(s.index); }
  /// sum_k nu_{first+k} E_k over the basis of the range.
  linalg::HermitianOperator dual_matrix(const ConstraintRange& r) const;
};

struct SolverOptions {
  int max_iterations = 200;
  double gap_tolerance = 1e-8;          // absolute or relative complementarity gap
  double feasibility_tolerance = 1e-9;  // relative primal/dual residuals
  double step_fraction = 0.99;
};

/// Adapter seam: anything that can solve a ConicProgram.
class ConicSolver {
 public:
  virtual ~ConicSolver() = default;
  virtual Solution solve(const ConicProgram& program) const = 0;
};

/// Homogeneous self-dual primal-dual interior-point method with
/// Nesterov-Todd scaling and Mehrotra predictor-corrector steps.
class InteriorPointSolver final : public ConicSolver {
 public:
  explicit InteriorPointSolver(SolverOptions options = {}) : options_(options) {}
  Solution solve(const ConicProgram& program) const override;
  const SolverOptions& options() const { return options_; }

 private:
  SolverOptions options_;
};

/// Process-wide default solver used when callers do not pass one.
const ConicSolver& default_solver();

Solution solve(const ConicProgram& program);

struct VerificationReport {
  double max_equality_residual = 0.0;
  double min_primal_eigenvalue = 0.0;
  double min_dual_eigenvalue = 0.0;
  double max_dual_scalar_residual = 0.0;
  double duality_gap = 0.0;       // primal objective - dual objective
  double complementarity = 0.0;   // sum_b <X_b, Z_b> recomputed
  bool passed = true;
  std::vector<std::string> violations;
};

/// Recomputes residuals, block eigenvalues and the duality gap from the raw
/// values in s, flagging anything above `threshold` (default 1e-7).
VerificationReport verify_solution(const ConicProgram& program, const Solution& s,
                                   double threshold = 1e-7);

/// Debug dump of a program as JSON: blocks, scalars, equality constraints as
/// sparse (row, col, re, im) triplets per block, and the objective.
std::string to_json(const ConicProgram& program);

}  // namespace qchan::conic
