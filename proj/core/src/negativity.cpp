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

#include <algorithm>

#include "qchan/measures.hpp"

namespace qchan::measures {

using conic::BlockId;
using conic::ConicProgram;
using conic::LinearFunctional;
using conic::MatrixExpression;
using conic::ScalarId;
using linalg::Dims;
using linalg::Subsystem;

double temporal_negativity(const PseudoDensityOperator& p) {
  return std::max(0.0, (linalg::trace_norm(p.op()) - 1.0) / 2.0);
}

NegativityResult diamond_norm(const HermitianOperator& choi, std::size_t d_in, std::size_t d_out,
                              const ConicSolver& solver) {
  const std::size_t n = d_in * d_out;
  if (choi.dim() != n) throw DimensionError("Choi dimension does not match d_in * d_out");
  const Dims dims{d_in, d_out};
  ConicProgram p;
  const BlockId y0 = p.add_psd_block("positive", n);
  const BlockId y1 = p.add_psd_block("negative", n);
  const ScalarId t = p.add_free_scalar("t");

  MatrixExpression split(n);
  split.add(y0, n).add(y1, n, -1.0);
  p.add_equality(split, choi.matrix());

  MatrixExpression bound(d_in);
  bound.add(t, ComplexMatrix::Identity(d_in, d_in))
      .add_partial_trace(y0, dims, Subsystem::second, -1.0)
      .add_partial_trace(y1, dims, Subsystem::second, -1.0);
  p.add_psd_constraint("bound", bound);

  LinearFunctional obj;
  obj.add(t, 1.0);
  p.set_objective(obj);
  const auto sol = solver.solve(p);

  NegativityResult r;
  r.solver_status = sol.status;
  r.gap = sol.gap;
  if (sol.status == conic::SolveStatus::optimal) {
    r.diamond_norm = sol.objective;
    r.negativity = std::max(0.0, (sol.objective - 1.0) / 2.0);
  }
  return r;
}

NegativityResult channel_negativity(const QuantumChannel& e, const ConicSolver& solver) {
  // Choi matrix of E o T is the input-side partial transpose of J_E.
  const Dims dims{e.in_dim(), e.out_dim()};
  const HermitianOperator j = linalg::partial_transpose(e.choi(), dims, Subsystem::first);
  return diamond_norm(j, e.in_dim(), e.out_dim(), solver);
}

}  // namespace qchan::measures
