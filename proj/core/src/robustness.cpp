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
#include <cmath>
#include <random>
#include <stdexcept>

#include "qchan/measures.hpp"

namespace qchan::measures {

using conic::BlockId;
using conic::ConicProgram;
using conic::ConstraintRange;
using conic::LinearFunctional;
using conic::MatrixExpression;
using conic::ScalarId;
using conic::SolveStatus;
using correlations::DeterministicStrategies;
using correlations::enumerate_deterministic;
using linalg::Dims;
using linalg::Subsystem;

namespace {

constexpr std::size_t kMaxHiddenStates = 4096;
constexpr double kZeroMember = 1e-12;

DeterministicStrategies single_party(std::size_t inputs, std::size_t outcomes) {
  auto s = enumerate_deterministic(inputs, outcomes, 1);
  if (s.size() > kMaxHiddenStates)
    throw std::length_error("more than " + std::to_string(kMaxHiddenStates) + " hidden states");
  return s;
}

double clip(double v) { return std::max(0.0, v); }

// True when every input carries the same members, so a single-input model
// already reproduces it.
bool identical_inputs(const std::vector<std::vector<HermitianOperator>>& m) {
  for (std::size_t x = 1; x < m.size(); ++x)
    for (std::size_t a = 0; a < m[x].size(); ++a)
      if ((m[x][a].matrix() - m[0][a].matrix()).cwiseAbs().maxCoeff() > 1e-12) return false;
  return true;
}

std::vector<std::vector<HermitianOperator>> zero_operators(std::size_t nx, std::size_t na, std::size_t d) {
  return std::vector<std::vector<HermitianOperator>>(nx, std::vector<HermitianOperator>(na, HermitianOperator::zero(d)));
}

// Shared feasibility program: sum_l D(a|x,l) X_l = T(a|x), X_l PSD.
MembershipResult decomposition(const std::vector<std::vector<HermitianOperator>>& targets,
                               const ConicSolver& solver) {
  const std::size_t nx = targets.size();
  const std::size_t na = targets.front().size();
  const std::size_t d = targets.front().front().dim();
  const auto strat = single_party(nx, na);
  ConicProgram p;
  std::vector<BlockId> w;
  for (std::size_t l = 0; l < strat.size(); ++l) w.push_back(p.add_psd_block("hidden" + std::to_string(l), d));
  std::vector<std::vector<ConstraintRange>> rows(nx);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t a = 0; a < na; ++a) {
      MatrixExpression e(d);
      for (std::size_t l = 0; l < strat.size(); ++l)
        if (strat.single(l, a, x) != 0.0) e.add(w[l], d);
      rows[x].push_back(p.add_equality(e, targets[x][a].matrix()));
    }
  p.set_objective(LinearFunctional{});
  const auto sol = solver.solve(p);

  MembershipResult r;
  r.solver_status = sol.status;
  if (sol.status == SolveStatus::optimal) {
    r.feasible = true;
    for (std::size_t l = 0; l < strat.size(); ++l) r.model.push_back(HermitianOperator::symmetrized(sol.block(w[l])));
  } else if (sol.status == SolveStatus::infeasible) {
    r.feasible = false;
    r.solver_status = SolveStatus::optimal;  // verdict certified by the ray
    Certificate c;
    c.kind = Certificate::Kind::steering_functional;
    c.offset = 0.0;
    c.operators = zero_operators(nx, na, d);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t a = 0; a < na; ++a) c.operators[x][a] = sol.dual_matrix(rows[x][a]);
    r.witness = std::move(c);
  }
  return r;
}

}  // namespace

std::string to_string(ValueStatus s) {
  switch (s) {
    case ValueStatus::exact: return "exact";
    case ValueStatus::lower_bound: return "lower-bound";
    case ValueStatus::upper_bound: return "upper-bound";
  }
  return "unknown";
}

std::string to_string(Certificate::Kind k) {
  switch (k) {
    case Certificate::Kind::steering_functional: return "steering-functional";
    case Certificate::Kind::bell_functional: return "bell-functional";
    case Certificate::Kind::entanglement_witness: return "entanglement-witness";
  }
  return "unknown";
}

double evaluate(const Certificate& c, const Assemblage& a) {
  if (c.operators.size() != a.inputs()) throw DimensionError("certificate does not match assemblage inputs");
  double s = c.offset;
  for (std::size_t x = 0; x < a.inputs(); ++x) {
    if (c.operators[x].size() != a.outcomes()) throw DimensionError("certificate does not match assemblage outcomes");
    for (std::size_t k = 0; k < a.outcomes(); ++k) s += c.operators[x][k].inner(a(k, x));
  }
  return s;
}

double evaluate(const Certificate& c, const CorrelationTable& t) {
  const std::size_t n = t.inputs_first() * t.inputs_second() * t.outcomes_first() * t.outcomes_second();
  if (c.coefficients.size() != n) throw DimensionError("certificate does not match table");
  double s = c.offset;
  std::size_t i = 0;
  for (std::size_t x = 0; x < t.inputs_first(); ++x)
    for (std::size_t y = 0; y < t.inputs_second(); ++y)
      for (std::size_t a = 0; a < t.outcomes_first(); ++a)
        for (std::size_t b = 0; b < t.outcomes_second(); ++b) s += c.coefficients[i++] * t(a, b, x, y);
  return s;
}

double evaluate(const Certificate& c, const QuantumChannel& e) {
  if (c.operators.empty() || c.operators[0].empty()) throw DimensionError("empty witness");
  return -c.operators[0][0].inner(e.choi());
}

// ---------------------------------------------------------------------------
// Steering and incompatibility

MembershipResult lhs_membership(const Assemblage& a, const ConicSolver& solver) {
  return decomposition(a.members(), solver);
}

RobustnessResult steering_robustness(const Assemblage& a, const ConicSolver& solver) {
  const std::size_t nx = a.inputs();
  const std::size_t na = a.outcomes();
  const std::size_t d = a.dim();
  RobustnessResult r;
  if (identical_inputs(a.members())) {
    r.value = 0.0;
    return r;
  }
  const auto strat = single_party(nx, na);
  ConicProgram p;
  std::vector<BlockId> w;
  LinearFunctional obj;
  for (std::size_t l = 0; l < strat.size(); ++l) {
    w.push_back(p.add_psd_block("omega" + std::to_string(l), d));
    obj.add_trace(w.back(), d);
  }
  std::vector<std::vector<std::optional<ConstraintRange>>> rows(nx, std::vector<std::optional<ConstraintRange>>(na));
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t k = 0; k < na; ++k) {
      if (a(k, x).trace() <= kZeroMember) continue;  // dominated
      MatrixExpression e(d);
      for (std::size_t l = 0; l < strat.size(); ++l)
        if (strat.single(l, k, x) != 0.0) e.add(w[l], d);
      e.add_constant(-a(k, x).matrix());
      rows[x][k] = p.add_psd_constraint("dom" + std::to_string(x) + "_" + std::to_string(k), e).rows;
    }
  p.set_objective(obj, -1.0);
  const auto sol = solver.solve(p);
  r.solver_status = sol.status;
  r.gap = sol.gap;
  if (sol.status != SolveStatus::optimal) return r;
  r.value = clip(sol.objective);
  Certificate c;
  c.kind = Certificate::Kind::steering_functional;
  c.offset = -1.0;
  c.operators = zero_operators(nx, na, d);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t k = 0; k < na; ++k)
      if (rows[x][k]) c.operators[x][k] = -sol.dual_matrix(*rows[x][k]);
  r.certificate = std::move(c);
  return r;
}

Assemblage canonical_assemblage(const MeasurementCollection& m, const QuantumChannel& e) {
  if (m.dim() != e.out_dim()) throw DimensionError("measurements do not match channel output");
  const double d = static_cast<double>(e.in_dim());
  std::vector<std::vector<HermitianOperator>> out(m.inputs());
  for (std::size_t y = 0; y < m.inputs(); ++y)
    for (std::size_t b = 0; b < m.outcomes(); ++b)
      out[y].push_back(HermitianOperator::symmetrized(e.dual_apply(m[y][b]).matrix().transpose() / d));
  return Assemblage(std::move(out));
}

RobustnessResult incompatibility_robustness(const MeasurementCollection& m, const QuantumChannel& e,
                                            const ConicSolver& solver) {
  return steering_robustness(canonical_assemblage(m, e), solver);
}

RobustnessResult incompatibility_robustness(const MeasurementCollection& m, const ConicSolver& solver) {
  return incompatibility_robustness(m, QuantumChannel::identity(m.dim()), solver);
}

std::vector<std::vector<HermitianOperator>> evolved_effects(const MeasurementCollection& m, const QuantumChannel& e) {
  std::vector<std::vector<HermitianOperator>> out(m.inputs());
  for (std::size_t y = 0; y < m.inputs(); ++y)
    for (std::size_t b = 0; b < m.outcomes(); ++b) out[y].push_back(e.dual_apply(m[y][b]));
  return out;
}

MembershipResult jm_membership(const std::vector<std::vector<HermitianOperator>>& effects, const ConicSolver& solver) {
  if (effects.empty() || effects.front().empty()) throw DimensionError("empty measurement collection");
  return decomposition(effects, solver);
}

RobustnessResult jm_robustness(const std::vector<std::vector<HermitianOperator>>& effects, const ConicSolver& solver) {
  if (effects.empty() || effects.front().empty()) throw DimensionError("empty measurement collection");
  const std::size_t nx = effects.size();
  const std::size_t na = effects.front().size();
  const std::size_t d = effects.front().front().dim();
  RobustnessResult r;
  if (identical_inputs(effects)) return r;
  const auto strat = single_party(nx, na);
  ConicProgram p;
  std::vector<BlockId> g;
  for (std::size_t l = 0; l < strat.size(); ++l) g.push_back(p.add_psd_block("parent" + std::to_string(l), d));
  const ScalarId t = p.add_free_scalar("r");
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t k = 0; k < na; ++k) {
      MatrixExpression e(d);
      for (std::size_t l = 0; l < strat.size(); ++l)
        if (strat.single(l, k, x) != 0.0) e.add(g[l], d);
      e.add_constant(-effects[x][k].matrix());
      p.add_psd_constraint("dom" + std::to_string(x) + "_" + std::to_string(k), e);
    }
  MatrixExpression sum(d);
  for (const auto& b : g) sum.add(b, d);
  sum.add(t, -ComplexMatrix::Identity(d, d));
  p.add_equality(sum, ComplexMatrix::Identity(d, d));
  LinearFunctional obj;
  obj.add(t, 1.0);
  p.set_objective(obj);
  const auto sol = solver.solve(p);
  r.solver_status = sol.status;
  r.gap = sol.gap;
  if (sol.status == SolveStatus::optimal) r.value = clip(sol.objective);
  return r;
}

std::vector<MeasurementCollection> default_sb_family(std::size_t random_triples, std::uint64_t seed) {
  std::vector<MeasurementCollection> fam{channels::pauli_measurements()};
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < random_triples; ++k)
    fam.push_back(MeasurementCollection({channels::random_dichotomic_qubit(rng), channels::random_dichotomic_qubit(rng),
                                         channels::random_dichotomic_qubit(rng)}));
  return fam;
}

RobustnessResult non_sb_robustness(const QuantumChannel& e, const std::vector<MeasurementCollection>& family,
                                   const ConicSolver& solver) {
  if (family.empty()) throw std::invalid_argument("empty measurement family");
  RobustnessResult best;
  best.value = -1.0;
  for (const auto& m : family) {
    RobustnessResult r = incompatibility_robustness(m, e, solver);
    if (!r.ok()) {
      r.status = ValueStatus::lower_bound;
      return r;
    }
    if (r.value > best.value) best = std::move(r);
  }
  best.status = ValueStatus::lower_bound;
  return best;
}

// ---------------------------------------------------------------------------
// Quantum memory

RobustnessResult quantum_memory_robustness(const QuantumChannel& e, const ConicSolver& solver) {
  const std::size_t din = e.in_dim();
  const std::size_t dout = e.out_dim();
  const Dims dims{din, dout};
  const std::size_t n = din * dout;
  ConicProgram p;
  const BlockId y = p.add_psd_block("noise", n);
  const ScalarId t = p.add_free_scalar("t");

  MatrixExpression marg(din);
  marg.add_partial_trace(y, dims, Subsystem::second).add(t, -ComplexMatrix::Identity(din, din));
  p.add_equality(marg, ComplexMatrix::Zero(din, din));

  MatrixExpression ppt(n);
  ppt.add_partial_transpose(y, dims, Subsystem::first)
      .add_constant(linalg::partial_transpose(e.choi().matrix(), dims, Subsystem::first));
  const auto slack = p.add_psd_constraint("ppt", ppt);

  LinearFunctional obj;
  obj.add(t, 1.0);
  p.set_objective(obj);
  const auto sol = solver.solve(p);

  RobustnessResult r;
  r.status = (din * dout <= 6) ? ValueStatus::exact : ValueStatus::lower_bound;
  r.solver_status = sol.status;
  r.gap = sol.gap;
  if (sol.status != SolveStatus::optimal) return r;
  r.value = clip(sol.objective);
  const HermitianOperator w = -sol.dual_matrix(slack.rows);
  Certificate c;
  c.kind = Certificate::Kind::entanglement_witness;
  c.offset = 0.0;
  c.operators = {{linalg::partial_transpose(w, dims, Subsystem::first)}};
  r.certificate = std::move(c);
  return r;
}

// ---------------------------------------------------------------------------
// Non-macrorealism

RobustnessResult non_macrorealism_robustness(const CorrelationTable& t, MacrorealismOptions options,
                                             const ConicSolver& solver) {
  const std::size_t nx = t.inputs_first(), ny = t.inputs_second();
  const std::size_t na = t.outcomes_first(), nb = t.outcomes_second();
  if (nx != ny || na != nb) throw DimensionError("strategy enumeration needs equal arities for both times");
  const auto strat = enumerate_deterministic(nx, na, 2);
  ConicProgram p;
  std::vector<BlockId> w;
  LinearFunctional obj;
  const ComplexMatrix one = ComplexMatrix::Identity(1, 1);
  for (std::size_t l = 0; l < strat.size(); ++l) {
    w.push_back(p.add_psd_block("w" + std::to_string(l), 1));
    obj.add(w.back(), one);
  }
  struct Row {
    std::optional<ConstraintRange> range;
    std::optional<BlockId> slack;
  };
  std::vector<Row> rows;
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t a = 0; a < na; ++a)
        for (std::size_t b = 0; b < nb; ++b) {
          const double pv = t(a, b, x, y);
          if (pv <= 0.0 && !options.no_signaling_noise) {
            rows.push_back({});
            continue;
          }
          MatrixExpression e(1);
          for (std::size_t l = 0; l < strat.size(); ++l)
            if (strat.product(l, a, b, x, y) != 0.0) e.add(w[l], 1);
          e.add_constant(-pv * one);
          const auto c = p.add_psd_constraint("s", e);
          rows.push_back({c.rows, c.slack});
        }
  if (options.no_signaling_noise) {
    auto slack = [&](std::size_t x, std::size_t y, std::size_t a, std::size_t b) {
      return *rows[((x * ny + y) * na + a) * nb + b].slack;
    };
    // Marginals of the slack must not depend on the other party's input.
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t a = 0; a < na; ++a)
        for (std::size_t y = 1; y < ny; ++y) {
          LinearFunctional f;
          for (std::size_t b = 0; b < nb; ++b) f.add(slack(x, y, a, b), one).add(slack(x, 0, a, b), -one);
          p.add_equality(f, 0.0);
        }
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t x = 1; x < nx; ++x) {
          LinearFunctional f;
          for (std::size_t a = 0; a < na; ++a) f.add(slack(x, y, a, b), one).add(slack(0, y, a, b), -one);
          p.add_equality(f, 0.0);
        }
  }
  p.set_objective(obj, -1.0);
  const auto sol = solver.solve(p);
  RobustnessResult r;
  r.solver_status = sol.status;
  r.gap = sol.gap;
  if (sol.status != SolveStatus::optimal) return r;
  r.value = clip(sol.objective);
  if (!options.no_signaling_noise) {
    Certificate c;
    c.kind = Certificate::Kind::bell_functional;
    c.offset = -1.0;
    for (const auto& row : rows) c.coefficients.push_back(row.range ? -sol.dual_matrix(*row.range)(0, 0).real() : 0.0);
    r.certificate = std::move(c);
  }
  return r;
}

}  // namespace qchan::measures
