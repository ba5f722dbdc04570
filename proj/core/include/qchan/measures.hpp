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

// Robustness measures, negativities and the depolarizing hierarchy.
//
// All robustnesses are generalized robustnesses: the admixed noise is an
// arbitrary object of the same kind (assemblage, channel, distribution).

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qchan/channels.hpp"
#include "qchan/conic.hpp"
#include "qchan/correlations.hpp"

namespace qchan::measures {

using channels::MeasurementCollection;
using channels::PseudoDensityOperator;
using channels::QuantumChannel;
using conic::ConicSolver;
using correlations::Assemblage;
using correlations::CorrelationTable;
using linalg::HermitianOperator;

inline constexpr double kValueFloor = 1e-9;

enum class ValueStatus { exact, lower_bound, upper_bound };
std::string to_string(ValueStatus s);

/// Dual certificate of a robustness program.
struct Certificate {
  enum class Kind {
    steering_functional,  // F(a|x) PSD, 1 - sum_ax D(a|x,l) F(a|x) PSD for all l
    bell_functional,      // F(a,b|x,y) >= 0, sum F D_l <= 1 for all l
    entanglement_witness  // W with Tr(W J_sep) >= 0 on PPT Choi matrices
  };
  Kind kind = Kind::steering_functional;
  /// Steering: operators[x][a]. Witness: operators[0][0] is W.
  std::vector<std::vector<HermitianOperator>> operators;
  /// Bell functional coefficients in CorrelationTable index order (x,y,a,b).
  std::vector<double> coefficients;
  /// Value reproduced by evaluate(): linear part + offset.
  double offset = -1.0;
};

std::string to_string(Certificate::Kind k);

/// sum_ax Tr[F(a|x) sigma(a|x)] + offset.
double evaluate(const Certificate& c, const Assemblage& a);
/// sum F(a,b|x,y) p(a,b|x,y) + offset.
double evaluate(const Certificate& c, const CorrelationTable& t);
/// -Tr(W J_E) with J_E the unnormalized Choi matrix.
double evaluate(const Certificate& c, const QuantumChannel& e);

struct RobustnessResult {
  double value = 0.0;  // clipped at 0 below kValueFloor
  ValueStatus status = ValueStatus::exact;
  conic::SolveStatus solver_status = conic::SolveStatus::optimal;
  double gap = 0.0;
  std::optional<Certificate> certificate;

  bool ok() const { return solver_status == conic::SolveStatus::optimal; }
};

/// Outcome of an LHS / joint-measurability feasibility test.
struct MembershipResult {
  bool feasible = false;
  conic::SolveStatus solver_status = conic::SolveStatus::optimal;
  /// For infeasible inputs: a functional F with evaluate(F, input) = 1
  /// (offset 0) while every member of the free set scores <= 0.
  std::optional<Certificate> witness;
  /// Hidden states omega_l (or parent POVM G_l) for feasible inputs.
  std::vector<HermitianOperator> model;
};

// Steering and incompatibility -------------------------------------------------

/// LHS feasibility: sigma(a|x) = sum_l D(a|x,l) omega_l, omega_l PSD.
MembershipResult lhs_membership(const Assemblage& a, const ConicSolver& solver = conic::default_solver());

/// min sum_l Tr omega_l - 1  s.t.  sum_l D(a|x,l) omega_l >= sigma(a|x).
RobustnessResult steering_robustness(const Assemblage& a, const ConicSolver& solver = conic::default_solver());

/// Canonical assemblage [E^dag(M_{b|y})]^T / d of a channel and a collection.
Assemblage canonical_assemblage(const MeasurementCollection& m, const QuantumChannel& e);

/// Steering robustness of the canonical assemblage.
RobustnessResult incompatibility_robustness(const MeasurementCollection& m, const QuantumChannel& e,
                                            const ConicSolver& solver = conic::default_solver());
RobustnessResult incompatibility_robustness(const MeasurementCollection& m,
                                            const ConicSolver& solver = conic::default_solver());

/// Joint measurability of {A_{a|x}}: G_l PSD with sum_l D(a|x,l) G_l = A_{a|x}.
MembershipResult jm_membership(const std::vector<std::vector<HermitianOperator>>& effects,
                               const ConicSolver& solver = conic::default_solver());
/// min r  s.t.  sum_l D(a|x,l) G_l >= A_{a|x},  sum_l G_l = (1 + r) 1,  G_l PSD.
RobustnessResult jm_robustness(const std::vector<std::vector<HermitianOperator>>& effects,
                               const ConicSolver& solver = conic::default_solver());
/// Effects E^dag(M_{a|x}).
std::vector<std::vector<HermitianOperator>> evolved_effects(const MeasurementCollection& m, const QuantumChannel& e);

/// 3 Paulis followed by `random_triples` random dichotomic qubit triples.
std::vector<MeasurementCollection> default_sb_family(std::size_t random_triples = 0, std::uint64_t seed = 1);

/// Max over the family of incompatibility_robustness; status lower_bound.
RobustnessResult non_sb_robustness(const QuantumChannel& e, const std::vector<MeasurementCollection>& family,
                                   const ConicSolver& solver = conic::default_solver());

// Quantum memory ------------------------------------------------------------------

/// min t  s.t.  Y PSD, Tr_out Y = t 1, (J_E + Y)^{T_in} PSD.
/// Exact for qubit channels; lower bound (PPT relaxation) otherwise.
RobustnessResult quantum_memory_robustness(const QuantumChannel& e,
                                           const ConicSolver& solver = conic::default_solver());

// Non-macrorealism ----------------------------------------------------------------

struct MacrorealismOptions {
  /// Restrict the admixed noise to no-signaling distributions.
  bool no_signaling_noise = false;
};

/// min sum_l w_l - 1  s.t.  sum_l w_l D_l(a,b|x,y) >= p(a,b|x,y), w >= 0,
/// over product deterministic strategies.
RobustnessResult non_macrorealism_robustness(const CorrelationTable& t, MacrorealismOptions options = {},
                                             const ConicSolver& solver = conic::default_solver());

// Negativity ---------------------------------------------------------------------

/// f = (||P||_1 - 1) / 2.
double temporal_negativity(const PseudoDensityOperator& p);

struct NegativityResult {
  double diamond_norm = 0.0;  // ||E o T||_diamond
  double negativity = 0.0;    // (||E o T||_diamond - 1) / 2
  conic::SolveStatus solver_status = conic::SolveStatus::optimal;
  double gap = 0.0;
  bool ok() const { return solver_status == conic::SolveStatus::optimal; }
};

/// Diamond norm of a Hermitian-preserving map from its Choi matrix J on
/// d_in (x) d_out: min t s.t. Y0, Y1 PSD, Y0 - Y1 = J, t 1 - Tr_out(Y0 + Y1) PSD.
NegativityResult diamond_norm(const HermitianOperator& choi, std::size_t d_in, std::size_t d_out,
                              const ConicSolver& solver = conic::default_solver());
/// Negativity of a qubit channel through ||E o T||_diamond.
NegativityResult channel_negativity(const QuantumChannel& e, const ConicSolver& solver = conic::default_solver());

// Hierarchy ---------------------------------------------------------------------

enum class Property { eb, sb, nlb, chsh_nlb };
enum class Verdict { broken, not_broken, unknown };
std::string to_string(Property p);
std::string to_string(Verdict v);

struct PropertyVerdict {
  Property property;
  Verdict verdict = Verdict::unknown;
  std::string justification;
  std::optional<double> witness;
};

struct HierarchyVerdict {
  double v = 0.0;
  bool computational = false;
  std::array<PropertyVerdict, 4> properties;  // EB, SB, NLB, CHSH-NLB

  const PropertyVerdict& operator[](Property p) const { return properties[static_cast<std::size_t>(p)]; }
  /// broken propagates down the chain EB -> SB -> NLB -> CHSH-NLB and
  /// not-broken propagates up; false if a property ends up both.
  bool coherent() const;
};

namespace thresholds {
inline constexpr double kEb = 1.0 / 3.0;
inline constexpr double kSbBroken = 5.0 / 12.0;
inline constexpr double kSbNotBroken = 0.5;
inline constexpr double kNlbBroken = 0.525;
inline constexpr double kNlbNotBroken = 0.696;
inline const double kChshNlb = 0.70710678118654752440;  // 1/sqrt(2)
inline const double kThreePauliSteering = 0.57735026918962576451;  // 1/sqrt(3)
}  // namespace thresholds

HierarchyVerdict classify_depolarizing(double v, bool computational,
                                       const ConicSolver& solver = conic::default_solver());

}  // namespace qchan::measures
