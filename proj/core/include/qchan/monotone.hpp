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

// Randomized checks that a measure does not increase under free operations
// and is convex under mixing.
//
// Free operations per measure:
//   R_QM, f   D2 o E o D1 with random channels D1, D2
//   R_TS      D2 o E (post-processing of the steered output), fixed Pauli settings
//   R_n-MR    local classical post-processing of the outcome table, CHSH settings
// Convexity is checked on channel mixtures for all four.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qchan/measures.hpp"

namespace qchan::measures {

enum class MonotoneMeasure { quantum_memory, temporal_steering, non_macrorealism, temporal_negativity };
std::string to_string(MonotoneMeasure m);

struct MonotoneOptions {
  std::size_t instances = 200;  // per check kind
  std::uint64_t seed = 2026;
  double tolerance = 1e-6;
};

struct MonotoneViolation {
  std::string check;  // "free-operation" or "convexity"
  double bound = 0.0;  // measure(E) or sum_i p_i measure(E_i)
  double value = 0.0;  // measure after the operation / of the mixture
  std::string instance;  // JSON dump
};

struct MonotoneReport {
  MonotoneMeasure measure = MonotoneMeasure::quantum_memory;
  std::size_t free_op_checks = 0;
  std::size_t convexity_checks = 0;
  std::size_t solver_failures = 0;
  double worst_excess = -std::numeric_limits<double>::infinity();  // max(value - bound)
  std::vector<MonotoneViolation> violations;
  bool passed() const { return violations.empty() && solver_failures == 0; }
};

/// The measure evaluated on a qubit channel: R_TS on the temporal assemblage
/// of the 3 Paulis, R_n-MR on the CHSH-settings table. Throws NumericalError
/// on solver failure.
double channel_measure(MonotoneMeasure m, const QuantumChannel& e,
                       const ConicSolver& solver = conic::default_solver());

MonotoneReport monotone_harness(MonotoneMeasure m, const MonotoneOptions& options = {},
                                const ConicSolver& solver = conic::default_solver());

}  // namespace qchan::measures
