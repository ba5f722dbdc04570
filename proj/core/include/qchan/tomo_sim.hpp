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

// Simulated single-qubit process tomography of a depolarizing channel.
//
// Six Pauli eigenstates are prepared and each output is projected on the
// same six states, giving 36 Poisson-distributed counts. Eigenstate order:
// +x, -x, +y, -y, +z, -z (index 2 * basis + outcome).

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qchan/channels.hpp"
#include "qchan/conic.hpp"
#include "qchan/correlations.hpp"

namespace qchan::tomo {

using channels::QuantumChannel;
using linalg::HermitianOperator;

inline constexpr std::size_t kStates = 6;
inline constexpr std::size_t kCombos = kStates * kStates;

/// Pauli eigenstate kets in the order above.
const std::array<ComplexVector, kStates>& eigenstates();

struct ExperimentConfig {
  double v = 1.0;
  /// Expected detections per (prep, proj) combination at unit probability.
  double counts_per_combo = 1e5;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  /// Extra depolarizing noise (1 - w) applied after the channel; 0 disables.
  double instrument_noise = 0.0;
  /// Use the expected counts N * p instead of Poisson draws.
  bool noiseless = false;
  /// Monte-Carlo worker threads; 0 picks hardware concurrency.
  std::size_t threads = 0;

  void validate() const;
};

/// Counts indexed [prep * 6 + proj]. Stored as reals so that noiseless
/// expected counts are representable; sampled tables hold whole numbers.
struct CountsTable {
  std::array<double, kCombos> n{};

  double operator()(std::size_t prep, std::size_t proj) const { return n[prep * kStates + proj]; }
  double& operator()(std::size_t prep, std::size_t proj) { return n[prep * kStates + proj]; }
  double total() const;

  /// "prep,proj,count" rows.
  std::string to_csv() const;
  static CountsTable from_csv(const std::string& text);
};

/// Detection probabilities <proj| E(|prep><prep|) |proj>, closed form.
std::array<double, kCombos> ideal_probabilities(double v, double instrument_noise = 0.0);
/// Same probabilities from the stochastic gate mixture {1: p, X, Y, Z: (1-p)/3}.
std::array<double, kCombos> gate_mixture_probabilities(double v, double instrument_noise = 0.0);

CountsTable expected_counts(const ExperimentConfig& cfg);
/// Poisson draws with generator stream `stream` of cfg.seed.
CountsTable sample_counts(const ExperimentConfig& cfg, std::uint64_t stream = 0);

// Maximum likelihood ------------------------------------------------------------

struct MleOptions {
  int max_iterations = 10000;
  /// Stop when the per-count log-likelihood gain drops below this.
  double tolerance = 1e-10;
  bool record_history = false;
};

struct MleResult {
  HermitianOperator choi;  // unnormalized, Tr_out = 1
  int iterations = 0;
  bool converged = false;
  /// Every accepted step raised the likelihood (or left it unchanged).
  bool monotone = true;
  double log_likelihood = 0.0;  // per count
  std::vector<double> history;

  QuantumChannel channel() const;
};

/// Process MLE over Choi matrices with the iterative R J R fixed point and a
/// trace-preserving renormalization each step. The start point is the
/// linear-inversion estimate clipped to PSD.
MleResult mle_process(const CountsTable& counts, const MleOptions& options = {});

/// Qubit state MLE from the six projective counts on one output.
HermitianOperator mle_state(const std::array<double, kStates>& counts, const MleOptions& options = {});

/// Uhlmann fidelity of the normalized Choi states.
double process_fidelity(const HermitianOperator& choi_a, const HermitianOperator& choi_b);
/// Frobenius distance between normalized Choi states.
double choi_distance(const HermitianOperator& choi_a, const HermitianOperator& choi_b);

// No-signaling projection -----------------------------------------------------------

enum class FidelityKind { squared, root };

struct ProjectionResult {
  std::optional<correlations::Assemblage> assemblage;  // empty unless status is optimal
  double min_fidelity = 1.0;
  conic::SolveStatus status = conic::SolveStatus::optimal;
  bool unchanged = false;  // input was already no-signaling
};

/// Closest no-signaling assemblage, maximizing the summed root fidelities of
/// the nonzero members. members[x][a] must be PSD with total trace 1 per x.
ProjectionResult project_no_signaling(const std::vector<std::vector<HermitianOperator>>& members,
                                      FidelityKind kind = FidelityKind::squared,
                                      const conic::ConicSolver& solver = conic::default_solver());

/// Temporal assemblage for the Pauli settings estimated from counts:
/// sigma(a|x) = rho_out(prep = 2x + a) / 2 with rho_out from state MLE.
std::vector<std::vector<HermitianOperator>> assemblage_from_counts(const CountsTable& counts);

// Pipeline ------------------------------------------------------------------------

struct Reconstruction {
  HermitianOperator choi;  // unnormalized
  HermitianOperator pdo;
  double r_qm = 0.0;
  double r_ts = 0.0;
  double r_nmr = 0.0;
  double f = 0.0;
  double purity = 0.0;  // Tr(rho_CJ^2)
  double min_projection_fidelity = 1.0;
  int mle_iterations = 0;
  bool mle_converged = false;
  bool ok = true;  // every solve reached optimal status
};

Reconstruction reconstruct(const CountsTable& counts, const conic::ConicSolver& solver = conic::default_solver());

struct MeasureStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
};

struct MonteCarloResult {
  std::size_t trials = 0;
  std::size_t failures = 0;
  MeasureStats r_qm, r_ts, r_nmr, f, purity, min_projection_fidelity;
};

/// Resamples counts on streams 1..trials, reruns reconstruct() and reduces
/// in a fixed pairwise order, so results do not depend on thread count.
MonteCarloResult monte_carlo_errors(const ExperimentConfig& cfg,
                                    const conic::ConicSolver& solver = conic::default_solver());

struct SimulationReport {
  ExperimentConfig config;
  CountsTable counts;
  Reconstruction estimate;
  MonteCarloResult errors;
};

/// Counts on stream 0 (or expected counts when noiseless), the point
/// estimate, and Monte-Carlo error bars when trials >= 2.
SimulationReport simulate(const ExperimentConfig& cfg, const conic::ConicSolver& solver = conic::default_solver());

/// {v, R_n-MR, R_TS, R_QM, purity, f, errors: {...}, min_projection_fidelity, ...}
std::string report_json(const SimulationReport& r);

}  // namespace qchan::tomo
