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

// Correlation objects built from channels and measurements.
//
// Outcome index 0 is the +1 outcome, index 1 is -1.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "qchan/channels.hpp"

namespace qchan::correlations {

using channels::DensityOperator;
using channels::MeasurementCollection;
using channels::POVM;
using channels::PseudoDensityOperator;
using channels::QuantumChannel;
using linalg::HermitianOperator;

/// Family sigma(a|x) of subnormalized PSD operators.
///
/// Construction rejects negative members (below -1e-9) and per-input trace
/// sums away from 1 by more than 1e-8. Signaling is measured, not rejected.
class Assemblage {
 public:
  /// members[x][a]
  explicit Assemblage(std::vector<std::vector<HermitianOperator>> members);

  std::size_t inputs() const { return members_.size(); }
  std::size_t outcomes() const { return members_.front().size(); }
  std::size_t dim() const { return members_.front().front().dim(); }
  const HermitianOperator& operator()(std::size_t a, std::size_t x) const { return members_[x][a]; }
  const std::vector<std::vector<HermitianOperator>>& members() const { return members_; }

  /// sum_a sigma(a|x) for the given input.
  HermitianOperator marginal(std::size_t x) const;
  /// max_x || marginal(x) - marginal(0) ||_max.
  double signaling() const;
  bool no_signaling(double tolerance = 1e-8) const { return signaling() <= tolerance; }

 private:
  std::vector<std::vector<HermitianOperator>> members_;
};

/// sigma(a|x) = Tr_A[(M_{a|x} (x) 1) rho].
Assemblage spatial_assemblage(const DensityOperator& state, const MeasurementCollection& m);

/// sigma(a|x) = Tr_{t0}[(M_{a|x} (x) 1) P].
Assemblage temporal_assemblage(const PseudoDensityOperator& p, const MeasurementCollection& m);
/// Same, computed from the channel's PDO and checked against E(M_{a|x})/2
/// within 1e-10 (NumericalError otherwise).
Assemblage temporal_assemblage(const QuantumChannel& e, const MeasurementCollection& m);

/// Members Tr_{t1}[(1 (x) M_{b|y}) P] = E^dag(M_{b|y}) / 2.
Assemblage channel_steering_assemblage(const PseudoDensityOperator& p, const MeasurementCollection& m);
/// Same, cross-checked against E^dag(M_{b|y}) / 2 within 1e-10.
Assemblage channel_steering_assemblage(const QuantumChannel& e, const MeasurementCollection& m);

/// p(a, b | x, y) over finite alphabets.
class CorrelationTable {
 public:
  CorrelationTable(std::size_t nx, std::size_t ny, std::size_t na, std::size_t nb);

  std::size_t inputs_first() const { return nx_; }
  std::size_t inputs_second() const { return ny_; }
  std::size_t outcomes_first() const { return na_; }
  std::size_t outcomes_second() const { return nb_; }

  double& operator()(std::size_t a, std::size_t b, std::size_t x, std::size_t y) {
    return p_[index(a, b, x, y)];
  }
  double operator()(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const {
    return p_[index(a, b, x, y)];
  }

  /// Throws NumericalError on negative entries or (x, y) blocks whose sum
  /// is away from 1 by more than 1e-9.
  void validate() const;

  /// Header "x,y,a,b,p", lexicographic rows, 17 significant digits.
  std::string to_csv() const;
  static CorrelationTable from_csv(const std::string& text);

 private:
  std::size_t index(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const {
    return ((x * ny_ + y) * na_ + a) * nb_ + b;
  }
  std::size_t nx_, ny_, na_, nb_;
  std::vector<double> p_;
};

/// p(a,b|x,y) = Tr[(M_{a|x} (x) M_{b|y}) P]. Entries below -1e-9 throw;
/// smaller negative rounding is clipped to 0.
CorrelationTable correlation_from_pdo(const PseudoDensityOperator& p, const MeasurementCollection& m0,
                                      const MeasurementCollection& m1);
/// Spatial analogue on a bipartite state.
CorrelationTable correlation_from_state(const DensityOperator& rho, const MeasurementCollection& m0,
                                        const MeasurementCollection& m1);

/// E(x,y) = p(a=b) - p(a!=b).
double correlator(const CorrelationTable& t, std::size_t x, std::size_t y);
/// B = E(0,0) + E(1,0) + E(0,1) - E(1,1) for 2-input 2-outcome tables.
double chsh_value(const CorrelationTable& t);

/// p(b | x, y) indexed [x][y][b].
using SemiQuantumTable = std::vector<std::vector<std::vector<double>>>;

/// Direct route: p(b|x,y) = Tr[B_b (sigma_y (x) E(sigma_x))]. Cross-checks
/// against semi_quantum_probs_pdo and throws if the routes differ by more
/// than 1e-10.
SemiQuantumTable semi_quantum_probs(const QuantumChannel& e, const POVM& joint,
                                    const std::vector<DensityOperator>& sigma_x,
                                    const std::vector<DensityOperator>& sigma_y);
/// PDO route: E(sigma_x) recovered as the normalized temporal assemblage
/// member Tr_{t0}[(sigma_x (x) 1) P_E], measured with the effective POVM
/// M_{b|y} = Tr_first[B_b (sigma_y (x) 1)].
SemiQuantumTable semi_quantum_probs_pdo(const PseudoDensityOperator& p, const POVM& joint,
                                        const std::vector<DensityOperator>& sigma_x,
                                        const std::vector<DensityOperator>& sigma_y);

/// Dimension of the real span of a set of Hermitian operators. A set of
/// states on C^d spans all operators iff the rank is d^2.
std::size_t frame_rank(const std::vector<HermitianOperator>& ops, double tolerance = 1e-10);

struct DeterministicStrategy {
  std::vector<int> a;  // a[x]
  std::vector<int> b;  // b[y]; empty for one party
};

struct DeterministicStrategies {
  int parties = 1;
  std::size_t inputs = 0;
  std::size_t outcomes = 0;
  std::vector<DeterministicStrategy> strategies;

  std::size_t size() const { return strategies.size(); }
  /// D(a|x, lambda)
  double single(std::size_t lambda, std::size_t a, std::size_t x) const {
    return strategies[lambda].a[x] == static_cast<int>(a) ? 1.0 : 0.0;
  }
  /// D(a|x, lambda) D(b|y, lambda)
  double product(std::size_t lambda, std::size_t a, std::size_t b, std::size_t x, std::size_t y) const {
    const auto& s = strategies[lambda];
    return (s.a[x] == static_cast<int>(a) && s.b[y] == static_cast<int>(b)) ? 1.0 : 0.0;
  }
};

inline constexpr std::size_t kMaxStrategies = 1000000;

/// All |A|^|X| single-party (or |A|^|X| |B|^|Y| product) deterministic
/// strategies, in lexicographic order. Throws std::length_error above
/// kMaxStrategies.
DeterministicStrategies enumerate_deterministic(std::size_t n_inputs, std::size_t n_outcomes, int parties);

}  // namespace qchan::correlations
