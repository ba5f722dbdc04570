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

// States, measurements and channels.
//
// Choi convention: J = sum_ij |i><j| (x) E(|i><j|), input factor first, so
// Tr_out J = 1_in. The normalized Choi state is J / d_in.

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "qchan/linalg.hpp"

namespace qchan::channels {

using linalg::HermitianOperator;

/// PSD (min eigenvalue >= -1e-9), unit trace (within 1e-9).
class DensityOperator {
 public:
  explicit DensityOperator(HermitianOperator m);
  std::size_t dim() const { return m_.dim(); }
  const HermitianOperator& op() const { return m_; }
  const ComplexMatrix& matrix() const { return m_.matrix(); }

 private:
  HermitianOperator m_;
};

/// Effects PSD and summing to the identity within 1e-9.
class POVM {
 public:
  explicit POVM(std::vector<HermitianOperator> effects, std::vector<std::string> labels = {});
  std::size_t dim() const { return effects_.front().dim(); }
  std::size_t size() const { return effects_.size(); }
  const HermitianOperator& operator[](std::size_t a) const { return effects_[a]; }
  const std::vector<HermitianOperator>& effects() const { return effects_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Two-outcome projective measurement of a +-1 observable; outcome 0 is +1.
  static POVM dichotomic(const ComplexMatrix& observable);

 private:
  std::vector<HermitianOperator> effects_;
  std::vector<std::string> labels_;
};

/// One POVM per input x, all on the same space with the same outcome count.
class MeasurementCollection {
 public:
  explicit MeasurementCollection(std::vector<POVM> povms);
  std::size_t inputs() const { return povms_.size(); }
  std::size_t outcomes() const { return povms_.front().size(); }
  std::size_t dim() const { return povms_.front().dim(); }
  const POVM& operator[](std::size_t x) const { return povms_[x]; }
  const std::vector<POVM>& povms() const { return povms_; }

 private:
  std::vector<POVM> povms_;
};

class QuantumChannel {
 public:
  /// Kraus operators K (d_out x d_in) with sum K^dag K = 1 within 1e-9.
  static QuantumChannel from_kraus(std::vector<ComplexMatrix> kraus);
  /// Unnormalized Choi matrix J on d_in (x) d_out; PSD and Tr_out J = 1
  /// within 1e-8.
  static QuantumChannel from_choi(const ComplexMatrix& choi, std::size_t d_in, std::size_t d_out);
  /// Both representations; they must agree within 1e-8 Frobenius.
  static QuantumChannel from_kraus_and_choi(std::vector<ComplexMatrix> kraus,
                                            const ComplexMatrix& choi);
  static QuantumChannel identity(std::size_t d);

  std::size_t in_dim() const { return d_in_; }
  std::size_t out_dim() const { return d_out_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  /// Unnormalized Choi matrix J.
  const HermitianOperator& choi() const { return choi_; }

  ComplexMatrix apply(const ComplexMatrix& rho) const;
  HermitianOperator apply(const HermitianOperator& rho) const;
  /// Heisenberg picture E^dag(M) = sum K^dag M K.
  HermitianOperator dual_apply(const HermitianOperator& m) const;

 private:
  QuantumChannel() = default;
  std::size_t d_in_ = 0;
  std::size_t d_out_ = 0;
  std::vector<ComplexMatrix> kraus_;
  HermitianOperator choi_;
};

/// Two-time pseudo-density operator on 2 (x) 2: Hermitian, unit trace, not
/// necessarily PSD.
class PseudoDensityOperator {
 public:
  explicit PseudoDensityOperator(HermitianOperator m);
  std::size_t dim() const { return m_.dim(); }
  const HermitianOperator& op() const { return m_; }
  const ComplexMatrix& matrix() const { return m_.matrix(); }

 private:
  HermitianOperator m_;
};

/// Kraus operators of a Choi matrix via its eigendecomposition, dropping
/// eigenvalues below 1e-10.
std::vector<ComplexMatrix> kraus_from_choi(const HermitianOperator& choi, std::size_t d_in,
                                           std::size_t d_out);
HermitianOperator choi_from_kraus(const std::vector<ComplexMatrix>& kraus);

/// Normalized Choi state (1 (x) E)|Phi><Phi|.
DensityOperator choi_state(const QuantumChannel& e);
/// P_E = (1 (x) E)(SWAP / 2) for a qubit channel.
PseudoDensityOperator pdo_of_channel(const QuantumChannel& e);
/// || P_E^{T_first} - choi_state(E) ||_F.
double pdo_pt_check(const QuantumChannel& e);
HermitianOperator dual_apply(const QuantumChannel& e, const HermitianOperator& m);

/// E(rho) = v rho + (1 - v) 1/2; requires 0 <= v <= 1.
QuantumChannel depolarizing(double v);
/// p rho + (1 - p)/3 (X rho X + Y rho Y + Z rho Z); requires 0 <= p <= 1.
QuantumChannel kraus_depolarizing(double p);
inline double depolarizing_p_of_v(double v) { return (3.0 * v + 1.0) / 4.0; }
inline double depolarizing_v_of_p(double p) { return (4.0 * p - 1.0) / 3.0; }

/// E(rho) = sum_j Tr(rho M_j) sigma_j.
QuantumChannel measure_prepare_channel(const POVM& m, const std::vector<DensityOperator>& states);

/// second o first.
QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first);
/// sum_i w_i E_i with w a probability vector.
QuantumChannel mixture(const std::vector<QuantumChannel>& channels,
                       const std::vector<double>& weights);
QuantumChannel unitary_channel(const ComplexMatrix& u);

// Catalog.
MeasurementCollection pauli_measurements();
struct ChshSettings {
  MeasurementCollection t0;
  MeasurementCollection t1;
};
/// t0: {X, Z}; t1: {(X+Z)/sqrt2, (X-Z)/sqrt2}.
ChshSettings chsh_temporal_settings();
DensityOperator max_entangled(std::size_t d);
/// v |Phi><Phi| + (1 - v) 1/4 on two qubits.
DensityOperator isotropic_state(double v);

// Random instances (Haar unitaries, Ginibre states, random Stinespring channels).
ComplexMatrix random_unitary(std::size_t d, std::mt19937_64& rng);
DensityOperator random_state(std::size_t d, std::mt19937_64& rng, std::size_t rank = 0);
/// kraus_rank 0 means d_in * d_out; kraus_rank * d_out must be >= d_in.
QuantumChannel random_channel(std::size_t d_in, std::size_t d_out, std::mt19937_64& rng,
                              std::size_t kraus_rank = 0);
/// Projective +-1 measurement along a uniformly random Bloch direction.
POVM random_dichotomic_qubit(std::mt19937_64& rng);

}  // namespace qchan::channels
