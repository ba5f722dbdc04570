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

#include "qchan/channels.hpp"

#include <cmath>
#include <sstream>

namespace qchan::channels {

using linalg::Dims;
using linalg::Subsystem;

namespace {

constexpr double kStateTolerance = 1e-9;
constexpr double kChoiTolerance = 1e-8;
constexpr double kKrausDropTolerance = 1e-10;

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

DensityOperator::DensityOperator(HermitianOperator m) : m_(std::move(m)) {
  const double tr = m_.trace();
  if (std::abs(tr - 1.0) > kStateTolerance)
    throw NumericalError("density operator trace " + fmt(tr) + " differs from 1");
  const double e = linalg::min_eigenvalue(m_);
  if (e < -kStateTolerance) throw NumericalError("density operator eigenvalue " + fmt(e) + " < 0");
}

POVM::POVM(std::vector<HermitianOperator> effects, std::vector<std::string> labels)
    : effects_(std::move(effects)), labels_(std::move(labels)) {
  if (effects_.empty()) throw DimensionError("POVM needs at least one effect");
  const std::size_t d = effects_.front().dim();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& e : effects_) {
    if (e.dim() != d) throw DimensionError("POVM effects of different dimensions");
    const double m = linalg::min_eigenvalue(e);
    if (m < -kStateTolerance) throw NumericalError("POVM effect eigenvalue " + fmt(m) + " < 0");
    sum += e.matrix();
  }
  const double dev = (sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (dev > kStateTolerance) throw NumericalError("POVM effects do not sum to identity (" + fmt(dev) + ")");
  if (labels_.empty())
    for (std::size_t a = 0; a < effects_.size(); ++a) labels_.push_back(std::to_string(a));
  if (labels_.size() != effects_.size()) throw DimensionError("POVM label count mismatch");
}

POVM POVM::dichotomic(const ComplexMatrix& observable) {
  const auto d = observable.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  return POVM({HermitianOperator((id + observable) / 2.0), HermitianOperator((id - observable) / 2.0)},
              {"+1", "-1"});
}

MeasurementCollection::MeasurementCollection(std::vector<POVM> povms) : povms_(std::move(povms)) {
  if (povms_.empty()) throw DimensionError("measurement collection needs at least one input");
  for (const auto& p : povms_) {
    if (p.dim() != povms_.front().dim()) throw DimensionError("measurements on different spaces");
    if (p.size() != povms_.front().size()) throw DimensionError("measurements with different outcome counts");
  }
}

// ---------------------------------------------------------------------------
// Representations

HermitianOperator choi_from_kraus(const std::vector<ComplexMatrix>& kraus) {
  if (kraus.empty()) throw DimensionError("empty Kraus list");
  const auto d_out = kraus.front().rows();
  const auto d_in = kraus.front().cols();
  ComplexMatrix j = ComplexMatrix::Zero(d_in * d_out, d_in * d_out);
  ComplexVector v(d_in * d_out);
  for (const auto& k : kraus) {
    if (k.rows() != d_out || k.cols() != d_in) throw DimensionError("Kraus operators of different shapes");
    for (Eigen::Index i = 0; i < d_in; ++i)
      for (Eigen::Index o = 0; o < d_out; ++o) v(i * d_out + o) = k(o, i);
    j += v * v.adjoint();
  }
  return HermitianOperator::symmetrized(j);
}

std::vector<ComplexMatrix> kraus_from_choi(const HermitianOperator& choi, std::size_t d_in,
                                           std::size_t d_out) {
  if (choi.dim() != d_in * d_out) throw DimensionError("Choi dimension does not match d_in * d_out");
  const auto eig = linalg::eig_hermitian(choi);
  std::vector<ComplexMatrix> out;
  const auto n = static_cast<Eigen::Index>(d_in);
  const auto m = static_cast<Eigen::Index>(d_out);
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    const double lam = eig.values(k);
    if (lam < kKrausDropTolerance) continue;
    ComplexMatrix kr(m, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index o = 0; o < m; ++o) kr(o, i) = std::sqrt(lam) * eig.vectors(i * m + o, k);
    out.push_back(std::move(kr));
  }
  if (out.empty()) throw NumericalError("Choi matrix has no eigenvalue above 1e-10");
  return out;
}

namespace {

void check_trace_preserving(const HermitianOperator& j, std::size_t d_in, std::size_t d_out) {
  const double e = linalg::min_eigenvalue(j);
  if (e < -kChoiTolerance) throw NumericalError("Choi matrix eigenvalue " + fmt(e) + " < 0");
  const ComplexMatrix marg = linalg::partial_trace(j.matrix(), Dims{d_in, d_out}, Subsystem::second);
  const double dev = (marg - ComplexMatrix::Identity(d_in, d_in)).cwiseAbs().maxCoeff();
  if (dev > kChoiTolerance) throw NumericalError("channel is not trace preserving (" + fmt(dev) + ")");
}

}  // namespace

QuantumChannel QuantumChannel::from_kraus(std::vector<ComplexMatrix> kraus) {
  if (kraus.empty()) throw DimensionError("empty Kraus list");
  QuantumChannel c;
  c.d_out_ = static_cast<std::size_t>(kraus.front().rows());
  c.d_in_ = static_cast<std::size_t>(kraus.front().cols());
  ComplexMatrix sum = ComplexMatrix::Zero(c.d_in_, c.d_in_);
  for (const auto& k : kraus) {
    if (static_cast<std::size_t>(k.rows()) != c.d_out_ || static_cast<std::size_t>(k.cols()) != c.d_in_)
      throw DimensionError("Kraus operators of different shapes");
    sum += k.adjoint() * k;
  }
  const double dev = (sum - ComplexMatrix::Identity(c.d_in_, c.d_in_)).cwiseAbs().maxCoeff();
  if (dev > kStateTolerance) throw NumericalError("Kraus operators are not complete (" + fmt(dev) + ")");
  c.choi_ = choi_from_kraus(kraus);
  c.kraus_ = std::move(kraus);
  return c;
}

QuantumChannel QuantumChannel::from_choi(const ComplexMatrix& choi, std::size_t d_in,
                                         std::size_t d_out) {
  if (static_cast<std::size_t>(choi.rows()) != d_in * d_out)
    throw DimensionError("Choi dimension does not match d_in * d_out");
  QuantumChannel c;
  c.d_in_ = d_in;
  c.d_out_ = d_out;
  c.choi_ = HermitianOperator(choi, 1e-10);
  check_trace_preserving(c.choi_, d_in, d_out);
  c.kraus_ = kraus_from_choi(c.choi_, d_in, d_out);
  return c;
}

QuantumChannel QuantumChannel::from_kraus_and_choi(std::vector<ComplexMatrix> kraus,
                                                   const ComplexMatrix& choi) {
  QuantumChannel c = from_kraus(std::move(kraus));
  const double dist = linalg::frobenius_distance(c.choi_.matrix(), choi);
  if (dist > kChoiTolerance)
    throw NumericalError("Kraus and Choi representations disagree (" + fmt(dist) + ")");
  return c;
}

QuantumChannel QuantumChannel::identity(std::size_t d) {
  return from_kraus({ComplexMatrix::Identity(d, d)});
}

ComplexMatrix QuantumChannel::apply(const ComplexMatrix& rho) const {
  if (static_cast<std::size_t>(rho.rows()) != d_in_ || rho.rows() != rho.cols())
    throw DimensionError("input operator does not match channel input dimension");
  ComplexMatrix out = ComplexMatrix::Zero(d_out_, d_out_);
  for (const auto& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

HermitianOperator QuantumChannel::apply(const HermitianOperator& rho) const {
  return HermitianOperator::symmetrized(apply(rho.matrix()));
}

HermitianOperator QuantumChannel::dual_apply(const HermitianOperator& m) const {
  if (m.dim() != d_out_) throw DimensionError("operator does not match channel output dimension");
  ComplexMatrix out = ComplexMatrix::Zero(d_in_, d_in_);
  for (const auto& k : kraus_) out += k.adjoint() * m.matrix() * k;
  return HermitianOperator::symmetrized(out);
}

PseudoDensityOperator::PseudoDensityOperator(HermitianOperator m) : m_(std::move(m)) {
  if (m_.dim() != 4) throw DimensionError("pseudo-density operators are supported on 2 x 2 only");
  if (std::abs(m_.trace() - 1.0) > kStateTolerance)
    throw NumericalError("pseudo-density operator trace " + fmt(m_.trace()) + " differs from 1");
}

DensityOperator choi_state(const QuantumChannel& e) {
  return DensityOperator(e.choi() / static_cast<double>(e.in_dim()));
}

PseudoDensityOperator pdo_of_channel(const QuantumChannel& e) {
  if (e.in_dim() != 2 || e.out_dim() != 2) throw DimensionError("pseudo-density operator needs a qubit channel");
  // P = (1/2) sum_ij |i><j| (x) E(|j><i|)
  ComplexMatrix p = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      ComplexMatrix eji = ComplexMatrix::Zero(2, 2);
      eji(j, i) = 1.0;
      p.block(2 * i, 2 * j, 2, 2) = e.apply(eji) / 2.0;
    }
  return PseudoDensityOperator(HermitianOperator(p, 1e-10));
}

double pdo_pt_check(const QuantumChannel& e) {
  const auto p = pdo_of_channel(e);
  const ComplexMatrix pt = linalg::partial_transpose(p.matrix(), Dims{2, 2}, Subsystem::first);
  return linalg::frobenius_distance(pt, choi_state(e).matrix());
}

HermitianOperator dual_apply(const QuantumChannel& e, const HermitianOperator& m) {
  return e.dual_apply(m);
}

// ---------------------------------------------------------------------------
// Catalog

QuantumChannel depolarizing(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("depolarizing: v must lie in [0, 1], got " + fmt(v));
  return kraus_depolarizing(depolarizing_p_of_v(v));
}

QuantumChannel kraus_depolarizing(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("kraus_depolarizing: p must lie in [0, 1], got " + fmt(p));
  std::vector<ComplexMatrix> k;
  if (p > 0) k.push_back(std::sqrt(p) * linalg::pauli::identity());
  const double q = std::sqrt((1.0 - p) / 3.0);
  if (q > 0) {
    k.push_back(q * linalg::pauli::x());
    k.push_back(q * linalg::pauli::y());
    k.push_back(q * linalg::pauli::z());
  }
  return QuantumChannel::from_kraus(std::move(k));
}

QuantumChannel measure_prepare_channel(const POVM& m, const std::vector<DensityOperator>& states) {
  if (states.size() != m.size()) throw DimensionError("measure-prepare: one state per POVM outcome required");
  const std::size_t d_in = m.dim();
  const std::size_t d_out = states.front().dim();
  // J = sum_j M_j^T (x) sigma_j
  ComplexMatrix j = ComplexMatrix::Zero(d_in * d_out, d_in * d_out);
  for (std::size_t a = 0; a < m.size(); ++a) {
    if (states[a].dim() != d_out) throw DimensionError("measure-prepare: states of different dimensions");
    j += linalg::kron(m[a].matrix().transpose(), states[a].matrix());
  }
  return QuantumChannel::from_choi(j, d_in, d_out);
}

QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first) {
  if (first.out_dim() != second.in_dim()) throw DimensionError("compose: dimension mismatch");
  std::vector<ComplexMatrix> k;
  for (const auto& a : second.kraus())
    for (const auto& b : first.kraus()) k.push_back(a * b);
  // Re-derive a minimal Kraus set from the Choi matrix.
  const HermitianOperator j = choi_from_kraus(k);
  return QuantumChannel::from_choi(j.matrix(), first.in_dim(), second.out_dim());
}

QuantumChannel mixture(const std::vector<QuantumChannel>& channels, const std::vector<double>& weights) {
  if (channels.empty() || channels.size() != weights.size()) throw DimensionError("mixture: size mismatch");
  const std::size_t d_in = channels.front().in_dim();
  const std::size_t d_out = channels.front().out_dim();
  ComplexMatrix j = ComplexMatrix::Zero(d_in * d_out, d_in * d_out);
  double total = 0.0;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (channels[i].in_dim() != d_in || channels[i].out_dim() != d_out)
      throw DimensionError("mixture: channels of different dimensions");
    if (weights[i] < 0) throw std::invalid_argument("mixture: negative weight");
    j += weights[i] * channels[i].choi().matrix();
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mixture: weights must sum to 1");
  return QuantumChannel::from_choi(j, d_in, d_out);
}

QuantumChannel unitary_channel(const ComplexMatrix& u) { return QuantumChannel::from_kraus({u}); }

MeasurementCollection pauli_measurements() {
  return MeasurementCollection({POVM::dichotomic(linalg::pauli::x()), POVM::dichotomic(linalg::pauli::y()),
                                POVM::dichotomic(linalg::pauli::z())});
}

ChshSettings chsh_temporal_settings() {
  const ComplexMatrix x = linalg::pauli::x();
  const ComplexMatrix z = linalg::pauli::z();
  const double r = 1.0 / std::sqrt(2.0);
  return {MeasurementCollection({POVM::dichotomic(x), POVM::dichotomic(z)}),
          MeasurementCollection({POVM::dichotomic(r * (x + z)), POVM::dichotomic(r * (x - z))})};
}

DensityOperator max_entangled(std::size_t d) {
  ComplexVector phi = ComplexVector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t i = 0; i < d; ++i) phi(static_cast<Eigen::Index>(i * d + i)) = 1.0 / std::sqrt(double(d));
  return DensityOperator(linalg::projector(phi));
}

DensityOperator isotropic_state(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("isotropic_state: v must lie in [0, 1]");
  const ComplexMatrix m = v * max_entangled(2).matrix() + (1.0 - v) * ComplexMatrix::Identity(4, 4) / 4.0;
  return DensityOperator(HermitianOperator(m));
}

// ---------------------------------------------------------------------------
// Random instances

namespace {

ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = Complex(n(rng), n(rng));
  return g;
}

}  // namespace

ComplexMatrix random_unitary(std::size_t d, std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(n, n, rng));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex di = r(i, i);
    const double a = std::abs(di);
    if (a > 0) q.col(i) *= di / a;
  }
  return q;
}

DensityOperator random_state(std::size_t d, std::mt19937_64& rng, std::size_t rank) {
  const auto n = static_cast<Eigen::Index>(d);
  const auto k = static_cast<Eigen::Index>(rank == 0 ? d : rank);
  const ComplexMatrix g = ginibre(n, k, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(HermitianOperator::symmetrized(rho));
}

QuantumChannel random_channel(std::size_t d_in, std::size_t d_out, std::mt19937_64& rng,
                              std::size_t kraus_rank) {
  const auto r = static_cast<Eigen::Index>(kraus_rank == 0 ? d_in * d_out : kraus_rank);
  const auto n = static_cast<Eigen::Index>(d_in);
  const auto m = static_cast<Eigen::Index>(d_out);
  if (r * m < n) throw DimensionError("random_channel: Kraus rank times output dimension must be at least d_in");
  // Isometry V: C^d_in -> C^r (x) C^d_out from the thin QR of a Ginibre matrix.
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(r * m, n, rng));
  const ComplexMatrix v = qr.householderQ() * ComplexMatrix::Identity(r * m, n);
  std::vector<ComplexMatrix> kraus;
  for (Eigen::Index k = 0; k < r; ++k) kraus.push_back(v.block(k * m, 0, m, n));
  return QuantumChannel::from_kraus(std::move(kraus));
}

POVM random_dichotomic_qubit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector3d u(n(rng), n(rng), n(rng));
  u.normalize();
  const ComplexMatrix obs = u(0) * linalg::pauli::x() + u(1) * linalg::pauli::y() + u(2) * linalg::pauli::z();
  return POVM::dichotomic(obs);
}

}  // namespace qchan::channels
