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

#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/QR>

#include "qchan/tomo_sim.hpp"

namespace qchan::tomo {

using linalg::Dims;
using linalg::Subsystem;

namespace {

constexpr double kMinEpsilon = 1e-12;

// Operators Omega_k with p_k = Re Tr(Omega_k X); zero-probability entries
// with zero counts are skipped in the likelihood.
struct Problem {
  std::vector<ComplexMatrix> omega;
  std::vector<double> n;
  double total = 0.0;
};

double log_likelihood(const Problem& pb, const ComplexMatrix& x, std::vector<double>* probs) {
  double l = 0.0;
  if (probs) probs->assign(pb.n.size(), 0.0);
  for (std::size_t k = 0; k < pb.n.size(); ++k) {
    const double p = (pb.omega[k] * x).trace().real();
    if (probs) (*probs)[k] = p;
    if (pb.n[k] <= 0.0) continue;
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    l += pb.n[k] * std::log(p);
  }
  return l / pb.total;
}

ComplexMatrix r_operator(const Problem& pb, const std::vector<double>& probs, std::size_t dim) {
  ComplexMatrix r = ComplexMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < pb.n.size(); ++k) {
    if (pb.n[k] <= 0.0) continue;
    r += (pb.n[k] / probs[k]) * pb.omega[k];
  }
  return r;
}

HermitianOperator clip_psd(const HermitianOperator& m) {
  return linalg::spectral_apply(m, [](double x) { return x > 0.0 ? x : 0.0; });
}

// (lambda^{-1/2} (x) 1) J (lambda^{-1/2} (x) 1) with lambda = Tr_out J.
ComplexMatrix tp_normalize(const ComplexMatrix& j, std::size_t din, std::size_t dout) {
  const auto lambda = linalg::partial_trace(HermitianOperator::symmetrized(j), Dims{din, dout}, Subsystem::second);
  const ComplexMatrix s = linalg::kron(linalg::inv_sqrt_pd(lambda).matrix(), ComplexMatrix::Identity(dout, dout));
  return s * j * s;
}

// Diluted R rho R iteration shared by the state and process estimators.
// `update` maps (K_eps, X) to the next normalized iterate; `trace` is Tr X.
// Steps that would lower the likelihood are retried with half the dilution.
template <typename Update>
MleResult iterate(const Problem& pb, ComplexMatrix x, std::size_t dim, double trace, const MleOptions& options,
                  Update update) {
  MleResult out;
  std::vector<double> probs;
  double l = log_likelihood(pb, x, &probs);
  if (!std::isfinite(l)) throw NumericalError("mle: start point assigns zero probability to observed counts");
  if (options.record_history) out.history.push_back(l);

  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
  double eps = 1.0;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const ComplexMatrix k_hat = r_operator(pb, probs, dim) * (trace / pb.total);
    bool accepted = false;
    double l_new = l;
    ComplexMatrix x_new;
    std::vector<double> probs_new;
    while (eps >= kMinEpsilon) {
      const ComplexMatrix k_eps = (id + eps * k_hat) / (1.0 + eps);
      x_new = update(k_eps, x);
      l_new = log_likelihood(pb, x_new, &probs_new);
      if (std::isfinite(l_new) && l_new >= l) {
        accepted = true;
        break;
      }
      eps *= 0.5;
    }
    if (!accepted) {
      out.converged = true;
      break;
    }
    const double gain = l_new - l;
    x = std::move(x_new);
    probs = std::move(probs_new);
    l = l_new;
    if (options.record_history) out.history.push_back(l);
    if (gain < options.tolerance) {
      out.converged = true;
      ++it;
      break;
    }
    eps = std::min(2.0 * eps, 1e6);
  }
  out.iterations = it;
  out.log_likelihood = l;
  out.choi = HermitianOperator::symmetrized(x);
  return out;
}

}  // namespace

QuantumChannel MleResult::channel() const { return QuantumChannel::from_choi(choi.matrix(), 2, 2); }

MleResult mle_process(const CountsTable& counts, const MleOptions& options) {
  Problem pb;
  const auto& kets = eigenstates();
  for (std::size_t i = 0; i < kStates; ++i) {
    const ComplexMatrix rho_t = linalg::projector(kets[i]).matrix().transpose();
    for (std::size_t j = 0; j < kStates; ++j) {
      const double n = counts(i, j);
      if (n < 0.0 || !std::isfinite(n)) throw DimensionError("mle_process: counts must be nonnegative");
      pb.omega.push_back(linalg::kron(rho_t, linalg::projector(kets[j]).matrix()));
      pb.n.push_back(n);
      pb.total += n;
    }
  }
  if (pb.total <= 0.0) throw DimensionError("mle_process: total counts must be positive");

  // Linear inversion on per-preparation frequencies scaled so that the six
  // projections sum to 3, as they do for unit-trace outputs.
  const linalg::HermitianBasis basis(4);
  RealMatrix a(kCombos, basis.size());
  RealVector f(kCombos);
  for (std::size_t i = 0; i < kStates; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < kStates; ++j) row += counts(i, j);
    for (std::size_t j = 0; j < kStates; ++j) {
      const std::size_t k = i * kStates + j;
      f(k) = row > 0.0 ? 3.0 * counts(i, j) / row : 0.5;
      for (std::size_t b = 0; b < basis.size(); ++b)
        a(k, b) = (pb.omega[k] * basis.element(b).matrix()).trace().real();
    }
  }
  const RealVector coords = a.colPivHouseholderQr().solve(f);
  HermitianOperator start = clip_psd(HermitianOperator::symmetrized(basis.matrix(coords)));
  start += 1e-9 * HermitianOperator::identity(4);
  ComplexMatrix x = tp_normalize(start.matrix(), 2, 2);

  auto update = [](const ComplexMatrix& k, const ComplexMatrix& j) {
    return tp_normalize(k * j * k, 2, 2);
  };
  return iterate(pb, std::move(x), 4, 2.0, options, update);
}

HermitianOperator mle_state(const std::array<double, kStates>& counts, const MleOptions& options) {
  Problem pb;
  const auto& kets = eigenstates();
  for (std::size_t j = 0; j < kStates; ++j) {
    if (counts[j] < 0.0 || !std::isfinite(counts[j])) throw DimensionError("mle_state: counts must be nonnegative");
    pb.omega.push_back(linalg::projector(kets[j]).matrix());
    pb.n.push_back(counts[j]);
    pb.total += counts[j];
  }
  if (pb.total <= 0.0) throw DimensionError("mle_state: total counts must be positive");

  // Linear inversion from the three Bloch components.
  Eigen::Vector3d r;
  for (int b = 0; b < 3; ++b) {
    const double plus = counts[2 * b], minus = counts[2 * b + 1];
    r(b) = plus + minus > 0.0 ? (plus - minus) / (plus + minus) : 0.0;
  }
  const double norm = r.norm();
  if (norm > 1.0 - 1e-9) r *= (1.0 - 1e-9) / norm;
  const ComplexMatrix x = 0.5 * (linalg::pauli::identity() + r(0) * linalg::pauli::x() +
                                 r(1) * linalg::pauli::y() + r(2) * linalg::pauli::z());

  auto update = [](const ComplexMatrix& k, const ComplexMatrix& rho) {
    const ComplexMatrix m = k * rho * k;
    return ComplexMatrix(m / m.trace().real());
  };
  return iterate(pb, x, 2, 1.0, options, update).choi;
}

double process_fidelity(const HermitianOperator& choi_a, const HermitianOperator& choi_b) {
  return linalg::fidelity(choi_a / choi_a.trace(), choi_b / choi_b.trace());
}

double choi_distance(const HermitianOperator& choi_a, const HermitianOperator& choi_b) {
  return linalg::frobenius_distance((choi_a / choi_a.trace()).matrix(), (choi_b / choi_b.trace()).matrix());
}

}  // namespace qchan::tomo
