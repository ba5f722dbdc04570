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

#include "qchan/correlations.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qchan::correlations {

using linalg::Dims;
using linalg::Subsystem;

namespace {

constexpr double kRouteTolerance = 1e-10;

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

void require_route_match(const Assemblage& a, const std::vector<std::vector<ComplexMatrix>>& ref,
                         const char* what) {
  for (std::size_t x = 0; x < a.inputs(); ++x)
    for (std::size_t k = 0; k < a.outcomes(); ++k) {
      const double d = (a(k, x).matrix() - ref[x][k]).cwiseAbs().maxCoeff();
      if (d > kRouteTolerance) throw NumericalError(std::string(what) + ": routes differ by " + fmt(d));
    }
}

}  // namespace

Assemblage::Assemblage(std::vector<std::vector<HermitianOperator>> members) : members_(std::move(members)) {
  if (members_.empty() || members_.front().empty()) throw DimensionError("assemblage needs inputs and outcomes");
  const std::size_t na = members_.front().size();
  const std::size_t d = members_.front().front().dim();
  for (std::size_t x = 0; x < members_.size(); ++x) {
    if (members_[x].size() != na) throw DimensionError("assemblage inputs with different outcome counts");
    double tr = 0.0;
    for (const auto& m : members_[x]) {
      if (m.dim() != d) throw DimensionError("assemblage members of different dimensions");
      const double e = linalg::min_eigenvalue(m);
      if (e < -1e-9) throw NumericalError("assemblage member eigenvalue " + fmt(e) + " < 0");
      tr += m.trace();
    }
    if (std::abs(tr - 1.0) > 1e-8)
      throw NumericalError("assemblage input " + std::to_string(x) + " has total trace " + fmt(tr));
  }
}

HermitianOperator Assemblage::marginal(std::size_t x) const {
  HermitianOperator s = HermitianOperator::zero(dim());
  for (const auto& m : members_.at(x)) s += m;
  return s;
}

double Assemblage::signaling() const {
  const ComplexMatrix ref = marginal(0).matrix();
  double worst = 0.0;
  for (std::size_t x = 1; x < inputs(); ++x)
    worst = std::max(worst, (marginal(x).matrix() - ref).cwiseAbs().maxCoeff());
  return worst;
}

Assemblage spatial_assemblage(const DensityOperator& state, const MeasurementCollection& m) {
  const std::size_t da = m.dim();
  if (state.dim() % da != 0) throw DimensionError("state does not factor with the measured dimension");
  const std::size_t db = state.dim() / da;
  const ComplexMatrix idb = ComplexMatrix::Identity(db, db);
  std::vector<std::vector<HermitianOperator>> out(m.inputs());
  for (std::size_t x = 0; x < m.inputs(); ++x)
    for (std::size_t a = 0; a < m.outcomes(); ++a) {
      const ComplexMatrix prod = linalg::kron(m[x][a].matrix(), idb) * state.matrix();
      out[x].push_back(HermitianOperator::symmetrized(linalg::partial_trace(prod, Dims{da, db}, Subsystem::first)));
    }
  return Assemblage(std::move(out));
}

Assemblage temporal_assemblage(const PseudoDensityOperator& p, const MeasurementCollection& m) {
  if (m.dim() != 2) throw DimensionError("temporal assemblage needs qubit measurements");
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  std::vector<std::vector<HermitianOperator>> out(m.inputs());
  for (std::size_t x = 0; x < m.inputs(); ++x)
    for (std::size_t a = 0; a < m.outcomes(); ++a) {
      const ComplexMatrix prod = linalg::kron(m[x][a].matrix(), id) * p.matrix();
      const ComplexMatrix r = linalg::partial_trace(prod, Dims{2, 2}, Subsystem::first);
      out[x].push_back(HermitianOperator(r, 1e-10));
    }
  return Assemblage(std::move(out));
}

Assemblage temporal_assemblage(const QuantumChannel& e, const MeasurementCollection& m) {
  Assemblage a = temporal_assemblage(channels::pdo_of_channel(e), m);
  std::vector<std::vector<ComplexMatrix>> ref(m.inputs());
  for (std::size_t x = 0; x < m.inputs(); ++x)
    for (std::size_t k = 0; k < m.outcomes(); ++k) ref[x].push_back(e.apply(m[x][k].matrix()) / 2.0);
  require_route_match(a, ref, "temporal assemblage");
  return a;
}

Assemblage channel_steering_assemblage(const PseudoDensityOperator& p, const MeasurementCollection& m) {
  if (m.dim() != 2) throw DimensionError("channel steering needs qubit measurements");
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  std::vector<std::vector<HermitianOperator>> out(m.inputs());
  for (std::size_t y = 0; y < m.inputs(); ++y)
    for (std::size_t b = 0; b < m.outcomes(); ++b) {
      const ComplexMatrix prod = linalg::kron(id, m[y][b].matrix()) * p.matrix();
      const ComplexMatrix r = linalg::partial_trace(prod, Dims{2, 2}, Subsystem::second);
      out[y].push_back(HermitianOperator(r, 1e-10));
    }
  return Assemblage(std::move(out));
}

Assemblage channel_steering_assemblage(const QuantumChannel& e, const MeasurementCollection& m) {
  Assemblage a = channel_steering_assemblage(channels::pdo_of_channel(e), m);
  std::vector<std::vector<ComplexMatrix>> ref(m.inputs());
  for (std::size_t y = 0; y < m.inputs(); ++y)
    for (std::size_t b = 0; b < m.outcomes(); ++b) ref[y].push_back(e.dual_apply(m[y][b]).matrix() / 2.0);
  require_route_match(a, ref, "channel steering assemblage");
  return a;
}

// ---------------------------------------------------------------------------
// Tables

CorrelationTable::CorrelationTable(std::size_t nx, std::size_t ny, std::size_t na, std::size_t nb)
    : nx_(nx), ny_(ny), na_(na), nb_(nb), p_(nx * ny * na * nb, 0.0) {
  if (nx == 0 || ny == 0 || na == 0 || nb == 0) throw DimensionError("correlation table with empty alphabet");
}

void CorrelationTable::validate() const {
  for (std::size_t x = 0; x < nx_; ++x)
    for (std::size_t y = 0; y < ny_; ++y) {
      double s = 0.0;
      for (std::size_t a = 0; a < na_; ++a)
        for (std::size_t b = 0; b < nb_; ++b) {
          const double v = (*this)(a, b, x, y);
          if (v < 0.0) throw NumericalError("negative probability " + fmt(v));
          s += v;
        }
      if (std::abs(s - 1.0) > 1e-9) throw NumericalError("probabilities sum to " + fmt(s));
    }
}

std::string CorrelationTable::to_csv() const {
  std::string out = "x,y,a,b,p\n";
  char buf[64];
  for (std::size_t x = 0; x < nx_; ++x)
    for (std::size_t y = 0; y < ny_; ++y)
      for (std::size_t a = 0; a < na_; ++a)
        for (std::size_t b = 0; b < nb_; ++b) {
          std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%zu,%.17g\n", x, y, a, b, (*this)(a, b, x, y));
          out += buf;
        }
  return out;
}

CorrelationTable CorrelationTable::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,y,a,b,p", 0) != 0)
    throw std::invalid_argument("correlation CSV: missing header x,y,a,b,p");
  std::map<std::array<std::size_t, 4>, double> rows;
  std::size_t nx = 0, ny = 0, na = 0, nb = 0, lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t x, y, a, b;
    double p;
    if (std::sscanf(line.c_str(), "%zu,%zu,%zu,%zu,%lf", &x, &y, &a, &b, &p) != 5)
      throw std::invalid_argument("correlation CSV: malformed line " + std::to_string(lineno));
    rows[{x, y, a, b}] = p;
    nx = std::max(nx, x + 1);
    ny = std::max(ny, y + 1);
    na = std::max(na, a + 1);
    nb = std::max(nb, b + 1);
  }
  if (rows.size() != nx * ny * na * nb) throw std::invalid_argument("correlation CSV: incomplete table");
  CorrelationTable t(nx, ny, na, nb);
  for (const auto& [k, p] : rows) t(k[2], k[3], k[0], k[1]) = p;
  return t;
}

namespace {

template <class Op>
CorrelationTable table_from(const ComplexMatrix& op, const MeasurementCollection& m0,
                            const MeasurementCollection& m1, Op&& check_dims) {
  check_dims();
  CorrelationTable t(m0.inputs(), m1.inputs(), m0.outcomes(), m1.outcomes());
  for (std::size_t x = 0; x < m0.inputs(); ++x)
    for (std::size_t y = 0; y < m1.inputs(); ++y)
      for (std::size_t a = 0; a < m0.outcomes(); ++a)
        for (std::size_t b = 0; b < m1.outcomes(); ++b) {
          const ComplexMatrix eff = linalg::kron(m0[x][a].matrix(), m1[y][b].matrix());
          double p = (eff * op).trace().real();
          if (p < -1e-9) throw NumericalError("negative probability " + fmt(p));
          t(a, b, x, y) = std::max(0.0, p);
        }
  return t;
}

}  // namespace

CorrelationTable correlation_from_pdo(const PseudoDensityOperator& p, const MeasurementCollection& m0,
                                      const MeasurementCollection& m1) {
  return table_from(p.matrix(), m0, m1, [&] {
    if (m0.dim() != 2 || m1.dim() != 2) throw DimensionError("PDO correlations need qubit measurements");
  });
}

CorrelationTable correlation_from_state(const DensityOperator& rho, const MeasurementCollection& m0,
                                        const MeasurementCollection& m1) {
  return table_from(rho.matrix(), m0, m1, [&] {
    if (m0.dim() * m1.dim() != rho.dim()) throw DimensionError("state does not match measurements");
  });
}

double correlator(const CorrelationTable& t, std::size_t x, std::size_t y) {
  double e = 0.0;
  for (std::size_t a = 0; a < t.outcomes_first(); ++a)
    for (std::size_t b = 0; b < t.outcomes_second(); ++b) e += (a == b ? 1.0 : -1.0) * t(a, b, x, y);
  return e;
}

double chsh_value(const CorrelationTable& t) {
  if (t.inputs_first() != 2 || t.inputs_second() != 2 || t.outcomes_first() != 2 || t.outcomes_second() != 2)
    throw DimensionError("CHSH needs a 2-input 2-outcome table");
  return correlator(t, 0, 0) + correlator(t, 1, 0) + correlator(t, 0, 1) - correlator(t, 1, 1);
}

// ---------------------------------------------------------------------------
// Semi-quantum game

namespace {

void check_joint(const POVM& joint, std::size_t d) {
  if (joint.dim() != d * d) throw DimensionError("joint POVM must act on d (x) d");
}

ComplexMatrix effective_effect(const POVM& joint, std::size_t b, const DensityOperator& sy) {
  const std::size_t d = sy.dim();
  const ComplexMatrix prod = joint[b].matrix() * linalg::kron(sy.matrix(), ComplexMatrix::Identity(d, d));
  return linalg::partial_trace(prod, Dims{d, d}, Subsystem::first);
}

}  // namespace

SemiQuantumTable semi_quantum_probs_pdo(const PseudoDensityOperator& p, const POVM& joint,
                                        const std::vector<DensityOperator>& sigma_x,
                                        const std::vector<DensityOperator>& sigma_y) {
  check_joint(joint, 2);
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  SemiQuantumTable out(sigma_x.size(), std::vector<std::vector<double>>(sigma_y.size()));
  for (std::size_t x = 0; x < sigma_x.size(); ++x) {
    const ComplexMatrix member =
        linalg::partial_trace(linalg::kron(sigma_x[x].matrix(), id) * p.matrix(), Dims{2, 2}, Subsystem::first);
    const ComplexMatrix out_state = member / member.trace().real();
    for (std::size_t y = 0; y < sigma_y.size(); ++y)
      for (std::size_t b = 0; b < joint.size(); ++b)
        out[x][y].push_back((effective_effect(joint, b, sigma_y[y]) * out_state).trace().real());
  }
  return out;
}

SemiQuantumTable semi_quantum_probs(const QuantumChannel& e, const POVM& joint,
                                    const std::vector<DensityOperator>& sigma_x,
                                    const std::vector<DensityOperator>& sigma_y) {
  const std::size_t d = e.out_dim();
  check_joint(joint, d);
  SemiQuantumTable out(sigma_x.size(), std::vector<std::vector<double>>(sigma_y.size()));
  for (std::size_t x = 0; x < sigma_x.size(); ++x) {
    const ComplexMatrix ex = e.apply(sigma_x[x].matrix());
    for (std::size_t y = 0; y < sigma_y.size(); ++y) {
      const ComplexMatrix st = linalg::kron(sigma_y[y].matrix(), ex);
      for (std::size_t b = 0; b < joint.size(); ++b) out[x][y].push_back((joint[b].matrix() * st).trace().real());
    }
  }
  if (e.in_dim() == 2 && d == 2) {
    const auto alt = semi_quantum_probs_pdo(channels::pdo_of_channel(e), joint, sigma_x, sigma_y);
    for (std::size_t x = 0; x < out.size(); ++x)
      for (std::size_t y = 0; y < out[x].size(); ++y)
        for (std::size_t b = 0; b < out[x][y].size(); ++b)
          if (std::abs(out[x][y][b] - alt[x][y][b]) > kRouteTolerance)
            throw NumericalError("semi-quantum routes differ by " + fmt(std::abs(out[x][y][b] - alt[x][y][b])));
  }
  return out;
}

std::size_t frame_rank(const std::vector<HermitianOperator>& ops, double tolerance) {
  if (ops.empty()) return 0;
  const linalg::HermitianBasis basis(ops.front().dim());
  RealMatrix m(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(ops.size()));
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (ops[k].dim() != basis.dim()) throw DimensionError("frame operators of different dimensions");
    m.col(static_cast<Eigen::Index>(k)) = basis.coordinates(ops[k].matrix());
  }
  Eigen::ColPivHouseholderQR<RealMatrix> qr(m);
  qr.setThreshold(tolerance);
  return static_cast<std::size_t>(qr.rank());
}

// ---------------------------------------------------------------------------
// Deterministic strategies

namespace {

std::vector<std::vector<int>> all_functions(std::size_t n_inputs, std::size_t n_outcomes) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < n_inputs; ++i) count *= n_outcomes;
  std::vector<std::vector<int>> out;
  out.reserve(count);
  std::vector<int> f(n_inputs, 0);
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(f);
    for (std::size_t i = n_inputs; i-- > 0;) {
      if (++f[i] < static_cast<int>(n_outcomes)) break;
      f[i] = 0;
    }
  }
  return out;
}

}  // namespace

DeterministicStrategies enumerate_deterministic(std::size_t n_inputs, std::size_t n_outcomes, int parties) {
  if (parties != 1 && parties != 2) throw std::invalid_argument("parties must be 1 or 2");
  if (n_inputs == 0 || n_outcomes == 0) throw std::invalid_argument("empty alphabet");
  double count = std::pow(double(n_outcomes), double(n_inputs));
  if (parties == 2) count *= count;
  if (count > double(kMaxStrategies))
    throw std::length_error("deterministic strategy count exceeds " + std::to_string(kMaxStrategies));

  DeterministicStrategies s;
  s.parties = parties;
  s.inputs = n_inputs;
  s.outcomes = n_outcomes;
  const auto fs = all_functions(n_inputs, n_outcomes);
  if (parties == 1) {
    for (const auto& f : fs) s.strategies.push_back({f, {}});
  } else {
    for (const auto& f : fs)
      for (const auto& g : fs) s.strategies.push_back({f, g});
  }
  return s;
}

}  // namespace qchan::correlations
