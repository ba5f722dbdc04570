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

#include "qchan/tomo_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "qchan/measures.hpp"
#include "qchan/rng.hpp"

namespace qchan::tomo {

using linalg::Dims;
using linalg::Subsystem;

const std::array<ComplexVector, kStates>& eigenstates() {
  static const std::array<ComplexVector, kStates> kets = [] {
    const double s = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    std::array<ComplexVector, kStates> k;
    for (auto& v : k) v = ComplexVector(2);
    k[0] << s, s;
    k[1] << s, -s;
    k[2] << s, s * i;
    k[3] << s, -s * i;
    k[4] << 1.0, 0.0;
    k[5] << 0.0, 1.0;
    return k;
  }();
  return kets;
}

void ExperimentConfig::validate() const {
  if (!(v >= 0.0 && v <= 1.0)) throw DimensionError("experiment: v must lie in [0, 1]");
  if (!(counts_per_combo > 0.0) || !std::isfinite(counts_per_combo))
    throw DimensionError("experiment: counts per combination must be positive");
  if (trials < 1) throw DimensionError("experiment: trials must be at least 1");
  if (!(instrument_noise >= 0.0 && instrument_noise <= 1.0))
    throw DimensionError("experiment: instrument noise must lie in [0, 1]");
}

double CountsTable::total() const {
  double t = 0.0;
  for (double x : n) t += x;
  return t;
}

std::string CountsTable::to_csv() const {
  std::string out = "prep,proj,count\n";
  char buf[64];
  for (std::size_t i = 0; i < kStates; ++i)
    for (std::size_t j = 0; j < kStates; ++j) {
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g\n", i, j, (*this)(i, j));
      out += buf;
    }
  return out;
}

CountsTable CountsTable::from_csv(const std::string& text) {
  CountsTable t;
  std::array<bool, kCombos> seen{};
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.rfind("prep", 0) == 0) continue;
    std::size_t i = 0, j = 0;
    double c = 0.0;
    char tail = 0;
    if (std::sscanf(line.c_str(), "%zu,%zu,%lf%c", &i, &j, &c, &tail) != 3 || i >= kStates || j >= kStates ||
        c < 0.0 || !std::isfinite(c))
      throw DimensionError("counts csv: bad row at line " + std::to_string(lineno));
    if (seen[i * kStates + j]) throw DimensionError("counts csv: duplicate row at line " + std::to_string(lineno));
    seen[i * kStates + j] = true;
    t(i, j) = c;
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
    throw DimensionError("counts csv: expected 36 rows");
  return t;
}

std::array<double, kCombos> ideal_probabilities(double v, double instrument_noise) {
  if (!(v >= 0.0 && v <= 1.0)) throw DimensionError("ideal_probabilities: v must lie in [0, 1]");
  const double ve = v * (1.0 - instrument_noise);
  const auto& k = eigenstates();
  std::array<double, kCombos> p{};
  for (std::size_t i = 0; i < kStates; ++i)
    for (std::size_t j = 0; j < kStates; ++j)
      p[i * kStates + j] = ve * std::norm(k[j].dot(k[i])) + (1.0 - ve) / 2.0;
  return p;
}

std::array<double, kCombos> gate_mixture_probabilities(double v, double instrument_noise) {
  if (!(v >= 0.0 && v <= 1.0)) throw DimensionError("gate_mixture_probabilities: v must lie in [0, 1]");
  const double p = channels::depolarizing_p_of_v(v);
  const std::array<ComplexMatrix, 3> gates = {linalg::pauli::x(), linalg::pauli::y(), linalg::pauli::z()};
  const ComplexMatrix half_id = 0.5 * linalg::pauli::identity();
  const auto& k = eigenstates();
  std::array<double, kCombos> out{};
  for (std::size_t i = 0; i < kStates; ++i) {
    const ComplexMatrix rho = k[i] * k[i].adjoint();
    ComplexMatrix r = p * rho;
    for (const auto& g : gates) r += ((1.0 - p) / 3.0) * g * rho * g.adjoint();
    r = (1.0 - instrument_noise) * r + instrument_noise * half_id;
    for (std::size_t j = 0; j < kStates; ++j) out[i * kStates + j] = k[j].dot(r * k[j]).real();
  }
  return out;
}

CountsTable expected_counts(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto p = ideal_probabilities(cfg.v, cfg.instrument_noise);
  CountsTable t;
  for (std::size_t k = 0; k < kCombos; ++k) t.n[k] = cfg.counts_per_combo * p[k];
  return t;
}

CountsTable sample_counts(const ExperimentConfig& cfg, std::uint64_t stream) {
  cfg.validate();
  const auto p = ideal_probabilities(cfg.v, cfg.instrument_noise);
  rng::Philox g(cfg.seed, stream);
  CountsTable t;
  for (std::size_t k = 0; k < kCombos; ++k) t.n[k] = static_cast<double>(rng::poisson(g, cfg.counts_per_combo * p[k]));
  return t;
}

// No-signaling projection -------------------------------------------------------------

namespace {

double member_fidelity(const HermitianOperator& a, const HermitianOperator& b, FidelityKind kind) {
  const double ta = a.trace(), tb = b.trace();
  if (ta <= 0.0 || tb <= 0.0) return 0.0;
  return kind == FidelityKind::squared ? linalg::fidelity(a / ta, b / tb) : linalg::root_fidelity(a / ta, b / tb);
}

// Shift each input's members so every marginal equals the common mean, then
// rescale to unit total trace.
std::vector<std::vector<HermitianOperator>> equalize_marginals(std::vector<std::vector<HermitianOperator>> m) {
  const std::size_t nx = m.size();
  const std::size_t d = m[0][0].dim();
  HermitianOperator mean = HermitianOperator::zero(d);
  std::vector<HermitianOperator> marg;
  for (const auto& row : m) {
    HermitianOperator s = HermitianOperator::zero(d);
    for (const auto& op : row) s += op;
    mean += s;
    marg.push_back(s);
  }
  mean = mean / static_cast<double>(nx);
  const double scale = 1.0 / mean.trace();
  for (std::size_t x = 0; x < nx; ++x) {
    const HermitianOperator shift = (mean - marg[x]) / static_cast<double>(m[x].size());
    for (auto& op : m[x]) op = scale * (op + shift);
  }
  return m;
}

bool all_zero(const HermitianOperator& h) { return h.trace() <= 1e-12 && linalg::max_eigenvalue(h) <= 1e-12; }

}  // namespace

ProjectionResult project_no_signaling(const std::vector<std::vector<HermitianOperator>>& members, FidelityKind kind,
                                      const conic::ConicSolver& solver) {
  if (members.empty() || members[0].empty()) throw DimensionError("project_no_signaling: empty assemblage");
  const std::size_t d = members[0][0].dim();
  for (const auto& row : members) {
    if (row.size() != members[0].size()) throw DimensionError("project_no_signaling: ragged assemblage");
    for (const auto& op : row) {
      if (op.dim() != d) throw DimensionError("project_no_signaling: member dimension mismatch");
      if (!linalg::is_psd(op, 1e-9)) throw DimensionError("project_no_signaling: members must be PSD");
    }
  }

  // Already no-signaling: return the normalized input untouched.
  {
    double total = 0.0;
    for (const auto& op : members[0]) total += op.trace();
    bool ns = std::abs(total - 1.0) <= 1e-10;
    HermitianOperator m0 = HermitianOperator::zero(d);
    for (const auto& op : members[0]) m0 += op;
    for (std::size_t x = 1; ns && x < members.size(); ++x) {
      HermitianOperator mx = HermitianOperator::zero(d);
      for (const auto& op : members[x]) mx += op;
      ns = (mx - m0).matrix().cwiseAbs().maxCoeff() <= 1e-10;
    }
    if (ns) {
      ProjectionResult r;
      r.assemblage.emplace(members);
      r.unchanged = true;
      return r;
    }
  }

  conic::ConicProgram prog;
  const std::size_t nx = members.size(), na = members[0].size();
  struct Slot {
    conic::BlockId block;
    bool joint;  // 2d block [[rho, X], [X^dag, tau]]
  };
  std::vector<std::vector<Slot>> slots(nx);
  conic::LinearFunctional objective;
  ComplexMatrix coupling = ComplexMatrix::Zero(2 * d, 2 * d);
  coupling.topRightCorner(d, d) = -0.5 * ComplexMatrix::Identity(d, d);
  coupling.bottomLeftCorner(d, d) = -0.5 * ComplexMatrix::Identity(d, d);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t a = 0; a < na; ++a) {
      const auto& rho = members[x][a];
      const std::string label = "tau[" + std::to_string(x) + "][" + std::to_string(a) + "]";
      if (all_zero(rho)) {
        slots[x].push_back({prog.add_psd_block(label, d), false});
        continue;
      }
      const auto b = prog.add_psd_block(label, 2 * d);
      slots[x].push_back({b, true});
      conic::MatrixExpression fixed(d);
      fixed.add_sub_block(b, 2 * d, 0);
      prog.add_equality(fixed, rho.matrix());
      objective.add(b, coupling);
    }

  auto add_tau = [&](conic::MatrixExpression& e, const Slot& s, double c) {
    if (s.joint)
      e.add_sub_block(s.block, 2 * d, d, c);
    else
      e.add(s.block, d, c);
  };
  for (std::size_t x = 1; x < nx; ++x) {
    conic::MatrixExpression e(d);
    for (std::size_t a = 0; a < na; ++a) {
      add_tau(e, slots[x][a], 1.0);
      add_tau(e, slots[0][a], -1.0);
    }
    prog.add_equality(e, ComplexMatrix::Zero(d, d));
  }
  {
    conic::MatrixExpression e(d);
    for (std::size_t a = 0; a < na; ++a) add_tau(e, slots[0][a], 1.0);
    double c = 0.0;
    prog.add_equality(e.functional(ComplexMatrix::Identity(d, d), &c), 1.0 - c);
  }
  prog.set_objective(objective);

  const auto sol = solver.solve(prog);
  ProjectionResult out;
  out.status = sol.status;
  if (sol.status != conic::SolveStatus::optimal) return out;

  std::vector<std::vector<HermitianOperator>> tau(nx);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t a = 0; a < na; ++a) {
      const auto& s = slots[x][a];
      const ComplexMatrix& z = sol.block(s.block);
      tau[x].push_back(HermitianOperator::symmetrized(s.joint ? ComplexMatrix(z.bottomRightCorner(d, d)) : z));
    }
  tau = equalize_marginals(std::move(tau));

  double min_f = 1.0;
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t a = 0; a < na; ++a)
      if (slots[x][a].joint) min_f = std::min(min_f, member_fidelity(members[x][a], tau[x][a], kind));
  out.assemblage.emplace(std::move(tau));
  out.min_fidelity = min_f;
  return out;
}

std::vector<std::vector<HermitianOperator>> assemblage_from_counts(const CountsTable& counts) {
  std::vector<std::vector<HermitianOperator>> m(3);
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t a = 0; a < 2; ++a) {
      std::array<double, kStates> row{};
      for (std::size_t j = 0; j < kStates; ++j) row[j] = counts(2 * x + a, j);
      m[x].push_back(mle_state(row) / 2.0);
    }
  return m;
}

// Pipeline ------------------------------------------------------------------------

Reconstruction reconstruct(const CountsTable& counts, const conic::ConicSolver& solver) {
  Reconstruction r;
  const auto mle = mle_process(counts);
  r.choi = mle.choi;
  r.mle_iterations = mle.iterations;
  r.mle_converged = mle.converged;
  const auto channel = mle.channel();
  const auto pdo = channels::pdo_of_channel(channel);
  r.pdo = pdo.op();

  const auto qm = measures::quantum_memory_robustness(channel, solver);
  r.r_qm = qm.value;
  r.f = measures::temporal_negativity(pdo);

  const auto settings = channels::chsh_temporal_settings();
  const auto table = correlations::correlation_from_pdo(pdo, settings.t0, settings.t1);
  const auto mr = measures::non_macrorealism_robustness(table, {}, solver);
  r.r_nmr = mr.value;

  const auto proj = project_no_signaling(assemblage_from_counts(counts), FidelityKind::squared, solver);
  r.min_projection_fidelity = proj.min_fidelity;
  bool ts_ok = proj.status == conic::SolveStatus::optimal;
  if (ts_ok) {
    const auto ts = measures::steering_robustness(*proj.assemblage, solver);
    r.r_ts = ts.value;
    ts_ok = ts.ok();
  }

  const HermitianOperator rho = r.choi / r.choi.trace();
  r.purity = rho.inner(rho);
  r.ok = qm.ok() && mr.ok() && ts_ok;
  return r;
}

namespace {

struct Moments {
  double n = 0.0, mean = 0.0, m2 = 0.0;
};

Moments combine(const Moments& a, const Moments& b) {
  if (a.n == 0.0) return b;
  if (b.n == 0.0) return a;
  Moments c;
  c.n = a.n + b.n;
  const double delta = b.mean - a.mean;
  c.mean = a.mean + delta * b.n / c.n;
  c.m2 = a.m2 + b.m2 + delta * delta * a.n * b.n / c.n;
  return c;
}

// Fixed-shape pairwise reduction over [lo, hi).
template <typename Get>
Moments reduce(const std::vector<std::optional<Reconstruction>>& rs, std::size_t lo, std::size_t hi, Get get) {
  if (hi - lo == 1) return rs[lo] ? Moments{1.0, get(*rs[lo]), 0.0} : Moments{};
  const std::size_t mid = lo + (hi - lo) / 2;
  return combine(reduce(rs, lo, mid, get), reduce(rs, mid, hi, get));
}

template <typename Get>
MeasureStats stats(const std::vector<std::optional<Reconstruction>>& rs, Get get) {
  const Moments m = reduce(rs, 0, rs.size(), get);
  MeasureStats s;
  s.mean = m.mean;
  s.stddev = m.n >= 2.0 ? std::sqrt(m.m2 / (m.n - 1.0)) : 0.0;
  return s;
}

}  // namespace

MonteCarloResult monte_carlo_errors(const ExperimentConfig& cfg, const conic::ConicSolver& solver) {
  cfg.validate();
  std::vector<std::optional<Reconstruction>> results(cfg.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < cfg.trials; t = next++) {
      try {
        auto r = reconstruct(sample_counts(cfg, t + 1), solver);
        if (r.ok) results[t] = std::move(r);
      } catch (const std::exception&) {
        // counted as a failure below
      }
    }
  };
  std::size_t nthreads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min(nthreads, cfg.trials);
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  MonteCarloResult mc;
  mc.trials = cfg.trials;
  mc.failures = static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const auto& r) { return !r; }));
  mc.r_qm = stats(results, [](const Reconstruction& r) { return r.r_qm; });
  mc.r_ts = stats(results, [](const Reconstruction& r) { return r.r_ts; });
  mc.r_nmr = stats(results, [](const Reconstruction& r) { return r.r_nmr; });
  mc.f = stats(results, [](const Reconstruction& r) { return r.f; });
  mc.purity = stats(results, [](const Reconstruction& r) { return r.purity; });
  mc.min_projection_fidelity = stats(results, [](const Reconstruction& r) { return r.min_projection_fidelity; });
  return mc;
}

SimulationReport simulate(const ExperimentConfig& cfg, const conic::ConicSolver& solver) {
  cfg.validate();
  SimulationReport rep;
  rep.config = cfg;
  rep.counts = cfg.noiseless ? expected_counts(cfg) : sample_counts(cfg, 0);
  rep.estimate = reconstruct(rep.counts, solver);
  if (cfg.trials >= 2 && !cfg.noiseless) rep.errors = monte_carlo_errors(cfg, solver);
  return rep;
}

std::string report_json(const SimulationReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["v"] = r.config.v;
  j["R_n-MR"] = r.estimate.r_nmr;
  j["R_TS"] = r.estimate.r_ts;
  j["R_QM"] = r.estimate.r_qm;
  j["purity"] = r.estimate.purity;
  j["f"] = r.estimate.f;
  ordered_json e;
  e["R_n-MR"] = r.errors.r_nmr.stddev;
  e["R_TS"] = r.errors.r_ts.stddev;
  e["R_QM"] = r.errors.r_qm.stddev;
  e["purity"] = r.errors.purity.stddev;
  e["f"] = r.errors.f.stddev;
  j["errors"] = e;
  j["min_projection_fidelity"] = r.estimate.min_projection_fidelity;
  j["counts_per_combo"] = r.config.counts_per_combo;
  j["seed"] = r.config.seed;
  j["trials"] = r.errors.trials;
  j["failures"] = r.errors.failures;
  j["instrument_noise"] = r.config.instrument_noise;
  j["noiseless"] = r.config.noiseless;
  j["mle_iterations"] = r.estimate.mle_iterations;
  j["mle_converged"] = r.estimate.mle_converged;
  j["ok"] = r.estimate.ok && r.errors.failures == 0;
  return j.dump(2) + "\n";
}

}  // namespace qchan::tomo
