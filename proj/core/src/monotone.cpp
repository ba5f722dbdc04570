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

#include "qchan/monotone.hpp"

#include <random>

#include <nlohmann/json.hpp>

#include "qchan/channel_spec.hpp"

namespace qchan::measures {

namespace {

using channels::compose;

double table_measure(const CorrelationTable& t, const ConicSolver& solver) {
  const auto r = non_macrorealism_robustness(t, {}, solver);
  if (!r.ok()) throw NumericalError("non-macrorealism LP failed: " + conic::to_string(r.solver_status));
  return r.value;
}

CorrelationTable chsh_table(const QuantumChannel& e) {
  const auto s = channels::chsh_temporal_settings();
  return correlations::correlation_from_pdo(channels::pdo_of_channel(e), s.t0, s.t1);
}

// A channel with a reasonable chance of carrying quantumness: rotated
// depolarizing channels and low-rank random channels.
QuantumChannel base_channel(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < 0.5) {
    const double v = 0.3 + 0.7 * u(rng);
    const auto u1 = channels::unitary_channel(channels::random_unitary(2, rng));
    const auto u2 = channels::unitary_channel(channels::random_unitary(2, rng));
    return compose(u2, compose(channels::depolarizing(v), u1));
  }
  std::uniform_int_distribution<int> rank(1, 2);
  return channels::random_channel(2, 2, rng, static_cast<std::size_t>(rank(rng)));
}

QuantumChannel free_channel(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rank(1, 4);
  return channels::random_channel(2, 2, rng, static_cast<std::size_t>(rank(rng)));
}

// Random column-stochastic matrix P(a'|a).
std::vector<std::vector<double>> stochastic(std::size_t n, std::mt19937_64& rng) {
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<std::vector<double>> p(n, std::vector<double>(n));
  for (std::size_t a = 0; a < n; ++a) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += (p[k][a] = g(rng));
    for (std::size_t k = 0; k < n; ++k) p[k][a] /= s;
  }
  return p;
}

CorrelationTable post_process(const CorrelationTable& t, std::mt19937_64& rng, nlohmann::json& dump) {
  const std::size_t nx = t.inputs_first(), ny = t.inputs_second();
  const std::size_t na = t.outcomes_first(), nb = t.outcomes_second();
  std::vector<std::vector<std::vector<double>>> pa, pb;
  for (std::size_t x = 0; x < nx; ++x) pa.push_back(stochastic(na, rng));
  for (std::size_t y = 0; y < ny; ++y) pb.push_back(stochastic(nb, rng));
  dump["post_first"] = pa;
  dump["post_second"] = pb;
  CorrelationTable out(nx, ny, na, nb);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t a2 = 0; a2 < na; ++a2)
        for (std::size_t b2 = 0; b2 < nb; ++b2) {
          double s = 0.0;
          for (std::size_t a = 0; a < na; ++a)
            for (std::size_t b = 0; b < nb; ++b) s += pa[x][a2][a] * pb[y][b2][b] * t(a, b, x, y);
          out(a2, b2, x, y) = s;
        }
  return out;
}

nlohmann::json channel_dump(const QuantumChannel& e) { return nlohmann::json::parse(channels::channel_spec_json(e)); }

}  // namespace

std::string to_string(MonotoneMeasure m) {
  switch (m) {
    case MonotoneMeasure::quantum_memory: return "R_QM";
    case MonotoneMeasure::temporal_steering: return "R_TS";
    case MonotoneMeasure::non_macrorealism: return "R_nMR";
    case MonotoneMeasure::temporal_negativity: return "f";
  }
  return "?";
}

double channel_measure(MonotoneMeasure m, const QuantumChannel& e, const ConicSolver& solver) {
  switch (m) {
    case MonotoneMeasure::quantum_memory: {
      const auto r = quantum_memory_robustness(e, solver);
      if (!r.ok()) throw NumericalError("R_QM failed: " + conic::to_string(r.solver_status));
      return r.value;
    }
    case MonotoneMeasure::temporal_steering: {
      const auto r = steering_robustness(correlations::temporal_assemblage(e, channels::pauli_measurements()), solver);
      if (!r.ok()) throw NumericalError("R_TS failed: " + conic::to_string(r.solver_status));
      return r.value;
    }
    case MonotoneMeasure::non_macrorealism:
      return table_measure(chsh_table(e), solver);
    case MonotoneMeasure::temporal_negativity:
      return temporal_negativity(channels::pdo_of_channel(e));
  }
  return 0.0;
}

MonotoneReport monotone_harness(MonotoneMeasure m, const MonotoneOptions& options, const ConicSolver& solver) {
  MonotoneReport rep;
  rep.measure = m;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  auto record = [&](const char* check, double bound, double value, nlohmann::json dump) {
    rep.worst_excess = std::max(rep.worst_excess, value - bound);
    if (value > bound + options.tolerance)
      rep.violations.push_back({check, bound, value, dump.dump()});
  };

  for (std::size_t i = 0; i < options.instances; ++i) {
    try {
      const QuantumChannel e = base_channel(rng);
      nlohmann::json dump;
      dump["channel"] = channel_dump(e);
      const double before = channel_measure(m, e, solver);
      double after = 0.0;
      if (m == MonotoneMeasure::non_macrorealism) {
        after = table_measure(post_process(chsh_table(e), rng, dump), solver);
      } else {
        const QuantumChannel d2 = free_channel(rng);
        dump["post"] = channel_dump(d2);
        QuantumChannel g = compose(d2, e);
        if (m != MonotoneMeasure::temporal_steering) {
          const QuantumChannel d1 = free_channel(rng);
          dump["pre"] = channel_dump(d1);
          g = compose(g, d1);
        }
        after = channel_measure(m, g, solver);
      }
      ++rep.free_op_checks;
      record("free-operation", before, after, dump);
    } catch (const NumericalError&) {
      ++rep.solver_failures;
    }
  }

  for (std::size_t i = 0; i < options.instances; ++i) {
    try {
      const std::size_t k = 2 + static_cast<std::size_t>(u(rng) < 0.5);
      std::vector<QuantumChannel> parts;
      std::vector<double> w;
      double total = 0.0;
      nlohmann::json dump;
      for (std::size_t j = 0; j < k; ++j) {
        parts.push_back(base_channel(rng));
        w.push_back(u(rng) + 1e-3);
        total += w.back();
      }
      for (auto& x : w) x /= total;
      double w_sum = 0.0;
      for (std::size_t j = 0; j + 1 < k; ++j) w_sum += w[j];
      w.back() = 1.0 - w_sum;
      double bound = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        bound += w[j] * channel_measure(m, parts[j], solver);
        dump["parts"].push_back(channel_dump(parts[j]));
      }
      dump["weights"] = w;
      const double value = channel_measure(m, channels::mixture(parts, w), solver);
      ++rep.convexity_checks;
      record("convexity", bound, value, dump);
    } catch (const NumericalError&) {
      ++rep.solver_failures;
    }
  }
  return rep;
}

}  // namespace qchan::measures
