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

#include <sstream>
#include <stdexcept>

#include "qchan/measures.hpp"

namespace qchan::measures {

namespace {

constexpr double kWitnessFloor = 1e-6;

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

void set(PropertyVerdict& p, Verdict v, std::string why, std::optional<double> witness = std::nullopt) {
  p.verdict = v;
  p.justification = std::move(why);
  p.witness = witness;
}

}  // namespace

std::string to_string(Property p) {
  switch (p) {
    case Property::eb: return "EB";
    case Property::sb: return "SB";
    case Property::nlb: return "NLB";
    case Property::chsh_nlb: return "CHSH-NLB";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::broken: return "broken";
    case Verdict::not_broken: return "not-broken";
    case Verdict::unknown: return "unknown";
  }
  return "?";
}

bool HierarchyVerdict::coherent() const {
  // broken at position i forces broken at every later position;
  // not-broken at position i forces not-broken at every earlier one.
  for (std::size_t i = 0; i < properties.size(); ++i) {
    if (properties[i].verdict == Verdict::broken)
      for (std::size_t j = i + 1; j < properties.size(); ++j)
        if (properties[j].verdict != Verdict::broken) return false;
    if (properties[i].verdict == Verdict::not_broken)
      for (std::size_t j = 0; j < i; ++j)
        if (properties[j].verdict != Verdict::not_broken) return false;
  }
  return true;
}

HierarchyVerdict classify_depolarizing(double v, bool computational, const ConicSolver& solver) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("classify_depolarizing: v must lie in [0, 1]");
  namespace th = thresholds;
  HierarchyVerdict h;
  h.v = v;
  h.computational = computational;
  for (std::size_t i = 0; i < 4; ++i) h.properties[i].property = static_cast<Property>(i);
  auto& eb = h.properties[0];
  auto& sb = h.properties[1];
  auto& nlb = h.properties[2];
  auto& chsh = h.properties[3];

  // Broken verdicts come from the proven thresholds in both modes.
  if (v <= th::kEb) set(eb, Verdict::broken, "v <= 1/3: entanglement breaking");
  if (v <= th::kSbBroken) set(sb, Verdict::broken, "v <= 5/12: unsteerable for every POVM");
  if (v <= th::kNlbBroken) set(nlb, Verdict::broken, "v <= 0.525: local hidden variable model exists");
  if (v <= th::kChshNlb) set(chsh, Verdict::broken, "v <= 1/sqrt(2): no CHSH violation");

  if (!computational) {
    if (v > th::kEb) set(eb, Verdict::not_broken, "v > 1/3: Choi state entangled");
    if (v > th::kSbNotBroken) set(sb, Verdict::not_broken, "v > 1/2: steerable with projective measurements");
    if (v > th::kNlbNotBroken) set(nlb, Verdict::not_broken, "v > 0.696: Bell violation known");
    if (v > th::kChshNlb) set(chsh, Verdict::not_broken, "v > 1/sqrt(2): CHSH violated");
  } else {
    const auto e = channels::depolarizing(v);
    const auto qm = quantum_memory_robustness(e, solver);
    if (!qm.ok()) throw NumericalError("quantum memory robustness failed");
    if (qm.value > kWitnessFloor)
      set(eb, Verdict::not_broken, "R_QM = " + num(qm.value) + " > 0", qm.value);
    else if (eb.verdict != Verdict::broken)
      set(eb, Verdict::broken, "R_QM = 0 (PPT exact for qubits)", qm.value);

    const auto ts = incompatibility_robustness(channels::pauli_measurements(), e, solver);
    if (!ts.ok()) throw NumericalError("steering robustness failed");
    if (ts.value > kWitnessFloor)
      set(sb, Verdict::not_broken, "3-Pauli steering robustness = " + num(ts.value) + " > 0", ts.value);

    const auto s = channels::chsh_temporal_settings();
    const double b = correlations::chsh_value(
        correlations::correlation_from_pdo(channels::pdo_of_channel(e), s.t0, s.t1));
    if (b > 2.0 + kWitnessFloor) {
      set(nlb, Verdict::not_broken, "CHSH value " + num(b) + " > 2", b);
      set(chsh, Verdict::not_broken, "CHSH value " + num(b) + " > 2", b);
    }
  }

  // Propagate along the chain: broken flows down, not-broken flows up.
  for (std::size_t i = 0; i < 4; ++i)
    if (h.properties[i].verdict == Verdict::broken)
      for (std::size_t j = i + 1; j < 4; ++j)
        if (h.properties[j].verdict == Verdict::unknown)
          set(h.properties[j], Verdict::broken, "implied: " + to_string(h.properties[i].property) + " broken");
  for (std::size_t i = 4; i-- > 0;)
    if (h.properties[i].verdict == Verdict::not_broken)
      for (std::size_t j = 0; j < i; ++j)
        if (h.properties[j].verdict == Verdict::unknown)
          set(h.properties[j], Verdict::not_broken, "implied: " + to_string(h.properties[i].property) + " not broken");
  for (auto& p : h.properties)
    if (p.verdict == Verdict::unknown)
      p.justification = computational ? "no threshold or computed witness decides" : "between proven thresholds";
  if (!h.coherent()) throw NumericalError("hierarchy verdict incoherent at v = " + num(v));
  return h;
}

}  // namespace qchan::measures
