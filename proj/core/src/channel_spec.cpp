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

#include "qchan/channel_spec.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace qchan::channels {

namespace {

using nlohmann::json;

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const json& field(const json& obj, const std::string& path, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) throw SpecError(path, std::string("missing field '") + name + "'");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SpecError(path, "expected a number");
  return j.get<double>();
}

Complex entry(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2)
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
  throw SpecError(path, "expected a number or a [re, im] pair");
}

ComplexMatrix matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SpecError(path, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  ComplexMatrix m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.empty()) throw SpecError(rp, "expected a non-empty row array");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw SpecError(rp, "row length " + std::to_string(row.size()) + " differs from " + std::to_string(cols));
    }
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = entry(row[static_cast<std::size_t>(c)], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

std::vector<ComplexMatrix> matrix_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SpecError(path, "expected a non-empty array of matrices");
  std::vector<ComplexMatrix> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(matrix(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

template <class F>
auto at(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(path, e.what());
  }
}

json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex z = m(r, c);
      if (z.imag() == 0.0) row.push_back(z.real());
      else row.push_back({z.real(), z.imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

QuantumChannel parse_channel_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError("$", "syntax error at " + line_col(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  if (!doc.is_object()) throw SpecError("$", "expected an object");
  const json& kind = field(doc, "$", "kind");
  if (!kind.is_string()) throw SpecError("$.kind", "expected a string");
  const std::string k = kind.get<std::string>();

  if (k == "depolarizing") {
    const double v = number(field(doc, "$", "v"), "$.v");
    if (!(v >= 0.0 && v <= 1.0)) throw SpecError("$.v", "must lie in [0, 1]");
    return depolarizing(v);
  }
  if (k == "kraus") {
    auto ops = matrix_list(field(doc, "$", "ops"), "$.ops");
    return at("$.ops", [&] { return QuantumChannel::from_kraus(std::move(ops)); });
  }
  if (k == "measure_prepare") {
    const auto effects = matrix_list(field(doc, "$", "povm"), "$.povm");
    const auto states = matrix_list(field(doc, "$", "states"), "$.states");
    std::vector<HermitianOperator> e;
    for (std::size_t i = 0; i < effects.size(); ++i)
      e.push_back(at("$.povm[" + std::to_string(i) + "]", [&] { return HermitianOperator(effects[i], 1e-10); }));
    const POVM povm = at("$.povm", [&] { return POVM(e); });
    std::vector<DensityOperator> s;
    for (std::size_t i = 0; i < states.size(); ++i)
      s.push_back(at("$.states[" + std::to_string(i) + "]",
                     [&] { return DensityOperator(HermitianOperator(states[i], 1e-10)); }));
    return at("$", [&] { return measure_prepare_channel(povm, s); });
  }
  throw SpecError("$.kind", "unknown kind '" + k + "' (expected depolarizing, kraus or measure_prepare)");
}

std::string channel_spec_json(const QuantumChannel& e) {
  json doc;
  doc["kind"] = "kraus";
  doc["ops"] = json::array();
  for (const auto& k : e.kraus()) doc["ops"].push_back(matrix_json(k));
  return doc.dump();
}

}  // namespace qchan::channels
