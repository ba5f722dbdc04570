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

#include "qchan/results_json.hpp"

#include <cstdint>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace qchan::measures {

namespace {

using nlohmann::json;

json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json certificate_json(const Certificate& c) {
  json j;
  j["kind"] = to_string(c.kind);
  j["offset"] = c.offset;
  if (!c.operators.empty()) {
    json ops = json::array();
    for (const auto& row : c.operators) {
      json r = json::array();
      for (const auto& op : row) r.push_back(matrix_json(op.matrix()));
      ops.push_back(std::move(r));
    }
    j["operators"] = std::move(ops);
  }
  if (!c.coefficients.empty()) j["coefficients"] = c.coefficients;
  return j;
}

}  // namespace

std::string inputs_digest(const std::string& canonical_inputs) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical_inputs) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ResultRecord make_record(const std::string& measure, const std::string& digest, const RobustnessResult& r) {
  ResultRecord rec;
  rec.measure = measure;
  rec.inputs_digest = digest;
  rec.value = r.value;
  rec.status = r.ok() ? to_string(r.status) : conic::to_string(r.solver_status);
  rec.gap = r.gap;
  rec.certificate = r.certificate;
  return rec;
}

std::string to_json(const Certificate& c, int indent) { return certificate_json(c).dump(indent); }

std::string to_json(const ResultRecord& r, int indent) {
  json j;
  j["measure"] = r.measure;
  j["inputs-digest"] = r.inputs_digest;
  j["value"] = r.value;
  j["status"] = r.status;
  j["gap"] = r.gap;
  j["certificate"] = r.certificate ? certificate_json(*r.certificate) : json(nullptr);
  return j.dump(indent);
}

}  // namespace qchan::measures
