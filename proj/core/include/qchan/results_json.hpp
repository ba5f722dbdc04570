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

#include <optional>
#include <string>

#include "qchan/measures.hpp"

namespace qchan::measures {

/// One evaluation as written to results files:
/// {measure, inputs-digest, value, status, gap, certificate}.
struct ResultRecord {
  std::string measure;
  std::string inputs_digest;
  double value = 0.0;
  std::string status;  // exact | lower-bound | upper-bound | solver status on failure
  double gap = 0.0;
  std::optional<Certificate> certificate;
};

/// 16 hex digits of FNV-1a over the canonical input text.
std::string inputs_digest(const std::string& canonical_inputs);

ResultRecord make_record(const std::string& measure, const std::string& digest, const RobustnessResult& r);

std::string to_json(const ResultRecord& r, int indent = 2);
std::string to_json(const Certificate& c, int indent = -1);

}  // namespace qchan::measures
