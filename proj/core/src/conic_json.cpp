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

#include <nlohmann/json.hpp>

#include "qchan/conic.hpp"

namespace qchan::conic {

namespace {

nlohmann::json functional_json(const LinearFunctional& f) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& t : f.block_terms()) {
    nlohmann::json triplets = nlohmann::json::array();
    for (Eigen::Index i = 0; i < t.coeff.rows(); ++i)
      for (Eigen::Index j = 0; j < t.coeff.cols(); ++j) {
        const Complex c = t.coeff(i, j);
        if (c != Complex(0.0, 0.0)) triplets.push_back({i, j, c.real(), c.imag()});
      }
    blocks.push_back({{"block", t.block}, {"entries", std::move(triplets)}});
  }
  nlohmann::json scalars = nlohmann::json::array();
  for (const auto& t : f.scalar_terms()) scalars.push_back({{"scalar", t.scalar}, {"coeff", t.coeff}});
  return {{"blocks", std::move(blocks)}, {"scalars", std::move(scalars)}};
}

}  // namespace

std::string to_json(const ConicProgram& program) {
  nlohmann::json j;
  j["sense"] = "min";
  j["blocks"] = nlohmann::json::array();
  for (const auto& b : program.blocks()) j["blocks"].push_back({{"label", b.label}, {"dim", b.dim}});
  j["scalars"] = program.scalars();
  j["equalities"] = nlohmann::json::array();
  for (const auto& e : program.equalities())
    j["equalities"].push_back({{"lhs", functional_json(e.lhs)}, {"rhs", e.rhs}});
  j["objective"] = functional_json(program.objective());
  j["objective_constant"] = program.objective_constant();
  return j.dump(2);
}

}  // namespace qchan::conic
