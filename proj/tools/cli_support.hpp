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

// Sweep evaluation and output rendering behind the qchan command line.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qchan/measures.hpp"

namespace qchan::cli {

/// Sweep columns after v, in CSV order.
enum class Column { qm, ts, mr, f, negativity };
inline constexpr std::size_t kColumns = 5;
inline constexpr std::array<const char*, kColumns> kColumnNames = {"R_QM", "R_TS", "R_nMR", "f", "N_channel"};
/// Names accepted by --measures, same order.
inline constexpr std::array<const char*, kColumns> kMeasureKeys = {"qm", "ts", "mr", "f", "negativity"};

struct Family {
  std::size_t random_triples = 0;  // 0 means the 3 Paulis only

  static Family parse(const std::string& text);  // "paulis3" | "random:k"
  std::string to_string() const;
};

struct SweepSpec {
  double start = 0.0;
  double stop = 1.0;
  std::size_t points = 21;
  std::array<bool, kColumns> measures{true, true, true, true, true};
  Family family;
  std::uint64_t seed = 1;

  /// "a:b:n"
  static SweepSpec with_grid(const std::string& grid);
  /// Comma-separated subset of kMeasureKeys, or "all".
  void set_measures(const std::string& list);
  void validate() const;
  std::vector<double> grid() const;
};

struct Cell {
  bool present = false;
  double value = 0.0;
  double gap = 0.0;
  std::string status;  // exact | lower-bound | solver status on failure
  bool ok = true;
};

struct SweepRow {
  double v = 0.0;
  std::array<Cell, kColumns> cells;
};

/// Evaluates the requested measures on depolarizing(v) for every grid
/// point with at most `threads` workers (0: hardware concurrency). Rows are
/// in grid order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, std::size_t threads = 0);

/// Evaluates one grid point.
SweepRow evaluate_point(double v, const SweepSpec& spec);

bool all_ok(const std::vector<SweepRow>& rows);

/// v,R_QM,R_TS,R_nMR,f,N_channel; unrequested columns are left empty.
std::string sweep_csv(const std::vector<SweepRow>& rows);
/// Values with their solver gaps and statuses.
std::string sweep_json(const SweepSpec& spec, const std::vector<SweepRow>& rows);
/// Line chart, viewBox 0 0 640 480, one polyline per requested measure.
std::string sweep_svg(const SweepSpec& spec, const std::vector<SweepRow>& rows);

std::string verdict_text(const measures::HierarchyVerdict& h);
std::string verdict_json(const measures::HierarchyVerdict& h);

/// Writes to path.tmp-<pid> and renames over path. "-" writes to stdout.
void write_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace qchan::cli
