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

#include "cli_support.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace qchan::cli {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Cell cell_from(const measures::RobustnessResult& r) {
  Cell c;
  c.present = true;
  c.value = r.value;
  c.gap = r.gap;
  c.ok = r.ok();
  c.status = c.ok ? measures::to_string(r.status) : conic::to_string(r.solver_status);
  return c;
}

}  // namespace

Family Family::parse(const std::string& text) {
  if (text == "paulis3") return {};
  if (text.rfind("random:", 0) == 0) {
    const std::string k = text.substr(7);
    if (k.empty() || k.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("family: expected random:<count>, got '" + text + "'");
    return Family{static_cast<std::size_t>(std::stoull(k))};
  }
  throw std::invalid_argument("family: expected paulis3 or random:<count>, got '" + text + "'");
}

std::string Family::to_string() const {
  return random_triples == 0 ? "paulis3" : "random:" + std::to_string(random_triples);
}

SweepSpec SweepSpec::with_grid(const std::string& grid) {
  SweepSpec s;
  double a = 0.0, b = 0.0;
  long long n = 0;
  char tail = 0;
  if (std::sscanf(grid.c_str(), "%lf:%lf:%lld%c", &a, &b, &n, &tail) != 3)
    throw std::invalid_argument("grid: expected start:stop:points, got '" + grid + "'");
  if (n < 0) throw std::invalid_argument("grid: points must be positive");
  s.start = a;
  s.stop = b;
  s.points = static_cast<std::size_t>(n);
  s.validate();
  return s;
}

void SweepSpec::set_measures(const std::string& list) {
  if (list == "all") {
    measures.fill(true);
    return;
  }
  measures.fill(false);
  std::stringstream ss(list);
  std::string item;
  bool any = false;
  while (std::getline(ss, item, ',')) {
    const auto it = std::find_if(kMeasureKeys.begin(), kMeasureKeys.end(),
                                 [&](const char* k) { return item == k; });
    if (it == kMeasureKeys.end()) throw std::invalid_argument("measures: unknown measure '" + item + "'");
    measures[static_cast<std::size_t>(it - kMeasureKeys.begin())] = true;
    any = true;
  }
  if (!any) throw std::invalid_argument("measures: empty list");
}

void SweepSpec::validate() const {
  if (!(start >= 0.0 && start <= stop && stop <= 1.0))
    throw std::invalid_argument("grid: need 0 <= start <= stop <= 1");
  if (points < 2) throw std::invalid_argument("grid: need at least 2 points");
}

std::vector<double> SweepSpec::grid() const {
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = i + 1 == points ? stop : start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

SweepRow evaluate_point(double v, const SweepSpec& spec) {
  SweepRow row;
  row.v = v;
  const auto e = channels::depolarizing(v);
  const auto pdo = channels::pdo_of_channel(e);
  const auto& want = spec.measures;

  if (want[0]) row.cells[0] = cell_from(measures::quantum_memory_robustness(e));
  if (want[1]) {
    const auto family = measures::default_sb_family(spec.family.random_triples, spec.seed);
    Cell best;
    for (const auto& m : family) {
      const Cell c = cell_from(measures::steering_robustness(correlations::temporal_assemblage(e, m)));
      if (!c.ok) {
        best = c;
        break;
      }
      if (!best.present || c.value > best.value) best = c;
    }
    if (best.ok && spec.family.random_triples > 0) best.status = measures::to_string(measures::ValueStatus::lower_bound);
    row.cells[1] = best;
  }
  if (want[2]) {
    const auto s = channels::chsh_temporal_settings();
    row.cells[2] = cell_from(measures::non_macrorealism_robustness(correlations::correlation_from_pdo(pdo, s.t0, s.t1)));
  }
  if (want[3]) {
    Cell c;
    c.present = true;
    c.value = measures::temporal_negativity(pdo);
    c.status = "exact";
    row.cells[3] = c;
  }
  if (want[4]) {
    const auto n = measures::channel_negativity(e);
    Cell c;
    c.present = true;
    c.value = n.negativity;
    c.gap = n.gap;
    c.ok = n.ok();
    c.status = c.ok ? "exact" : conic::to_string(n.solver_status);
    row.cells[4] = c;
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, std::size_t threads) {
  spec.validate();
  const auto g = spec.grid();
  std::vector<SweepRow> rows(g.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < g.size() && !failed; i = next++) {
      try {
        rows[i] = evaluate_point(g[i], spec);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  std::size_t n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n = std::min(n, g.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return rows;
}

bool all_ok(const std::vector<SweepRow>& rows) {
  for (const auto& r : rows)
    for (const auto& c : r.cells)
      if (c.present && !c.ok) return false;
  return true;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "v";
  for (const char* name : kColumnNames) out += std::string(",") + name;
  out += '\n';
  for (const auto& r : rows) {
    out += fmt(r.v);
    for (const auto& c : r.cells) {
      out += ',';
      if (c.present) out += fmt(c.value);
    }
    out += '\n';
  }
  return out;
}

std::string sweep_json(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["grid"] = {{"start", spec.start}, {"stop", spec.stop}, {"points", spec.points}};
  j["family"] = spec.family.to_string();
  j["seed"] = spec.seed;
  j["rows"] = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json row;
    row["v"] = r.v;
    for (std::size_t k = 0; k < kColumns; ++k) {
      const auto& c = r.cells[k];
      if (!c.present) continue;
      row[kColumnNames[k]] = {{"value", c.value}, {"gap", c.gap}, {"status", c.status}};
    }
    j["rows"].push_back(row);
  }
  return j.dump(2) + "\n";
}

std::string sweep_svg(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  constexpr double W = 640, H = 480, L = 60, R = 150, T = 30, B = 50;
  static const char* colors[kColumns] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};
  double ymax = 0.0;
  for (const auto& r : rows)
    for (const auto& c : r.cells)
      if (c.present) ymax = std::max(ymax, c.value);
  ymax = ymax > 0.0 ? ymax * 1.05 : 1.0;
  const double x0 = spec.start, x1 = spec.stop > spec.start ? spec.stop : spec.start + 1.0;
  auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - y / ymax * (H - T - B); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 480\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
  s << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">v</text>\n";
  s << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << fmt(x0) << "</text>\n";
  s << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << fmt(x1) << "</text>\n";
  s << "<text x=\"" << L - 6 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\">" << fmt(ymax) << "</text>\n";
  s << "<text x=\"" << L - 6 << "\" y=\"" << H - B + 4 << "\" text-anchor=\"end\">0</text>\n";
  std::size_t legend = 0;
  for (std::size_t k = 0; k < kColumns; ++k) {
    if (!spec.measures[k]) continue;
    s << "<polyline fill=\"none\" stroke=\"" << colors[k] << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (const auto& r : rows) {
      if (!r.cells[k].present) continue;
      if (!first) s << ' ';
      s << fmt(px(r.v)) << ',' << fmt(py(r.cells[k].value));
      first = false;
    }
    s << "\"/>\n";
    const double ly = T + 20.0 * static_cast<double>(legend++);
    s << "<line x1=\"" << W - R + 15 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 40 << "\" y2=\"" << ly
      << "\" stroke=\"" << colors[k] << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << W - R + 46 << "\" y=\"" << ly + 4 << "\">" << kColumnNames[k] << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string verdict_text(const measures::HierarchyVerdict& h) {
  std::ostringstream s;
  s << "v = " << fmt(h.v) << " (" << (h.computational ? "computational" : "thresholds") << ")\n";
  for (const auto& p : h.properties)
    s << "  " << measures::to_string(p.property) << ": " << measures::to_string(p.verdict) << "  [" << p.justification
      << "]\n";
  return s.str();
}

std::string verdict_json(const measures::HierarchyVerdict& h) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["v"] = h.v;
  j["mode"] = h.computational ? "computational" : "thresholds";
  j["coherent"] = h.coherent();
  j["properties"] = ordered_json::array();
  for (const auto& p : h.properties) {
    ordered_json e;
    e["property"] = measures::to_string(p.property);
    e["verdict"] = measures::to_string(p.verdict);
    e["justification"] = p.justification;
    if (p.witness)
      e["witness"] = *p.witness;
    else
      e["witness"] = nullptr;
    j["properties"].push_back(e);
  }
  return j.dump(2) + "\n";
}

void write_atomic(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content << std::flush;
    return;
  }
  namespace fs = std::filesystem;
  const std::string tmp = path + ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write to " + tmp + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace qchan::cli
