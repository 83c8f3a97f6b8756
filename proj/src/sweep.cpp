// Copyright 2026 The Mollow Authors
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

#include "mollow/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "mollow/error.hpp"

namespace mollow {

const char* to_string(FrequencyUnits units) noexcept {
  return units == FrequencyUnits::kGamma ? "gamma" : "omega_plus";
}

FrequencyUnits parse_units(std::string_view text) {
  if (text == "gamma") return FrequencyUnits::kGamma;
  if (text == "omega_plus") return FrequencyUnits::kOmegaPlus;
  throw Error(ErrorCode::kInvalidArgument,
              "units must be gamma or omega_plus, got '" + std::string(text) + "'");
}

void FrequencyGrid::validate() const {
  if (!std::isfinite(min) || !std::isfinite(max) || !(min < max)) {
    throw Error(ErrorCode::kInvalidArgument, "grid: need finite min < max");
  }
  if (count < 2) throw Error(ErrorCode::kInvalidArgument, "grid: count must be >= 2");
}

double FrequencyGrid::at(int i) const {
  if (i == count - 1) return max;
  return min + i * (max - min) / (count - 1);
}

std::vector<double> FrequencyGrid::points() const {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = at(i);
  return out;
}

double FrequencyGrid::to_gamma(double value, double omega_plus) const {
  return units == FrequencyUnits::kGamma ? value : value * omega_plus;
}

// ---------------------------------------------------------------------------
// g2 map

CorrelationMap g2_map(const RFParams& p, const FrequencyGrid& grid,
                      double gamma_filter, int worker_count,
                      const EpsilonPolicy& policy) {
  grid.validate();
  const double gammas[] = {gamma_filter};
  const double eps = default_epsilon(gammas, policy);
  const LindbladModel model = rf_model(p);

  CorrelationMap map;
  map.grid = grid;
  map.gamma_filter = gamma_filter;
  map.params = p;
  map.omega_plus = dressed_structure(p).splitting;
  map.epsilon = eps;
  map.policy = policy;
  const int n = grid.count;
  map.values.assign(static_cast<std::size_t>(n) * n, 0.0);

  std::vector<std::pair<int, int>> tasks;
  tasks.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) tasks.emplace_back(i, j);
  }
  std::vector<double> drifts(tasks.size(), 0.0);

  std::atomic<std::size_t> next{0};
  std::atomic<long> evaluations{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_task = tasks.size();
  std::string error_text;
  ErrorCode error_code = ErrorCode::kInvalidArgument;

  auto worker = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const auto [i, j] = tasks[t];
      const double w1 = grid.to_gamma(grid.at(i), map.omega_plus);
      const double w2 = grid.to_gamma(grid.at(j), map.omega_plus);
      try {
        const auto r = filtered_g2(model, {w1, gamma_filter, eps},
                                   {w2, gamma_filter, eps}, policy);
        evaluations.fetch_add(1, std::memory_order_relaxed);
        map.values[static_cast<std::size_t>(i) * n + j] = r.value;
        map.values[static_cast<std::size_t>(j) * n + i] = r.value;
        drifts[t] = r.epsilon_drift.value_or(0.0);
      } catch (const Error& e) {
        std::lock_guard lock(error_mutex);
        failed = true;
        if (t < error_task) {
          error_task = t;
          error_code = e.code();
          std::ostringstream msg;
          msg << "g2map: cell (" << i << "," << j << ") at omega=("
              << grid.at(i) << "," << grid.at(j) << ") "
              << to_string(grid.units) << ": " << e.what();
          error_text = msg.str();
        }
      }
    }
  };

  int workers = worker_count > 0
                    ? worker_count
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, static_cast<int>(tasks.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int k = 0; k < workers; ++k) pool.emplace_back(worker);
  }
  if (failed) throw Error(error_code, error_text);

  map.evaluations = evaluations.load();
  map.epsilon_drift_max = drifts.empty() ? 0.0 : *std::max_element(drifts.begin(), drifts.end());
  return map;
}

// ---------------------------------------------------------------------------
// spectra

SpectrumSweep spectrum_sweep(const RFParams& p, const FrequencyGrid& grid,
                             std::optional<double> gamma_filter,
                             const EpsilonPolicy& policy) {
  grid.validate();
  SpectrumSweep sweep;
  sweep.grid = grid;
  sweep.params = p;
  sweep.gamma_filter = gamma_filter;
  sweep.policy = policy;
  if (grid.units == FrequencyUnits::kOmegaPlus) {
    sweep.omega_plus = dressed_structure(p).splitting;
  } else {
    try {
      sweep.omega_plus = dressed_structure(p).splitting;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kRegime) throw;
    }
  }

  const auto points = grid.points();
  std::vector<double> omegas(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    omegas[k] = grid.to_gamma(points[k], sweep.omega_plus.value_or(1.0));
  }
  const LindbladModel model = rf_model(p);
  SpectrumResult r = gamma_filter ? filtered_spectrum(model, *gamma_filter, omegas, policy)
                                  : spectrum_qrt(model, omegas);
  // Re-express on the grid's own axis.
  r.frequencies = points;
  const double area = trapezoid(r.frequencies, r.values);
  for (auto& v : r.values) v /= area;
  sweep.result = std::move(r);
  return sweep;
}

bool LeapfrogCheck::all_bunched() const {
  return std::all_of(samples.begin(), samples.end(),
                     [](const LeapfrogSample& s) { return s.g2 > 1.0; });
}

LeapfrogCheck leapfrog_check(const RFParams& p, double gamma_filter,
                             const EpsilonPolicy& policy) {
  LeapfrogCheck check;
  check.dressed = dressed_structure(p);
  const LindbladModel model = rf_model(p);
  const double central = check.dressed.leapfrog_sums[1];
  for (double x : kLeapfrogSampleOffsets) {
    const double w1 = x * check.dressed.splitting;
    const double w2 = central - w1;
    const double ws[] = {w1, w2};
    const auto specs = make_sensors(ws, gamma_filter, policy);
    const auto r = filtered_g2(model, specs[0], specs[1], policy);
    check.samples.push_back({w1, w2, r.value, r.epsilon_drift.value_or(0.0)});
  }
  return check;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kIo, "cannot open '" + tmp.string() + "' for writing");
    }
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::kIo,
                "cannot rename into '" + path.string() + "': " + ec.message());
  }
}

namespace {

void meta(std::string& out, std::string_view key, const std::string& value) {
  out += "# ";
  out += key;
  out += '=';
  out += value;
  out += '\n';
}

void meta_policy(std::string& out, const EpsilonPolicy& policy) {
  meta(out, "epsilon_factor", format_double(policy.factor));
  meta(out, "epsilon_max_factor", format_double(policy.max_factor));
  meta(out, "epsilon_max_halvings", std::to_string(policy.max_halvings));
  meta(out, "epsilon_drift_tolerance", format_double(policy.drift_tolerance));
  meta(out, "epsilon_check", policy.check ? "true" : "false");
}

void meta_grid(std::string& out, const FrequencyGrid& grid) {
  meta(out, "units", to_string(grid.units));
  meta(out, "grid_min", format_double(grid.min));
  meta(out, "grid_max", format_double(grid.max));
  meta(out, "grid_count", std::to_string(grid.count));
}

}  // namespace

std::string render_map(const CorrelationMap& map) {
  std::string out;
  meta(out, "kind", "g2map");
  meta(out, "rabi", format_double(map.params.rabi));
  meta(out, "detuning", format_double(map.params.detuning));
  meta(out, "gamma_filter", format_double(map.gamma_filter));
  meta(out, "omega_plus", format_double(map.omega_plus));
  meta_grid(out, map.grid);
  meta(out, "epsilon", format_double(map.epsilon));
  meta_policy(out, map.policy);
  meta(out, "epsilon_drift_max", format_double(map.epsilon_drift_max));
  out += "omega1,omega2,g2\n";
  const int n = map.grid.count;
  for (int i = 0; i < n; ++i) {
    const std::string w1 = format_double(map.grid.at(i));
    for (int j = 0; j < n; ++j) {
      out += w1;
      out += ',';
      out += format_double(map.grid.at(j));
      out += ',';
      out += format_double(map.at(i, j));
      out += '\n';
    }
  }
  return out;
}

std::string render_spectrum(const SpectrumSweep& sweep) {
  std::string out;
  meta(out, "kind", "spectrum");
  meta(out, "rabi", format_double(sweep.params.rabi));
  meta(out, "detuning", format_double(sweep.params.detuning));
  meta(out, "gamma_filter",
       sweep.gamma_filter ? format_double(*sweep.gamma_filter) : "none");
  if (sweep.omega_plus) meta(out, "omega_plus", format_double(*sweep.omega_plus));
  meta_grid(out, sweep.grid);
  meta(out, "normalization", sweep.result.normalization);
  if (!sweep.gamma_filter) {
    meta(out, "coherent_weight", format_double(sweep.result.coherent_weight));
    meta(out, "incoherent_weight", format_double(sweep.result.incoherent_weight));
  } else {
    meta_policy(out, sweep.policy);
  }
  out += "omega,S\n";
  for (std::size_t k = 0; k < sweep.result.values.size(); ++k) {
    out += format_double(sweep.result.frequencies[k]);
    out += ',';
    out += format_double(sweep.result.values[k]);
    out += '\n';
  }
  return out;
}

void write_map(const CorrelationMap& map, const std::filesystem::path& path) {
  write_file_atomic(path, render_map(map));
}

void write_spectrum(const SpectrumSweep& sweep,
                    const std::filesystem::path& path) {
  write_file_atomic(path, render_spectrum(sweep));
}

std::optional<std::string> CsvTable::meta(std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  CsvTable table;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kIo, path.string() + ": line " + std::to_string(line_no) + ": " + why);
  };
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!table.columns.empty()) fail("metadata after header row");
      const auto body = line.substr(line.find_first_not_of("# "));
      const auto eq = body.find('=');
      if (eq == std::string::npos) fail("metadata line without '='");
      table.metadata.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    if (table.columns.empty()) {
      table.columns = split(line);
      for (const auto& c : table.columns) {
        double probe = 0.0;
        const auto r = std::from_chars(c.data(), c.data() + c.size(), probe);
        if (r.ec == std::errc() && r.ptr == c.data() + c.size()) {
          fail("missing header row");
        }
      }
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != table.columns.size()) fail("wrong number of fields");
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0.0;
      const auto r = std::from_chars(c.data(), c.data() + c.size(), v);
      if (r.ec != std::errc() || r.ptr != c.data() + c.size()) {
        fail("not a number: '" + c + "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.columns.empty()) fail("missing header row");
  return table;
}

}  // namespace mollow
