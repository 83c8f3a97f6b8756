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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mollow/dynamics.hpp"
#include "mollow/models.hpp"
#include "mollow/sensors.hpp"
#include "mollow/sweep.hpp"
#include "oracles/convolution.hpp"

using namespace mollow;

namespace {

const RFParams kFigure{20.0, 0.0};
const double kFigureFilter = 0.5;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  Verdict() { detail << std::setprecision(8); }

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::vector<int> local_maxima(const std::vector<double>& y) {
  std::vector<int> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] > y[i - 1] && y[i] > y[i + 1]) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = i + 1 == n ? b : a + (b - a) * i / (n - 1);
  return v;
}

LindbladModel thermal_mode(int dim, double pump) {
  const SpaceLayout layout({{"mode", dim}});
  const Operator a(layout, local::annihilation(dim));
  return LindbladModel(Operator::zero(layout), {{1.0, a}, {pump, a.adjoint()}}, a);
}

SensorSpec sensor(double omega, double gamma) {
  const double g[] = {gamma};
  return {omega, gamma, default_epsilon(g)};
}

void criterion1(Verdict& v) {
  const FrequencyGrid grid{-1.5, 1.5, 801, FrequencyUnits::kOmegaPlus};
  const auto s = spectrum_sweep(kFigure, grid, std::nullopt);
  const auto x = grid.points();
  const auto peaks = local_maxima(s.result.values);
  v.detail << "maxima=" << peaks.size();
  v.require(peaks.size() == 3, "three maxima");
  if (peaks.size() == 3) {
    const double expected[] = {-1.0, 0.0, 1.0};
    for (int k = 0; k < 3; ++k) {
      v.detail << " peak" << k << "=" << x[peaks[k]];
      v.require(std::abs(x[peaks[k]] - expected[k]) <= grid.step(), "peak within one step");
    }
  }
  double parts[3] = {0, 0, 0};
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double mid = 0.5 * (x[i] + x[i + 1]);
    const int which = mid < -0.5 ? 0 : (mid < 0.5 ? 1 : 2);
    parts[which] += 0.5 * (s.result.values[i] + s.result.values[i + 1]) * grid.step();
  }
  const double r_low = parts[1] / parts[0], r_high = parts[1] / parts[2];
  v.detail << " central/satellite=" << r_low << "," << r_high;
  v.require(std::abs(r_low - 2.0) <= 0.2 && std::abs(r_high - 2.0) <= 0.2, "ratio 2 +- 10%");
}

void criterion2(Verdict& v) {
  const double taus[] = {0.0, 50.0};
  const auto g = g2_tau_unfiltered(rf_model({5.0, 0.0}), taus);
  v.detail << "g2(0)=" << g.values[0] << " g2(50)=" << g.values[1];
  v.require(std::abs(g.values[0]) < 1e-10, "g2(0) < 1e-10");
  v.require(std::abs(g.values[1] - 1.0) < 0.01, "|g2(50) - 1| < 0.01");
}

void criterion3(Verdict& v) {
  const auto m = thermal_mode(8, 0.1);
  const double t0[] = {0.0};
  const double g2 = g2_tau_unfiltered(m, t0).values[0];
  const std::vector<SensorSpec> wide(3, sensor(0.0, 30.0));
  const double g3 = filtered_gn(m, wide).value;
  v.detail << "g2(0)=" << g2 << " g3=" << g3;
  v.require(std::abs(g2 - 2.0) <= 1e-3, "g2 = 2 +- 1e-3");
  v.require(std::abs(g3 - 6.0) <= 0.6, "g3 = 6 +- 10%");
}

void criterion4(Verdict& v) {
  const auto m = rf_model(kFigure);
  const double wp = dressed_structure(kFigure).splitting;
  const auto fine = linspace(-400.0, 400.0, 160001);
  const auto bare = spectrum_qrt(m, fine);
  std::vector<double> density(bare.values.size());
  for (std::size_t k = 0; k < density.size(); ++k) {
    density[k] = bare.values[k] * bare.incoherent_weight;
  }
  const auto grid = linspace(-1.5 * wp, 1.5 * wp, 401);
  auto expected = oracle::convolve(fine, density, bare.coherent_weight, 1.0, grid);
  const double area = trapezoid(grid, expected);
  for (auto& e : expected) e /= area;
  const auto got = filtered_spectrum(m, 1.0, grid);
  const double top = *std::max_element(expected.begin(), expected.end());
  double worst = 0.0;
  int used = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (expected[k] > 0.01 * top) {
      worst = std::max(worst, std::abs(got.values[k] / expected[k] - 1.0));
      ++used;
    }
  }
  v.detail << "points=" << used << " max rel dev=" << worst;
  v.require(worst < 0.02, "within 2%");
}

void criterion5(Verdict& v) {
  const FrequencyGrid grid{-1.5, 1.5, 101, FrequencyUnits::kOmegaPlus};
  using clock = std::chrono::steady_clock;

  auto t0 = clock::now();
  const auto map = g2_map(kFigure, grid, kFigureFilter, 1);
  const double single = std::chrono::duration<double>(clock::now() - t0).count();
  t0 = clock::now();
  const auto map4 = g2_map(kFigure, grid, kFigureFilter, 4);
  const double four = std::chrono::duration<double>(clock::now() - t0).count();
  const auto map8 = g2_map(kFigure, grid, kFigureFilter, 8);

  const int n = grid.count;
  const double wp = map.omega_plus;
  const double gamma = kFigureFilter;

  // (a) exchange symmetry, including independent evaluations with the
  // sensors swapped.
  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      asym = std::max(asym, std::abs(map.at(i, j) - map.at(j, i)) / std::abs(map.at(i, j)));
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, n - 1);
  const auto model = rf_model(kFigure);
  for (int k = 0; k < 10; ++k) {
    const int i = pick(rng), j = pick(rng);
    const SensorSpec a{grid.to_gamma(grid.at(i), wp), gamma, map.epsilon};
    const SensorSpec b{grid.to_gamma(grid.at(j), wp), gamma, map.epsilon};
    const double swapped = filtered_g2(model, b, a, map.policy).value;
    asym = std::max(asym, std::abs(swapped - map.at(i, j)) / std::abs(map.at(i, j)));
  }
  v.detail << "(a) asym=" << asym;
  v.require(asym <= 1e-10, "(a) exchange symmetry");

  // (b) nearest cell to each leapfrog line in every row, masked within 2
  // Gamma of the peak intersections.
  double sum = 0.0, lowest = 1e300;
  int count = 0;
  for (const auto& line : leapfrog_lines(kFigure)) {
    for (int i = 0; i < n; ++i) {
      const double w1 = grid.to_gamma(grid.at(i), wp);
      const double partner = line.partner(w1) / wp;  // grid units
      const int j = static_cast<int>(std::lround((partner - grid.min) / grid.step()));
      if (j < 0 || j >= n) continue;
      const double w2 = grid.to_gamma(grid.at(j), wp);
      bool masked = false;
      for (double a : {-wp, 0.0, wp})
        for (double b : {-wp, 0.0, wp})
          if (std::hypot(w1 - a, w2 - b) < 2.0 * gamma) masked = true;
      if (masked) continue;
      sum += map.at(i, j);
      lowest = std::min(lowest, map.at(i, j));
      ++count;
    }
  }
  v.detail << " (b) cells=" << count << " mean=" << sum / count << " min=" << lowest;
  v.require(count > 0 && sum / count > 1.0, "(b) mean > 1");
  v.require(lowest > 1.0, "(b) every cell > 1");

  // (c) cell nearest (Omega_+, 0)
  const int ic = static_cast<int>(std::lround((1.0 - grid.min) / grid.step()));
  const int jc = static_cast<int>(std::lround((0.0 - grid.min) / grid.step()));
  v.detail << " (c) g2(" << grid.at(ic) << "," << grid.at(jc) << ")=" << map.at(ic, jc);
  v.require(map.at(ic, jc) < 1.0, "(c) antibunched at (1,0)");

  // (d) workers
  const auto ref = render_map(map);
  const bool same = render_map(map4) == ref && render_map(map8) == ref;
  v.detail << " (d) identical=" << (same ? "yes" : "no");
  v.require(same, "(d) byte-identical for 1, 4, 8 workers");

  // (e) drift
  v.detail << " (e) drift=" << map.epsilon_drift_max;
  v.require(map.epsilon_drift_max < 0.01, "(e) drift < 1%");

  const unsigned cores = std::thread::hardware_concurrency();
  v.detail << " time 1w=" << single << "s 4w=" << four << "s cores=" << cores;
  v.require(single < 600.0, "single-threaded < 10 min");
  v.require(four < 180.0, "4 workers < 3 min");
}

void criterion6(Verdict& v) {
  const auto r = filtered_g2(rf_model({5.0, 0.0}), sensor(0.0, 30.0), sensor(0.0, 30.0));
  v.detail << "g2=" << r.value;
  v.require(r.value < 0.1, "g2 < 0.1");
}

void criterion7(Verdict& v) {
  const double wp = dressed_structure(kFigure).splitting;
  const BundleParams b;  // n = 2
  BundleParams doubled = b;
  doubled.fock_truncation *= 2;
  const auto half = bundle_report(kFigure, b, wp / 2);
  const auto line = bundle_report(kFigure, b, wp);
  v.detail << "g2(Omega_+/2)=" << half.g2_zero << " g2(Omega_+)=" << line.g2_zero;
  v.require(half.g2_zero > line.g2_zero, "two-photon resonance bunches more");
  double worst = 0.0;
  for (const auto& [r, wc] : {std::pair{half, wp / 2}, std::pair{line, wp}}) {
    const auto r2 = bundle_report(kFigure, doubled, wc);
    worst = std::max(worst, std::abs(r2.g2_zero / r.g2_zero - 1.0));
    worst = std::max(worst, std::abs(r2.cavity_population / r.cavity_population - 1.0));
  }
  v.detail << " truncation change=" << worst;
  v.require(worst < 1e-3, "truncation doubling < 0.1%");
}

void criterion8(Verdict& v) {
  const auto m = rf_model(kFigure);
  const double wp = dressed_structure(kFigure).splitting;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    std::vector<SensorSpec> specs{sensor(u(rng) * wp, kFigureFilter),
                                  sensor(u(rng) * wp, kFigureFilter)};
    const auto p1 = sensor_populations(m, specs);
    for (auto& s : specs) s.epsilon /= 2;
    const auto p2 = sensor_populations(m, specs);
    for (int s = 0; s < 2; ++s) worst = std::max(worst, std::abs(p1[s] / p2[s] / 4.0 - 1.0));
  }
  v.detail << "max |ratio/4 - 1|=" << worst;
  v.require(worst <= 0.01, "ratio 4 +- 1%");
}

}  // namespace

int main() {
  struct Item {
    int id;
    const char* name;
    double budget_s;
    std::function<void(Verdict&)> body;
  };
  const Item items[] = {
      {1, "Mollow triplet", 5.0, criterion1},
      {2, "unfiltered antibunching", 1.0, criterion2},
      {3, "thermal light", 10.0, criterion3},
      {4, "filtered spectrum vs convolution", 30.0, criterion4},
      {5, "two-photon map structure", 600.0, criterion5},
      {6, "wide-filter limit", 5.0, criterion6},
      {7, "bundle ordering", 60.0, criterion7},
      {8, "epsilon scaling", 1e300, criterion8},
  };
  int failures = 0;
  for (const auto& item : items) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      item.body(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (t > item.budget_s) {
      v.pass = false;
      v.detail << " [over time budget " << item.budget_s << " s]";
    }
    if (!v.pass) ++failures;
    std::printf("%s criterion %d (%s): %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", item.id,
                item.name, v.detail.str().c_str(), t);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
