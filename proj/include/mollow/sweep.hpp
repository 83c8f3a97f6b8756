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

#pragma once

// Frequency-grid sweeps (two-photon correlation maps and spectra) and their
// CSV files.
//
// CSV dialect: leading "# key=value" metadata lines, one header row, then
// data rows. Numbers use the shortest decimal form that round-trips binary64.
// Map rows are row-major (omega1 outer, omega2 inner); all frequencies are in
// the grid's declared units.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mollow/dynamics.hpp"
#include "mollow/models.hpp"
#include "mollow/sensors.hpp"

namespace mollow {

enum class FrequencyUnits { kGamma, kOmegaPlus };

const char* to_string(FrequencyUnits units) noexcept;
FrequencyUnits parse_units(std::string_view text);

struct FrequencyGrid {
  double min = -1.5;
  double max = 1.5;
  int count = 101;
  FrequencyUnits units = FrequencyUnits::kOmegaPlus;

  void validate() const;
  // min + i (max - min) / (count - 1); the last point is exactly max.
  double at(int i) const;
  std::vector<double> points() const;
  double to_gamma(double value, double omega_plus) const;
  double step() const { return (max - min) / (count - 1); }
};

struct CorrelationMap {
  FrequencyGrid grid;
  std::vector<double> values;  // count x count, row-major
  double gamma_filter = 0.0;
  RFParams params;
  double omega_plus = 0.0;
  double epsilon = 0.0;  // requested coupling before any halving
  EpsilonPolicy policy;
  double epsilon_drift_max = 0.0;
  long evaluations = 0;  // filtered_g2 calls made

  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.count + j]; }
};

// Filtered g2 on the upper triangle i <= j, mirrored into the lower one.
// Cells are independent tasks written into a preallocated matrix, so the
// output does not depend on worker_count (<= 0 means hardware concurrency).
CorrelationMap g2_map(const RFParams& p, const FrequencyGrid& grid,
                      double gamma_filter, int worker_count,
                      const EpsilonPolicy& policy = {});

struct SpectrumSweep {
  FrequencyGrid grid;
  RFParams params;
  std::optional<double> gamma_filter;
  std::optional<double> omega_plus;
  EpsilonPolicy policy;
  // Frequencies in grid units; unit area with respect to those units.
  SpectrumResult result;
};

// spectrum_qrt without a filter, filtered_spectrum with one.
SpectrumSweep spectrum_sweep(const RFParams& p, const FrequencyGrid& grid,
                             std::optional<double> gamma_filter,
                             const EpsilonPolicy& policy = {});

struct LeapfrogSample {
  double omega1 = 0.0;  // gamma units
  double omega2 = 0.0;
  double g2 = 0.0;
  double epsilon_drift = 0.0;
};

struct LeapfrogCheck {
  DressedStructure dressed;
  std::vector<LeapfrogSample> samples;

  bool all_bunched() const;
};

// Offsets (in units of Omega_+) of the default samples on the central
// antidiagonal omega2 = -omega1; all sit more than 2 Gamma from any peak for
// the default parameters.
inline constexpr double kLeapfrogSampleOffsets[] = {0.2, 0.4, 0.6, 0.8, 1.3};

// filtered_g2 at the default off-peak points of the central leapfrog line.
LeapfrogCheck leapfrog_check(const RFParams& p, double gamma_filter,
                             const EpsilonPolicy& policy = {});

std::string render_map(const CorrelationMap& map);
std::string render_spectrum(const SpectrumSweep& sweep);

// Both writers go through a temporary file renamed into place.
void write_map(const CorrelationMap& map, const std::filesystem::path& path);
void write_spectrum(const SpectrumSweep& sweep,
                    const std::filesystem::path& path);

std::string format_double(double value);

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::optional<std::string> meta(std::string_view key) const;
};

CsvTable read_csv(const std::filesystem::path& path);

// Writes text to path through path.tmp + rename.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& text);

}  // namespace mollow
