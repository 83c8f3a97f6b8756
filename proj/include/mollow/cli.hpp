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

// Run configuration for the command-line front end.
//
// Files are plain text: "[section]" headers and "key = value" lines, '#'
// starts a comment. The manifest written after each run uses the same
// dialect, so it can be fed back in with --config; its [manifest] and
// [results] sections are output-only and skipped on input.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mollow/error.hpp"
#include "mollow/models.hpp"
#include "mollow/sensors.hpp"
#include "mollow/sweep.hpp"

namespace mollow::cli {

enum class Command { kSpectrum, kG2Map, kG2Tau, kBundle, kLeapfrogCheck };

const char* to_string(Command command) noexcept;
std::optional<Command> parse_command(std::string_view text);

struct RunConfig {
  Command command = Command::kSpectrum;
  RFParams physics;
  FrequencyGrid grid{-1.5, 1.5, 801, FrequencyUnits::kOmegaPlus};
  std::optional<double> gamma_filter;
  bool spectrum_filtered = false;
  double tau_max = 10.0;
  int tau_count = 201;
  // Sensor frequencies for a filtered g2tau run, in grid units.
  std::optional<double> omega1;
  std::optional<double> omega2;
  BundleParams bundle;
  std::filesystem::path output_dir = "out";
  int workers = 0;  // 0: hardware concurrency
  EpsilonPolicy epsilon;
};

// One "section.key = value" assignment, from a file line or a flag.
struct Setting {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;  // 0 for command-line flags
};

struct ConfigIssue {
  std::string section;
  std::string key;
  int line = 0;
  std::string message;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

// Parses config text; overrides (e.g. from flags) win over file values.
// Collects every problem before throwing ConfigError.
RunConfig parse_config(std::string_view text,
                       const std::vector<Setting>& overrides = {});
RunConfig load_config(const std::optional<std::filesystem::path>& file,
                      const std::vector<Setting>& overrides = {});

// The config back in its own dialect (sections in a fixed order).
std::string render_config(const RunConfig& config);

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitDegenerate = 4;
inline constexpr int kExitEigen = 5;
inline constexpr int kExitPopulation = 6;
inline constexpr int kExitRegime = 7;
inline constexpr int kExitDimension = 8;
inline constexpr int kExitTruncation = 9;
inline constexpr int kExitInvalid = 10;
inline constexpr int kExitLeapfrogFailed = 11;

int exit_code_for(ErrorCode code) noexcept;

// Runs one command, writes <out>/<command>.csv and <out>/manifest, and
// returns an exit status. Diagnostics go to err, summaries to out.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace mollow::cli
