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

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mollow/cli.hpp"

#ifndef MOLLOW_VERSION
#define MOLLOW_VERSION "unknown"
#endif

namespace {

struct Flag {
  const char* name;
  const char* section;
  const char* key;
  const char* help;
};

constexpr Flag kFlags[] = {
    {"--out", "run", "output_dir", "Output directory"},
    {"--workers", "run", "workers", "Worker threads (0: all cores)"},
    {"--rabi", "physics", "rabi", "Rabi frequency in units of the emitter decay"},
    {"--gamma-filter", "filter", "gamma_filter", "Sensor linewidth"},
    {"--grid-min", "grid", "min", "First grid frequency"},
    {"--grid-max", "grid", "max", "Last grid frequency"},
    {"--grid-count", "grid", "count", "Grid points per axis"},
    {"--units", "grid", "units", "Grid units: gamma or omega_plus"},
    {"--n", "bundle", "n", "Photons per bundle"},
    {"--tau-max", "tau", "tau_max", "Largest delay"},
    {"--tau-count", "tau", "tau_count", "Number of delays"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-resolved photon correlations of resonance fluorescence"};
  app.set_version_flag("--version", MOLLOW_VERSION);
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::vector<std::optional<std::string>> values(std::size(kFlags));
  app.add_option("--config", config_path, "Config file (a manifest also works)");
  for (std::size_t k = 0; k < std::size(kFlags); ++k) {
    app.add_option(kFlags[k].name, values[k], kFlags[k].help);
  }

  const char* commands[][2] = {
      {"spectrum", "Power spectrum, optionally through a sensor"},
      {"g2map", "Two-photon correlation map"},
      {"g2tau", "Delay-resolved g2, unfiltered or filtered"},
      {"bundle", "Cavity g2(0) for the n-photon configuration"},
      {"leapfrog-check", "Check bunching on the central leapfrog line"},
  };
  for (const auto& c : commands) app.add_subcommand(c[0], c[1])->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? mollow::cli::kExitOk : mollow::cli::kExitConfig;
  }

  std::vector<mollow::cli::Setting> overrides;
  overrides.push_back({"run", "command", app.get_subcommands().front()->get_name(), 0});
  for (std::size_t k = 0; k < std::size(kFlags); ++k) {
    if (values[k]) overrides.push_back({kFlags[k].section, kFlags[k].key, *values[k], 0});
  }

  mollow::cli::RunConfig config;
  try {
    config = mollow::cli::load_config(config_path, overrides);
  } catch (const mollow::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mollow::cli::exit_code_for(e.code());
  }
  return mollow::cli::run(config, std::cout, std::cerr);
}
