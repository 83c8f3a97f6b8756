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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "mollow/cli.hpp"
#include "support.hpp"

using namespace mollow;
using namespace mollow::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const char* name) {
  const auto d = fs::temp_directory_path() / ("mollow_cli_" + std::string(name));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_binary(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string(MOLLOW_BINARY) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool has_issue(const ConfigError& e, const std::string& section, const std::string& key) {
  for (const auto& i : e.issues())
    if (i.section == section && i.key == key) return true;
  return false;
}

}  // namespace

TEST_CASE("default figure fixture") {
  const auto c = load_config(fs::path(MOLLOW_TEST_DATA) / "default_figure.conf");
  CHECK(c.command == Command::kG2Map);
  CHECK(c.physics.rabi == 20.0);
  CHECK(c.physics.detuning == 0.0);
  CHECK(c.gamma_filter == 0.5);
  CHECK(c.grid.min == -1.5);
  CHECK(c.grid.max == 1.5);
  CHECK(c.grid.count == 101);
  CHECK(c.grid.units == FrequencyUnits::kOmegaPlus);
  CHECK(c.workers == 0);
  const EpsilonPolicy defaults;
  CHECK(c.epsilon.factor == defaults.factor);
  CHECK(c.epsilon.max_halvings == defaults.max_halvings);
  CHECK(c.bundle.n == 2);
}

TEST_CASE("missing rabi names the key") {
  try {
    parse_config("[run]\ncommand = spectrum\n");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(has_issue(e, "physics", "rabi"));
    CHECK(std::string(e.what()).find("rabi") != std::string::npos);
    CHECK(e.code() == ErrorCode::kConfig);
  }
}

TEST_CASE("flags override file values") {
  const std::string text = "[physics]\nrabi = 20\n[filter]\ngamma_filter = 2\n";
  const auto c = parse_config(text, {{"filter", "gamma_filter", "0.5", 0}});
  CHECK(c.gamma_filter == 0.5);
}

TEST_CASE("every problem is reported with its line") {
  const std::string text =
      "[physics]\n"
      "rabi = twenty\n"
      "colour = red\n"
      "[grid]\n"
      "count = 1\n"
      "count = 2\n"
      "orphan line\n";
  try {
    parse_config(text);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    std::set<int> lines;
    for (const auto& i : e.issues()) lines.insert(i.line);
    CHECK(lines.count(2) == 1);  // bad number
    CHECK(lines.count(3) == 1);  // unknown key
    CHECK(lines.count(6) == 1);  // duplicate
    CHECK(lines.count(7) == 1);  // no '='
    CHECK(has_issue(e, "physics", "colour"));
  }
}

TEST_CASE("cross-field checks") {
  CHECK_THROWS_AS(parse_config("[run]\ncommand = g2map\n[physics]\nrabi = 20\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[physics]\nrabi = 20\n[grid]\nmin = 2\nmax = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[physics]\nrabi = 20\n[bundle]\nfock_truncation = 4\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[physics]\nrabi = 20\n[grid]\nunits = hz\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[run]\ncommand = g2tau\n[physics]\nrabi = 20\n"
                               "[filter]\ngamma_filter = 1\n[sensors]\nomega1 = 1\n"),
                  ConfigError);
}

TEST_CASE("rendered config parses back to itself") {
  auto c = load_config(fs::path(MOLLOW_TEST_DATA) / "default_figure.conf");
  c.omega1 = 0.5;
  c.omega2 = -0.5;
  c.epsilon.drift_tolerance = 0.02;
  const std::string text = render_config(c);
  CHECK(render_config(parse_config(text)) == text);
  // Output-only sections are skipped.
  CHECK(render_config(parse_config(text + "\n[manifest]\nversion = 9\n[results]\nx = 1\n")) ==
        text);
}

TEST_CASE("exit codes are distinct") {
  std::set<int> codes;
  for (auto c : {ErrorCode::kInvalidArgument, ErrorCode::kDegenerateSteadyState,
                 ErrorCode::kEigenDecomposition, ErrorCode::kZeroPopulation,
                 ErrorCode::kRegime, ErrorCode::kDimensionBudget, ErrorCode::kTruncation,
                 ErrorCode::kIo, ErrorCode::kConfig}) {
    codes.insert(exit_code_for(c));
  }
  CHECK(codes.size() == 9);
  CHECK(codes.count(kExitOk) == 0);
  CHECK(codes.count(kExitLeapfrogFailed) == 0);
}

TEST_CASE("leapfrog-check reports sums and samples") {
  const auto dir = scratch_dir("leapfrog");
  auto c = parse_config("[run]\ncommand = leapfrog-check\n[physics]\nrabi = 20\n"
                        "[filter]\ngamma_filter = 0.5\n");
  c.output_dir = dir;
  std::ostringstream out, err;
  CHECK(run(c, out, err) == kExitOk);
  const std::string text = out.str();
  CHECK(text.find("leapfrog sums: -19.99843") != std::string::npos);
  CHECK(text.find("all samples bunched") != std::string::npos);
  const auto t = read_csv(dir / "leapfrog.csv");
  CHECK(t.rows.size() == std::size(kLeapfrogSampleOffsets));
  for (const auto& row : t.rows) CHECK(row[2] > 1.0);
  CHECK(fs::exists(dir / "manifest"));
}

TEST_CASE("spectrum on defaults has three peaks") {
  const auto dir = scratch_dir("spectrum");
  auto c = parse_config("[physics]\nrabi = 20\n");
  c.output_dir = dir;
  std::ostringstream out, err;
  REQUIRE(run(c, out, err) == kExitOk);
  const auto t = read_csv(dir / "spectrum.csv");
  REQUIRE(t.rows.size() == 801);
  std::vector<double> s;
  for (const auto& row : t.rows) s.push_back(row[1]);
  CHECK(testing::local_maxima(s).size() == 3);
}

TEST_CASE("manifest replays as a config") {
  const auto dir = scratch_dir("replay");
  auto c = parse_config("[run]\ncommand = g2map\n[physics]\nrabi = 20\n"
                        "[filter]\ngamma_filter = 0.5\n[grid]\ncount = 4\n");
  c.output_dir = dir / "a";
  std::ostringstream out, err;
  REQUIRE(run(c, out, err) == kExitOk);
  const std::string manifest = slurp(dir / "a" / "manifest");
  CHECK(manifest.find("version = ") != std::string::npos);
  CHECK(manifest.find("omega_plus = ") != std::string::npos);
  CHECK(manifest.find("epsilon_used = ") != std::string::npos);
  CHECK(manifest.find("epsilon_drift_max = ") != std::string::npos);
  CHECK(manifest.find("wall_time_s = ") != std::string::npos);

  auto replay = parse_config(manifest);
  replay.output_dir = dir / "b";
  REQUIRE(run(replay, out, err) == kExitOk);
  CHECK(slurp(dir / "a" / "g2map.csv") == slurp(dir / "b" / "g2map.csv"));

  // Rerunning overwrites with identical data.
  REQUIRE(run(c, out, err) == kExitOk);
  CHECK(slurp(dir / "a" / "g2map.csv") == slurp(dir / "b" / "g2map.csv"));
}

TEST_CASE("bundle and g2tau commands") {
  const auto dir = scratch_dir("commands");
  auto c = parse_config("[run]\ncommand = bundle\n[physics]\nrabi = 20\n");
  c.output_dir = dir;
  std::ostringstream out, err;
  REQUIRE(run(c, out, err) == kExitOk);
  const auto b = read_csv(dir / "bundle.csv");
  REQUIRE(b.rows.size() == 2);
  CHECK(b.rows[0][3] > b.rows[1][3]);
  CHECK(b.rows[0][5] < 1e-3);
  CHECK(b.rows[1][5] < 1e-3);

  c = parse_config("[run]\ncommand = g2tau\n[physics]\nrabi = 5\n[tau]\ntau_count = 11\n");
  c.output_dir = dir;
  REQUIRE(run(c, out, err) == kExitOk);
  const auto g = read_csv(dir / "g2tau.csv");
  CHECK(g.columns == std::vector<std::string>{"tau", "g2"});
  REQUIRE(g.rows.size() == 11);
  CHECK(g.rows[0][1] < 1e-10);

  c = parse_config("[run]\ncommand = g2tau\n[physics]\nrabi = 20\n[filter]\ngamma_filter = 0.5\n"
                   "[sensors]\nomega1 = 1\nomega2 = -1\n[tau]\ntau_count = 5\n");
  c.output_dir = dir;
  REQUIRE(run(c, out, err) == kExitOk);
  CHECK(read_csv(dir / "g2tau.csv").meta("filtered") == "true");
}

TEST_CASE("failures leave no output behind") {
  const auto dir = scratch_dir("fail");
  auto c = parse_config("[run]\ncommand = g2map\n[physics]\nrabi = 0.1\n"
                        "[filter]\ngamma_filter = 0.5\n[grid]\ncount = 3\n");
  c.output_dir = dir / "out";
  std::ostringstream out, err;
  CHECK(run(c, out, err) == kExitRegime);
  CHECK(err.str().find("error") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("command-line binary") {
  const auto dir = scratch_dir("binary");
  const auto log = dir / "log.txt";

  CHECK(run_binary("leapfrog-check --rabi 20 --gamma-filter 0.5 --out " + (dir / "ok").string(),
                   log) == kExitOk);
  CHECK(slurp(log).find("leapfrog sums") != std::string::npos);

  // Invalid config: nonzero exit, nothing written.
  CHECK(run_binary("g2map --rabi 20 --grid-count 1 --out " + (dir / "bad").string(), log) ==
        kExitConfig);
  CHECK_FALSE(fs::exists(dir / "bad"));
  CHECK(run_binary("spectrum --out " + (dir / "norabi").string(), log) == kExitConfig);
  CHECK(slurp(log).find("rabi") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "norabi"));

  // File value overridden by a flag.
  {
    std::ofstream f(dir / "c.conf");
    f << "[run]\ncommand = g2map\n[physics]\nrabi = 20\n[filter]\ngamma_filter = 3\n"
         "[grid]\ncount = 3\n";
  }
  REQUIRE(run_binary("g2map --config " + (dir / "c.conf").string() +
                         " --gamma-filter 0.5 --out " + (dir / "flag").string(),
                     log) == kExitOk);
  CHECK(read_csv(dir / "flag" / "g2map.csv").meta("gamma_filter") == "0.5");
  CHECK(slurp(dir / "flag" / "g2map.csv") ==
        slurp(fs::path(MOLLOW_TEST_DATA) / "golden" / "map3x3.csv"));
}
