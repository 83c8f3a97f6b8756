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

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mollow/cli.hpp"

namespace mollow::cli {

namespace {

std::string describe(const std::vector<ConfigIssue>& issues) {
  std::ostringstream msg;
  msg << issues.size() << " configuration error(s):";
  for (const auto& i : issues) {
    msg << "\n  ";
    if (i.line > 0) msg << "line " << i.line << ": ";
    if (!i.section.empty()) msg << "[" << i.section << "] ";
    if (!i.key.empty()) msg << i.key << ": ";
    msg << i.message;
  }
  return msg.str();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::optional<int> to_int(const std::string& s) {
  int v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<bool> to_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  return std::nullopt;
}

using Handler = std::function<std::optional<std::string>(RunConfig&, const std::string&)>;

Handler real(double RunConfig::*field) {
  return [field](RunConfig& c, const std::string& v) -> std::optional<std::string> {
    const auto x = to_double(v);
    if (!x) return "expected a finite number, got '" + v + "'";
    c.*field = *x;
    return std::nullopt;
  };
}

template <class Getter>
Handler real_at(Getter getter) {
  return [getter](RunConfig& c, const std::string& v) -> std::optional<std::string> {
    const auto x = to_double(v);
    if (!x) return "expected a finite number, got '" + v + "'";
    getter(c) = *x;
    return std::nullopt;
  };
}

template <class Getter>
Handler integer_at(Getter getter) {
  return [getter](RunConfig& c, const std::string& v) -> std::optional<std::string> {
    const auto x = to_int(v);
    if (!x) return "expected an integer, got '" + v + "'";
    getter(c) = *x;
    return std::nullopt;
  };
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"run.command",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         const auto cmd = parse_command(v);
         if (!cmd) return "unknown command '" + v + "'";
         c.command = *cmd;
         return std::nullopt;
       }},
      {"run.output_dir",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         if (v.empty()) return "must not be empty";
         c.output_dir = v;
         return std::nullopt;
       }},
      {"run.workers", integer_at([](RunConfig& c) -> int& { return c.workers; })},
      {"physics.rabi", real_at([](RunConfig& c) -> double& { return c.physics.rabi; })},
      {"physics.detuning",
       real_at([](RunConfig& c) -> double& { return c.physics.detuning; })},
      {"grid.min", real_at([](RunConfig& c) -> double& { return c.grid.min; })},
      {"grid.max", real_at([](RunConfig& c) -> double& { return c.grid.max; })},
      {"grid.count", integer_at([](RunConfig& c) -> int& { return c.grid.count; })},
      {"grid.units",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         if (v == "gamma") {
           c.grid.units = FrequencyUnits::kGamma;
         } else if (v == "omega_plus") {
           c.grid.units = FrequencyUnits::kOmegaPlus;
         } else {
           return "expected gamma or omega_plus, got '" + v + "'";
         }
         return std::nullopt;
       }},
      {"filter.gamma_filter",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         const auto x = to_double(v);
         if (!x) return "expected a finite number, got '" + v + "'";
         c.gamma_filter = *x;
         return std::nullopt;
       }},
      {"spectrum.filtered",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         const auto b = to_bool(v);
         if (!b) return "expected true or false, got '" + v + "'";
         c.spectrum_filtered = *b;
         return std::nullopt;
       }},
      {"tau.tau_max", real(&RunConfig::tau_max)},
      {"tau.tau_count", integer_at([](RunConfig& c) -> int& { return c.tau_count; })},
      {"sensors.omega1",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         const auto x = to_double(v);
         if (!x) return "expected a finite number, got '" + v + "'";
         c.omega1 = *x;
         return std::nullopt;
       }},
      {"sensors.omega2",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         const auto x = to_double(v);
         if (!x) return "expected a finite number, got '" + v + "'";
         c.omega2 = *x;
         return std::nullopt;
       }},
      {"bundle.n", integer_at([](RunConfig& c) -> int& { return c.bundle.n; })},
      {"bundle.cavity_coupling",
       real_at([](RunConfig& c) -> double& { return c.bundle.cavity_coupling; })},
      {"bundle.cavity_decay",
       real_at([](RunConfig& c) -> double& { return c.bundle.cavity_decay; })},
      {"bundle.fock_truncation",
       integer_at([](RunConfig& c) -> int& { return c.bundle.fock_truncation; })},
      {"epsilon.factor", real_at([](RunConfig& c) -> double& { return c.epsilon.factor; })},
      {"epsilon.max_factor",
       real_at([](RunConfig& c) -> double& { return c.epsilon.max_factor; })},
      {"epsilon.max_halvings",
       integer_at([](RunConfig& c) -> int& { return c.epsilon.max_halvings; })},
      {"epsilon.drift_tolerance",
       real_at([](RunConfig& c) -> double& { return c.epsilon.drift_tolerance; })},
      {"epsilon.check",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         const auto b = to_bool(v);
         if (!b) return "expected true or false, got '" + v + "'";
         c.epsilon.check = *b;
         return std::nullopt;
       }},
  };
  return table;
}

bool output_only(const std::string& section) {
  return section == "manifest" || section == "results";
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(ErrorCode::kConfig, describe(issues)), issues_(std::move(issues)) {}

const char* to_string(Command command) noexcept {
  switch (command) {
    case Command::kSpectrum:
      return "spectrum";
    case Command::kG2Map:
      return "g2map";
    case Command::kG2Tau:
      return "g2tau";
    case Command::kBundle:
      return "bundle";
    case Command::kLeapfrogCheck:
      return "leapfrog-check";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view text) {
  for (auto c : {Command::kSpectrum, Command::kG2Map, Command::kG2Tau,
                 Command::kBundle, Command::kLeapfrogCheck}) {
    if (text == to_string(c)) return c;
  }
  return std::nullopt;
}

RunConfig parse_config(std::string_view text,
                       const std::vector<Setting>& overrides) {
  std::vector<ConfigIssue> issues;
  std::map<std::pair<std::string, std::string>, Setting> settings;

  std::string section;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back({"", "", line_no, "malformed section header '" + line + "'"});
        continue;
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back({section, "", line_no, "expected key = value, got '" + line + "'"});
      continue;
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (section.empty()) {
      issues.push_back({"", key, line_no, "key outside of any [section]"});
      continue;
    }
    if (output_only(section)) continue;
    auto [it, inserted] = settings.try_emplace({section, key}, Setting{section, key, value, line_no});
    if (!inserted) {
      issues.push_back({section, key, line_no,
                        "duplicate key (first set on line " + std::to_string(it->second.line) + ")"});
    }
  }
  for (const auto& o : overrides) settings[{o.section, o.key}] = o;

  RunConfig config;
  const auto& table = handlers();
  for (const auto& [id, s] : settings) {
    const auto h = table.find(s.section + "." + s.key);
    if (h == table.end()) {
      issues.push_back({s.section, s.key, s.line, "unknown key"});
      continue;
    }
    if (auto problem = h->second(config, s.value)) {
      issues.push_back({s.section, s.key, s.line, *problem});
    }
  }

  auto line_of = [&](const char* sec, const char* key) {
    const auto it = settings.find({sec, key});
    return it == settings.end() ? 0 : it->second.line;
  };
  auto check = [&](bool ok, const char* sec, const char* key, std::string msg) {
    if (!ok) issues.push_back({sec, key, line_of(sec, key), std::move(msg)});
  };

  check(settings.count({"physics", "rabi"}) > 0, "physics", "rabi",
        "required key is missing");
  check(config.physics.rabi > 0.0, "physics", "rabi", "must be > 0");
  check(config.grid.count >= 2 && config.grid.count <= 100001, "grid", "count",
        "must be in [2, 100001]");
  check(config.grid.min < config.grid.max, "grid", "max", "must exceed grid.min");
  if (config.gamma_filter) {
    check(*config.gamma_filter > 0.0, "filter", "gamma_filter", "must be > 0");
  }
  check(config.tau_max > 0.0, "tau", "tau_max", "must be > 0");
  check(config.tau_count >= 2, "tau", "tau_count", "must be >= 2");
  check(config.workers >= 0, "run", "workers", "must be >= 0");
  check(config.bundle.n >= 2, "bundle", "n", "must be >= 2");
  check(config.bundle.cavity_coupling >= 0.0, "bundle", "cavity_coupling", "must be >= 0");
  check(config.bundle.cavity_decay > 0.0, "bundle", "cavity_decay", "must be > 0");
  // The run also solves at twice the truncation.
  check(config.bundle.fock_truncation >= 2 * config.bundle.n + 2 &&
            4 * config.bundle.fock_truncation <= kMaxAttachedDim,
        "bundle", "fock_truncation",
        "must be in [2n+2, " + std::to_string(kMaxAttachedDim / 4) + "]");
  check(config.epsilon.factor > 0.0, "epsilon", "factor", "must be > 0");
  check(config.epsilon.max_factor >= config.epsilon.factor, "epsilon", "max_factor",
        "must be >= epsilon.factor");
  check(config.epsilon.max_halvings >= 0 && config.epsilon.max_halvings <= 10, "epsilon",
        "max_halvings", "must be in [0, 10]");
  check(config.epsilon.drift_tolerance > 0.0, "epsilon", "drift_tolerance", "must be > 0");

  const bool needs_filter = config.command == Command::kG2Map ||
                            config.command == Command::kLeapfrogCheck ||
                            (config.command == Command::kSpectrum && config.spectrum_filtered) ||
                            (config.command == Command::kG2Tau && (config.omega1 || config.omega2));
  check(!needs_filter || config.gamma_filter.has_value(), "filter", "gamma_filter",
        std::string("required for command ") + to_string(config.command));
  if (config.command == Command::kG2Tau) {
    check(config.omega1.has_value() == config.omega2.has_value(), "sensors", "omega2",
          "set both sensors.omega1 and sensors.omega2 or neither");
  }

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return config;
}

RunConfig load_config(const std::optional<std::filesystem::path>& file,
                      const std::vector<Setting>& overrides) {
  std::string text;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw Error(ErrorCode::kIo, "cannot read config '" + file->string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  return parse_config(text, overrides);
}

std::string render_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[run]\n"
      << "command = " << to_string(c.command) << "\n"
      << "output_dir = " << c.output_dir.string() << "\n"
      << "workers = " << c.workers << "\n\n"
      << "[physics]\n"
      << "rabi = " << format_double(c.physics.rabi) << "\n"
      << "detuning = " << format_double(c.physics.detuning) << "\n\n"
      << "[grid]\n"
      << "min = " << format_double(c.grid.min) << "\n"
      << "max = " << format_double(c.grid.max) << "\n"
      << "count = " << c.grid.count << "\n"
      << "units = " << to_string(c.grid.units) << "\n\n";
  if (c.gamma_filter) {
    out << "[filter]\n"
        << "gamma_filter = " << format_double(*c.gamma_filter) << "\n\n";
  }
  out << "[spectrum]\n"
      << "filtered = " << (c.spectrum_filtered ? "true" : "false") << "\n\n"
      << "[tau]\n"
      << "tau_max = " << format_double(c.tau_max) << "\n"
      << "tau_count = " << c.tau_count << "\n\n";
  if (c.omega1 || c.omega2) {
    out << "[sensors]\n";
    if (c.omega1) out << "omega1 = " << format_double(*c.omega1) << "\n";
    if (c.omega2) out << "omega2 = " << format_double(*c.omega2) << "\n";
    out << "\n";
  }
  out << "[bundle]\n"
      << "n = " << c.bundle.n << "\n"
      << "cavity_coupling = " << format_double(c.bundle.cavity_coupling) << "\n"
      << "cavity_decay = " << format_double(c.bundle.cavity_decay) << "\n"
      << "fock_truncation = " << c.bundle.fock_truncation << "\n\n"
      << "[epsilon]\n"
      << "factor = " << format_double(c.epsilon.factor) << "\n"
      << "max_factor = " << format_double(c.epsilon.max_factor) << "\n"
      << "max_halvings = " << c.epsilon.max_halvings << "\n"
      << "drift_tolerance = " << format_double(c.epsilon.drift_tolerance) << "\n"
      << "check = " << (c.epsilon.check ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace mollow::cli
