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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "mollow/cli.hpp"
#include "mollow/kernels.hpp"

#ifndef MOLLOW_VERSION
#define MOLLOW_VERSION "unknown"
#endif

namespace mollow::cli {

namespace {

struct Outcome {
  std::string file;       // data file name inside output_dir
  std::string data;       // its contents
  std::string results;    // extra [results] lines for the manifest
  std::optional<double> omega_plus;
  std::optional<double> epsilon;
  double epsilon_drift_max = 0.0;
  int status = kExitOk;
};

std::string results_line(const char* key, double value) {
  return std::string(key) + " = " + format_double(value) + "\n";
}

std::vector<double> tau_grid(const RunConfig& c) {
  std::vector<double> taus(static_cast<std::size_t>(c.tau_count));
  for (int k = 0; k < c.tau_count; ++k) {
    taus[k] = k + 1 == c.tau_count ? c.tau_max : c.tau_max * k / (c.tau_count - 1);
  }
  return taus;
}

Outcome run_spectrum(const RunConfig& c, std::ostream& out) {
  const auto gamma = c.spectrum_filtered ? c.gamma_filter : std::nullopt;
  const SpectrumSweep sweep = spectrum_sweep(c.physics, c.grid, gamma, c.epsilon);
  Outcome o;
  o.file = "spectrum.csv";
  o.data = render_spectrum(sweep);
  o.omega_plus = sweep.omega_plus;
  if (gamma) {
    const double gammas[] = {*gamma};
    o.epsilon = default_epsilon(gammas, c.epsilon);
  }
  o.results = results_line("coherent_weight", sweep.result.coherent_weight) +
              results_line("incoherent_weight", sweep.result.incoherent_weight);
  out << "spectrum: " << sweep.result.values.size() << " points, coherent weight "
      << format_double(sweep.result.coherent_weight) << "\n";
  return o;
}

Outcome run_g2map(const RunConfig& c, std::ostream& out) {
  const CorrelationMap map = g2_map(c.physics, c.grid, *c.gamma_filter, c.workers, c.epsilon);
  Outcome o;
  o.file = "g2map.csv";
  o.data = render_map(map);
  o.omega_plus = map.omega_plus;
  o.epsilon = map.epsilon;
  o.epsilon_drift_max = map.epsilon_drift_max;
  o.results = "evaluations = " + std::to_string(map.evaluations) + "\n";
  out << "g2map: " << map.grid.count << "x" << map.grid.count << " cells, "
      << map.evaluations << " evaluations, max eps drift "
      << format_double(map.epsilon_drift_max) << "\n";
  return o;
}

Outcome run_g2tau(const RunConfig& c, std::ostream& out) {
  const auto taus = tau_grid(c);
  const LindbladModel model = rf_model(c.physics);
  Outcome o;
  G2TauResult r;
  std::ostringstream csv;
  if (c.omega1) {
    const double omega_plus = dressed_structure(c.physics).splitting;
    const double omegas[] = {c.grid.to_gamma(*c.omega1, omega_plus),
                             c.grid.to_gamma(*c.omega2, omega_plus)};
    const auto specs = make_sensors(omegas, *c.gamma_filter, c.epsilon);
    r = filtered_g2_tau(model, specs[0], specs[1], taus);
    o.omega_plus = omega_plus;
    o.epsilon = specs[0].epsilon;
    csv << "# kind=g2tau\n# filtered=true\n"
        << "# omega1=" << format_double(*c.omega1) << "\n"
        << "# omega2=" << format_double(*c.omega2) << "\n"
        << "# units=" << to_string(c.grid.units) << "\n"
        << "# gamma_filter=" << format_double(*c.gamma_filter) << "\n"
        << "# epsilon=" << format_double(specs[0].epsilon) << "\n";
  } else {
    r = g2_tau_unfiltered(model, taus);
    csv << "# kind=g2tau\n# filtered=false\n";
  }
  csv << "# rabi=" << format_double(c.physics.rabi) << "\n"
      << "# detuning=" << format_double(c.physics.detuning) << "\n"
      << "tau,g2\n";
  for (std::size_t k = 0; k < r.taus.size(); ++k) {
    csv << format_double(r.taus[k]) << "," << format_double(r.values[k]) << "\n";
  }
  o.file = "g2tau.csv";
  o.data = csv.str();
  o.results = results_line("g2_zero", r.values.front()) +
              results_line("tail_deviation", r.tail_deviation());
  out << "g2tau: g2(0) = " << format_double(r.values.front()) << ", tail deviation "
      << format_double(r.tail_deviation()) << "\n";
  return o;
}

Outcome run_bundle(const RunConfig& c, std::ostream& out) {
  const double omega_plus = dressed_structure(c.physics).splitting;
  BundleParams doubled = c.bundle;
  doubled.fock_truncation *= 2;

  std::ostringstream csv;
  csv << "# kind=bundle\n"
      << "# rabi=" << format_double(c.physics.rabi) << "\n"
      << "# detuning=" << format_double(c.physics.detuning) << "\n"
      << "# n=" << c.bundle.n << "\n"
      << "# cavity_coupling=" << format_double(c.bundle.cavity_coupling) << "\n"
      << "# cavity_decay=" << format_double(c.bundle.cavity_decay) << "\n"
      << "# fock_truncation=" << c.bundle.fock_truncation << "\n"
      << "# omega_plus=" << format_double(omega_plus) << "\n"
      << "cavity_frequency,cavity_population,emitter_population,g2_zero,"
         "tail_population,truncation_change\n";

  Outcome o;
  double worst_change = 0.0;
  double g2[2] = {0.0, 0.0};
  const double positions[] = {omega_plus / c.bundle.n, omega_plus};
  for (int k = 0; k < 2; ++k) {
    const BundleReport r = bundle_report(c.physics, c.bundle, positions[k]);
    const BundleReport r2 = bundle_report(c.physics, doubled, positions[k]);
    const double change =
        std::max(std::abs(r2.g2_zero - r.g2_zero) / std::abs(r2.g2_zero),
                 std::abs(r2.cavity_population - r.cavity_population) / r2.cavity_population);
    worst_change = std::max(worst_change, change);
    g2[k] = r.g2_zero;
    csv << format_double(r.cavity_frequency) << "," << format_double(r.cavity_population)
        << "," << format_double(r.emitter_population) << "," << format_double(r.g2_zero)
        << "," << format_double(r.tail_population) << "," << format_double(change) << "\n";
  }
  o.file = "bundle.csv";
  o.data = csv.str();
  o.omega_plus = omega_plus;
  o.results = results_line("g2_zero_bundle", g2[0]) +
              results_line("g2_zero_single", g2[1]) +
              results_line("truncation_change_max", worst_change);
  out << "bundle: g2(0) at Omega_+/" << c.bundle.n << " = " << format_double(g2[0])
      << ", at Omega_+ = " << format_double(g2[1]) << ", truncation change "
      << format_double(worst_change) << "\n";
  return o;
}

Outcome run_leapfrog(const RunConfig& c, std::ostream& out) {
  const LeapfrogCheck check = leapfrog_check(c.physics, *c.gamma_filter, c.epsilon);
  const double omega_plus = check.dressed.splitting;

  out << "Omega_+ = " << format_double(omega_plus) << "\n"
      << "leapfrog sums:";
  for (double s : check.dressed.leapfrog_sums) out << " " << format_double(s);
  out << "\n";

  std::ostringstream csv;
  csv << "# kind=leapfrog\n"
      << "# rabi=" << format_double(c.physics.rabi) << "\n"
      << "# detuning=" << format_double(c.physics.detuning) << "\n"
      << "# gamma_filter=" << format_double(*c.gamma_filter) << "\n"
      << "# omega_plus=" << format_double(omega_plus) << "\n"
      << "# units=gamma\n"
      << "omega1,omega2,g2,epsilon_drift\n";
  Outcome o;
  for (const auto& s : check.samples) {
    csv << format_double(s.omega1) << "," << format_double(s.omega2) << ","
        << format_double(s.g2) << "," << format_double(s.epsilon_drift) << "\n";
    out << "  g2(" << format_double(s.omega1) << ", " << format_double(s.omega2)
        << ") = " << format_double(s.g2) << (s.g2 > 1.0 ? "" : "  NOT BUNCHED") << "\n";
    o.epsilon_drift_max = std::max(o.epsilon_drift_max, s.epsilon_drift);
  }
  const bool ok = check.all_bunched();
  out << (ok ? "all samples bunched\n" : "some samples not bunched\n");
  const double gammas[] = {*c.gamma_filter};
  o.file = "leapfrog.csv";
  o.data = csv.str();
  o.omega_plus = omega_plus;
  o.epsilon = default_epsilon(gammas, c.epsilon);
  o.results = std::string("all_bunched = ") + (ok ? "true" : "false") + "\n";
  o.status = ok ? kExitOk : kExitLeapfrogFailed;
  return o;
}

Outcome dispatch(const RunConfig& c, std::ostream& out) {
  switch (c.command) {
    case Command::kSpectrum:
      return run_spectrum(c, out);
    case Command::kG2Map:
      return run_g2map(c, out);
    case Command::kG2Tau:
      return run_g2tau(c, out);
    case Command::kBundle:
      return run_bundle(c, out);
    case Command::kLeapfrogCheck:
      return run_leapfrog(c, out);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown command");
}

std::string manifest(const RunConfig& c, const Outcome& o, double wall) {
  std::ostringstream m;
  m << render_config(c) << "\n[manifest]\n"
    << "version = " << MOLLOW_VERSION << "\n"
    << "isa = " << kernels::to_string(kernels::active_isa()) << "\n"
    << "data = " << o.file << "\n";
  if (o.omega_plus) m << "omega_plus = " << format_double(*o.omega_plus) << "\n";
  if (o.epsilon) m << "epsilon_used = " << format_double(*o.epsilon) << "\n";
  m << "epsilon_drift_max = " << format_double(o.epsilon_drift_max) << "\n"
    << "wall_time_s = " << format_double(wall) << "\n"
    << "\n[results]\n"
    << o.results;
  return m.str();
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kConfig:
      return kExitConfig;
    case ErrorCode::kIo:
      return kExitIo;
    case ErrorCode::kDegenerateSteadyState:
      return kExitDegenerate;
    case ErrorCode::kEigenDecomposition:
      return kExitEigen;
    case ErrorCode::kZeroPopulation:
    case ErrorCode::kVanishingPopulation:
      return kExitPopulation;
    case ErrorCode::kRegime:
      return kExitRegime;
    case ErrorCode::kDimensionBudget:
      return kExitDimension;
    case ErrorCode::kTruncation:
      return kExitTruncation;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidState:
      return kExitInvalid;
  }
  return kExitInternal;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  try {
    const Outcome o = dispatch(config, out);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::filesystem::create_directories(config.output_dir);
    write_file_atomic(config.output_dir / o.file, o.data);
    write_file_atomic(config.output_dir / "manifest", manifest(config, o, wall));
    return o.status;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error (io): " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace mollow::cli
