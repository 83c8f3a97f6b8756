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

// Frequency-resolved photon correlations from weakly coupled two-level
// "sensors". Each sensor i is a two-level system with
//
//   H_i = omega_i s_i^+ s_i + eps_i (e s_i^+ + e^+ s_i),   decay gamma_i s_i
//
// where e is the model's emission operator. As eps -> 0 the sensor
// population tracks the emission spectrum seen through a Lorentzian filter
// of FWHM gamma_i, and normalized cross-moments of sensor populations give
// the filtered correlation functions. Results carry an eps-drift estimate so
// callers can see how far from the eps -> 0 limit they are.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mollow/dynamics.hpp"
#include "mollow/ops.hpp"

namespace mollow {

inline constexpr int kMaxSensors = 3;
inline constexpr int kMaxAttachedDim = 64;
inline constexpr double kVanishingPopulation = 1e-18;

struct SensorSpec {
  double omega = 0.0;
  double gamma_filter = 1.0;
  double epsilon = 1e-3;

  auto operator<=>(const SensorSpec&) const = default;
};

// Coupling policy. Rates are in units of the emitter decay (gamma = 1).
struct EpsilonPolicy {
  double factor = 1e-3;      // default eps = factor * min(1, gammas...)
  double max_factor = 1e-2;  // eps_max = max_factor * min(1, gammas...)
  int max_halvings = 3;
  double drift_tolerance = 0.01;
  bool check = true;
};

double default_epsilon(std::span<const double> gamma_filters,
                       const EpsilonPolicy& policy = {});
double epsilon_max(std::span<const double> gamma_filters,
                   const EpsilonPolicy& policy = {});

// Sensors at the given frequencies sharing one linewidth and the policy's
// default coupling.
std::vector<SensorSpec> make_sensors(std::span<const double> omegas,
                                     double gamma_filter,
                                     const EpsilonPolicy& policy = {});

std::string sensor_label(int index);

LindbladModel attach_sensors(const LindbladModel& model,
                             std::span<const SensorSpec> specs);

// Grading that scales sensor i by eps_i (see Grading).
Grading sensor_grading(const SpaceLayout& attached,
                       std::span<const SensorSpec> specs);

// Steady-state sensor populations <s_i^+ s_i>, in the order given.
std::vector<double> sensor_populations(const LindbladModel& model,
                                       std::span<const SensorSpec> specs);

SpectrumResult filtered_spectrum(const LindbladModel& model,
                                 double gamma_filter,
                                 std::span<const double> grid,
                                 const EpsilonPolicy& policy = {});

struct FilteredG2 {
  SensorSpec sensor1;
  SensorSpec sensor2;
  double value = 0.0;
  // Relative change of value between the last two couplings tried.
  std::optional<double> epsilon_drift;
  double epsilon_scale = 1.0;  // final eps / requested eps
};

// Zero-delay g2 at (omega1, omega2). With policy.check the value is
// recomputed at eps/2, and halved further (at most max_halvings times) while
// the drift exceeds drift_tolerance; the last value is returned.
FilteredG2 filtered_g2(const LindbladModel& model, const SensorSpec& s1,
                       const SensorSpec& s2, const EpsilonPolicy& policy = {});

// Tr[n2 e^{L tau}(s1 rho s1^+)] / (<n1><n2>), sensor 1 detected first. Uses
// the couplings in the specs as given.
G2TauResult filtered_g2_tau(const LindbladModel& model, const SensorSpec& s1,
                            const SensorSpec& s2, std::span<const double> taus);

struct FilteredGn {
  std::vector<SensorSpec> sensors;
  double value = 0.0;
  std::optional<double> epsilon_drift;
  double epsilon_scale = 1.0;
};

// <prod n_i> / prod <n_i> at zero delay for up to kMaxSensors sensors.
FilteredGn filtered_gn(const LindbladModel& model,
                       std::span<const SensorSpec> specs,
                       const EpsilonPolicy& policy = {});

}  // namespace mollow
