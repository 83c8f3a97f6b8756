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

#include <array>
#include <optional>

#include "mollow/dynamics.hpp"
#include "mollow/ops.hpp"

namespace mollow {

inline constexpr const char* kEmitterLabel = "2LS";
inline constexpr const char* kCavityLabel = "cavity";

// Coherently driven two-level system, frequencies in the laser frame and in
// units of the emitter decay rate.
struct RFParams {
  double rabi = 20.0;
  double detuning = 0.0;
};

// H = detuning s^+ s + (rabi/2)(s + s^+), decay 1 * s, emission s.
LindbladModel rf_model(const RFParams& p);

struct DressedStructure {
  double splitting = 0.0;                // Omega_+
  std::array<double, 3> line_positions{};  // {-Omega_+, 0, +Omega_+}
  std::array<double, 3> leapfrog_sums{};   // omega1 + omega2 values
};

// Omega_+ is the largest |Im lambda| among the Liouvillian eigenvalues of
// rf_model(p). Throws kRegime when the spectrum is overdamped (all real).
DressedStructure dressed_structure(const RFParams& p);

// The antidiagonal omega1 + omega2 = sum.
struct LeapfrogLine {
  double sum = 0.0;

  double partner(double omega1) const { return sum - omega1; }
  double distance(double omega1, double omega2) const;
};

std::array<LeapfrogLine, 3> leapfrog_lines(const RFParams& p);

struct BundleParams {
  int n = 2;
  double cavity_coupling = 0.05;
  double cavity_decay = 0.1;
  int fock_truncation = 6;
};

// Emitter coupled to a cavity mode at cavity_frequency:
//   H = H_rf + cavity_frequency a^+ a + g (s a^+ + s^+ a),
//   collapses (1, s) and (kappa, a), emission a.
LindbladModel cavity_model(const RFParams& p, const BundleParams& b,
                           double cavity_frequency);

// cavity_model with the cavity at +Omega_+ / n.
LindbladModel bundle_model(const RFParams& p, const BundleParams& b);

inline constexpr double kTruncationTailLimit = 1e-6;

struct BundleReport {
  double cavity_frequency = 0.0;
  double cavity_population = 0.0;
  double emitter_population = 0.0;
  double g2_zero = 0.0;
  double tail_population = 0.0;  // occupation of the top Fock level
};

// Steady-state cavity observables; throws kTruncation when the top Fock level
// holds kTruncationTailLimit or more. A cavity_frequency of nullopt means
// Omega_+/n.
BundleReport bundle_report(const RFParams& p, const BundleParams& b,
                           std::optional<double> cavity_frequency = {});

}  // namespace mollow
