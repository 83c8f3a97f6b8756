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

// Optical Bloch equations of a driven two-level atom (decay 1), written in
// the real variables u = Re<s>, v = Im<s>, p = <s^+ s> and solved for the
// steady state by Gaussian elimination.
//
//   d<s>/dt = -(i detuning + 1/2)<s> + i (rabi/2)(2p - 1)
//   dp/dt   = i (rabi/2)(<s> - <s>^*) - p

#include <array>
#include <cmath>
#include <utility>

namespace oracle {

struct BlochSteady {
  double u, v, p;
};

inline BlochSteady bloch_steady(double rabi, double detuning) {
  const double h = rabi / 2.0;
  // rows: du/dt, dv/dt, dp/dt = 0
  std::array<std::array<double, 4>, 3> m = {{
      {-0.5, detuning, 0.0, 0.0},
      {-detuning, -0.5, 2.0 * h, h},
      {0.0, -2.0 * h, -1.0, 0.0},
  }};
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    std::swap(m[c], m[piv]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
}

}  // namespace oracle
