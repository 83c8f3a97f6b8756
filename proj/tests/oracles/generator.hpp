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

// Lindblad generator evaluated on a density matrix, and a fixed-step RK4
// integrator of drho/dt = that generator.

#include <utility>
#include <vector>

#include "dense.hpp"

namespace oracle {

struct Jump {
  double rate;
  CMat c;
};

// -i[H, rho] + sum r (c rho c^+ - {c^+ c, rho}/2)
inline CMat lindblad_rhs(const CMat& h, const std::vector<Jump>& jumps, const CMat& rho) {
  const C i{0.0, 1.0};
  CMat out = add(mul(h, rho), mul(rho, h), -1.0);
  for (auto& x : out.a) x *= -i;
  for (const auto& j : jumps) {
    const CMat cd = adj(j.c);
    const CMat cdc = mul(cd, j.c);
    const CMat term = add(mul(mul(j.c, rho), cd),
                          add(mul(cdc, rho), mul(rho, cdc)), -0.5);
    out = add(out, term, j.rate);
  }
  return out;
}

// rho(t) at each requested (ascending) time from rho(0), step dt.
inline std::vector<CMat> rk4(const CMat& h, const std::vector<Jump>& jumps, CMat rho,
                             const std::vector<double>& times, double dt) {
  std::vector<CMat> out;
  double t = 0.0;
  for (double target : times) {
    while (t < target - 1e-12) {
      const double step = std::min(dt, target - t);
      const CMat k1 = lindblad_rhs(h, jumps, rho);
      const CMat k2 = lindblad_rhs(h, jumps, add(rho, k1, 0.5 * step));
      const CMat k3 = lindblad_rhs(h, jumps, add(rho, k2, 0.5 * step));
      const CMat k4 = lindblad_rhs(h, jumps, add(rho, k3, step));
      for (std::size_t k = 0; k < rho.a.size(); ++k) {
        rho.a[k] += step / 6.0 * (k1.a[k] + 2.0 * k2.a[k] + 2.0 * k3.a[k] + k4.a[k]);
      }
      t += step;
    }
    out.push_back(rho);
  }
  return out;
}

}  // namespace oracle
