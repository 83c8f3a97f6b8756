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

// Numerical convolution of a sampled spectrum with the Lorentzian response of
// a sensor whose occupation decays at rate gamma (half width gamma / 2).

#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

inline double lorentzian(double x, double gamma) {
  const double hw = 0.5 * gamma;
  return hw / std::numbers::pi / (x * x + hw * hw);
}

// xs must be uniformly spaced. A coherent delta at 0 of weight coherent is
// added analytically.
inline std::vector<double> convolve(const std::vector<double>& xs, const std::vector<double>& ys,
                                    double coherent, double gamma,
                                    const std::vector<double>& targets) {
  const double dx = xs[1] - xs[0];
  std::vector<double> out;
  out.reserve(targets.size());
  for (double w : targets) {
    double s = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double edge = (k == 0 || k + 1 == xs.size()) ? 0.5 : 1.0;
      s += edge * ys[k] * lorentzian(w - xs[k], gamma);
    }
    out.push_back(s * dx + coherent * lorentzian(w, gamma));
  }
  return out;
}

}  // namespace oracle
