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

#include <vector>

#include "mollow/ops.hpp"
#include "oracles/dense.hpp"
#include "oracles/generator.hpp"

namespace testing {

// Bosonic mode with incoherent pump (pump a^+) and decay (1 a).
inline mollow::LindbladModel thermal_mode(int dim, double pump) {
  const mollow::SpaceLayout layout({{"mode", dim}});
  const mollow::Operator a(layout, mollow::local::annihilation(dim));
  return mollow::LindbladModel(mollow::Operator::zero(layout), {{1.0, a}, {pump, a.adjoint()}}, a);
}

inline std::vector<oracle::Jump> jumps_of(const mollow::LindbladModel& m) {
  std::vector<oracle::Jump> out;
  for (const auto& c : m.collapses()) out.push_back({c.rate, oracle::CMat::from(c.op.matrix())});
  return out;
}

// Indices of strict interior local maxima.
inline std::vector<int> local_maxima(const std::vector<double>& y) {
  std::vector<int> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] > y[i + 1]) out.push_back(static_cast<int>(i));
  }
  return out;
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = i + 1 == n ? b : a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace testing
