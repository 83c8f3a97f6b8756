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

// Small dense complex matrices on std::vector, independent of Eigen.

#include <complex>
#include <cstddef>
#include <vector>

namespace oracle {

using C = std::complex<double>;

struct CMat {
  int n = 0;
  std::vector<C> a;  // row-major

  explicit CMat(int dim = 0) : n(dim), a(static_cast<std::size_t>(dim) * dim) {}
  C& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  C operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  template <class M>
  static CMat from(const M& m) {
    CMat r(static_cast<int>(m.rows()));
    for (int i = 0; i < r.n; ++i)
      for (int j = 0; j < r.n; ++j) r(i, j) = m(i, j);
    return r;
  }
};

inline CMat mul(const CMat& x, const CMat& y) {
  CMat r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const C xik = x(i, k);
      if (xik == C{}) continue;
      for (int j = 0; j < x.n; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

inline CMat adj(const CMat& x) {
  CMat r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) r(i, j) = std::conj(x(j, i));
  return r;
}

inline CMat add(const CMat& x, const CMat& y, C s = 1.0) {
  CMat r = x;
  for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] += s * y.a[k];
  return r;
}

inline C trace(const CMat& x) {
  C t{};
  for (int i = 0; i < x.n; ++i) t += x(i, i);
  return t;
}

inline std::vector<C> matvec(const CMat& m, const std::vector<C>& v) {
  std::vector<C> r(v.size());
  for (int i = 0; i < m.n; ++i) {
    C s{};
    for (int j = 0; j < m.n; ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

// Hand-rolled Kronecker product, first factor most significant.
inline CMat kron(const CMat& x, const CMat& y) {
  CMat r(x.n * y.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j)
      for (int k = 0; k < y.n; ++k)
        for (int l = 0; l < y.n; ++l) r(i * y.n + k, j * y.n + l) = x(i, j) * y(k, l);
  return r;
}

}  // namespace oracle
