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

#include "mollow/kernels.hpp"

#include <numbers>

namespace mollow::kernels::scalar {

void cmatvec(const Complex* a, std::size_t n, const Complex* x, Complex* y) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  for (std::size_t i = 0; i < 2 * n; ++i) yd[i] = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double xr = xd[2 * j];
    const double xi = xd[2 * j + 1];
    const double* col = ad + 2 * n * j;
    for (std::size_t i = 0; i < n; ++i) {
      const double ar = col[2 * i];
      const double ai = col[2 * i + 1];
      yd[2 * i] += ar * xr - ai * xi;
      yd[2 * i + 1] += ai * xr + ar * xi;
    }
  }
}

void caxpy(Complex alpha, const Complex* x, Complex* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const double br = alpha.real();
  const double bi = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xd[2 * i];
    const double xi = xd[2 * i + 1];
    yd[2 * i] += xr * br - xi * bi;
    yd[2 * i + 1] += xi * br + xr * bi;
  }
}

void lorentzian_sum(const Complex* poles, const Complex* weights,
                    std::size_t n_poles, const double* omegas, double* out,
                    std::size_t n_omegas) {
  for (std::size_t j = 0; j < n_omegas; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n_poles; ++k) {
      const double a = poles[k].real();
      const double t = poles[k].imag() + omegas[j];
      const double num = weights[k].real() * a + weights[k].imag() * t;
      acc -= num / (a * a + t * t);
    }
    out[j] = acc * std::numbers::inv_pi;
  }
}

}  // namespace mollow::kernels::scalar
