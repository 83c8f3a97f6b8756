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

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <numbers>

#define MOLLOW_AVX2 __attribute__((target("avx2,fma")))

namespace mollow::kernels::avx2 {

namespace {

// (a0, a1) * (x, x) for two interleaved complex lanes.
MOLLOW_AVX2 inline __m256d cmul_broadcast(__m256d a, __m256d xr, __m256d xi) {
  const __m256d swapped = _mm256_permute_pd(a, 0b0101);
  return _mm256_fmaddsub_pd(a, xr, _mm256_mul_pd(swapped, xi));
}

}  // namespace

MOLLOW_AVX2 void cmatvec(const Complex* a, std::size_t n, const Complex* x,
                         Complex* y) {
  const double* ad = reinterpret_cast<const double*>(a);
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);

  // Row blocks of 8 complex entries keep four accumulators in registers while
  // walking the columns.
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();
    for (std::size_t j = 0; j < n; ++j) {
      const __m256d xr = _mm256_set1_pd(xd[2 * j]);
      const __m256d xi = _mm256_set1_pd(xd[2 * j + 1]);
      const double* col = ad + 2 * (n * j + i);
      acc0 = _mm256_add_pd(acc0, cmul_broadcast(_mm256_loadu_pd(col), xr, xi));
      acc1 = _mm256_add_pd(acc1, cmul_broadcast(_mm256_loadu_pd(col + 4), xr, xi));
      acc2 = _mm256_add_pd(acc2, cmul_broadcast(_mm256_loadu_pd(col + 8), xr, xi));
      acc3 = _mm256_add_pd(acc3, cmul_broadcast(_mm256_loadu_pd(col + 12), xr, xi));
    }
    _mm256_storeu_pd(yd + 2 * i, acc0);
    _mm256_storeu_pd(yd + 2 * i + 4, acc1);
    _mm256_storeu_pd(yd + 2 * i + 8, acc2);
    _mm256_storeu_pd(yd + 2 * i + 12, acc3);
  }
  for (; i + 2 <= n; i += 2) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < n; ++j) {
      const __m256d xr = _mm256_set1_pd(xd[2 * j]);
      const __m256d xi = _mm256_set1_pd(xd[2 * j + 1]);
      acc = _mm256_add_pd(
          acc, cmul_broadcast(_mm256_loadu_pd(ad + 2 * (n * j + i)), xr, xi));
    }
    _mm256_storeu_pd(yd + 2 * i, acc);
  }
  for (; i < n; ++i) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ar = ad[2 * (n * j + i)];
      const double ai = ad[2 * (n * j + i) + 1];
      re += ar * xd[2 * j] - ai * xd[2 * j + 1];
      im += ai * xd[2 * j] + ar * xd[2 * j + 1];
    }
    yd[2 * i] = re;
    yd[2 * i + 1] = im;
  }
}

MOLLOW_AVX2 void caxpy(Complex alpha, const Complex* x, Complex* y,
                       std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const __m256d br = _mm256_set1_pd(alpha.real());
  const __m256d bi = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(xd + 2 * i);
    const __m256d vy = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(vy, cmul_broadcast(vx, br, bi)));
  }
  for (; i < n; ++i) {
    const double xr = xd[2 * i];
    const double xi = xd[2 * i + 1];
    yd[2 * i] += xr * alpha.real() - xi * alpha.imag();
    yd[2 * i + 1] += xi * alpha.real() + xr * alpha.imag();
  }
}

MOLLOW_AVX2 void lorentzian_sum(const Complex* poles, const Complex* weights,
                                std::size_t n_poles, const double* omegas,
                                double* out, std::size_t n_omegas) {
  const __m256d inv_pi = _mm256_set1_pd(std::numbers::inv_pi);
  std::size_t j = 0;
  for (; j + 4 <= n_omegas; j += 4) {
    const __m256d w = _mm256_loadu_pd(omegas + j);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < n_poles; ++k) {
      const __m256d a = _mm256_set1_pd(poles[k].real());
      const __m256d t = _mm256_add_pd(_mm256_set1_pd(poles[k].imag()), w);
      const __m256d num = _mm256_fmadd_pd(
          _mm256_set1_pd(weights[k].imag()), t,
          _mm256_mul_pd(_mm256_set1_pd(weights[k].real()), a));
      const __m256d den = _mm256_fmadd_pd(t, t, _mm256_mul_pd(a, a));
      acc = _mm256_sub_pd(acc, _mm256_div_pd(num, den));
    }
    _mm256_storeu_pd(out + j, _mm256_mul_pd(acc, inv_pi));
  }
  if (j < n_omegas) {
    scalar::lorentzian_sum(poles, weights, n_poles, omegas + j, out + j,
                           n_omegas - j);
  }
}

}  // namespace mollow::kernels::avx2

#endif
