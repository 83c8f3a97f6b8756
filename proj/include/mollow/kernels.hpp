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

// Data-parallel inner loops with a scalar reference implementation and an
// AVX2/FMA variant. The variant is chosen once at runtime from CPUID; setting
// MOLLOW_ISA=scalar in the environment pins the reference path.
//
// Complex arrays are std::complex<double>, i.e. interleaved (re, im) pairs.
// Matrices are column-major (Eigen's default) with leading dimension n.

#include <complex>
#include <cstddef>
#include <span>

namespace mollow::kernels {

using Complex = std::complex<double>;

enum class Isa { kScalar, kAvx2 };

const char* to_string(Isa isa) noexcept;

bool isa_available(Isa isa) noexcept;

// The ISA used by the dispatching entry points below.
Isa active_isa() noexcept;

// Overrides the dispatch choice for the calling process. Requesting an ISA
// the CPU lacks falls back to scalar. Not meant to be toggled while other
// threads are inside a kernel.
void set_isa(Isa isa) noexcept;

// y = A x for a dense column-major n x n matrix.
void cmatvec(std::span<const Complex> a, std::size_t n,
             std::span<const Complex> x, std::span<Complex> y);

// y += alpha x
void caxpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);

// out[j] = (1/pi) * sum_k Re[-w_k / (p_k + i omega_j)]
//
// This is the one-sided Fourier transform of sum_k w_k exp(p_k tau) taken at
// each omega_j; all poles must have Re p_k < 0.
void lorentzian_sum(std::span<const Complex> poles,
                    std::span<const Complex> weights,
                    std::span<const double> omegas, std::span<double> out);

namespace scalar {
void cmatvec(const Complex* a, std::size_t n, const Complex* x, Complex* y);
void caxpy(Complex alpha, const Complex* x, Complex* y, std::size_t n);
void lorentzian_sum(const Complex* poles, const Complex* weights,
                    std::size_t n_poles, const double* omegas, double* out,
                    std::size_t n_omegas);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void cmatvec(const Complex* a, std::size_t n, const Complex* x, Complex* y);
void caxpy(Complex alpha, const Complex* x, Complex* y, std::size_t n);
void lorentzian_sum(const Complex* poles, const Complex* weights,
                    std::size_t n_poles, const double* omegas, double* out,
                    std::size_t n_omegas);
}  // namespace avx2
#endif

}  // namespace mollow::kernels
