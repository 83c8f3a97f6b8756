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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "mollow/kernels.hpp"

namespace mollow::kernels {

namespace {

Isa detect() noexcept {
  if (const char* env = std::getenv("MOLLOW_ISA")) {
    if (std::string_view(env) == "scalar") return Isa::kScalar;
  }
  return isa_available(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

void require_sizes(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

const char* to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() noexcept { return selected().load(std::memory_order_relaxed); }

void set_isa(Isa isa) noexcept {
  selected().store(isa_available(isa) ? isa : Isa::kScalar,
                   std::memory_order_relaxed);
}

void cmatvec(std::span<const Complex> a, std::size_t n,
             std::span<const Complex> x, std::span<Complex> y) {
  require_sizes(a.size() == n * n && x.size() == n && y.size() == n,
                "cmatvec: size mismatch");
#if defined(__x86_64__) || defined(_M_X64)
  if (active_isa() == Isa::kAvx2) {
    avx2::cmatvec(a.data(), n, x.data(), y.data());
    return;
  }
#endif
  scalar::cmatvec(a.data(), n, x.data(), y.data());
}

void caxpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  require_sizes(x.size() == y.size(), "caxpy: size mismatch");
#if defined(__x86_64__) || defined(_M_X64)
  if (active_isa() == Isa::kAvx2) {
    avx2::caxpy(alpha, x.data(), y.data(), x.size());
    return;
  }
#endif
  scalar::caxpy(alpha, x.data(), y.data(), x.size());
}

void lorentzian_sum(std::span<const Complex> poles,
                    std::span<const Complex> weights,
                    std::span<const double> omegas, std::span<double> out) {
  require_sizes(poles.size() == weights.size() && omegas.size() == out.size(),
                "lorentzian_sum: size mismatch");
#if defined(__x86_64__) || defined(_M_X64)
  if (active_isa() == Isa::kAvx2) {
    avx2::lorentzian_sum(poles.data(), weights.data(), poles.size(),
                         omegas.data(), out.data(), omegas.size());
    return;
  }
#endif
  scalar::lorentzian_sum(poles.data(), weights.data(), poles.size(),
                         omegas.data(), out.data(), omegas.size());
}

}  // namespace mollow::kernels
