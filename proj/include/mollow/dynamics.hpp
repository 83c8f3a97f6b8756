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

#include <span>
#include <string>
#include <vector>

#include "mollow/ops.hpp"

namespace mollow {

// Bordered-system pivots below this reciprocal condition number are treated
// as a numerically degenerate steady state.
inline constexpr double kDegenerateRcond = 1e-12;
inline constexpr double kSteadyResidualTolerance = 1e-9;
// Eigenvector-matrix condition beyond which evolution switches to RK4.
inline constexpr double kConditionLimit = 1e8;
inline constexpr double kFallbackStep = 1e-3;
inline constexpr double kZeroPopulationThreshold = 1e-12;

class DensityMatrix {
 public:
  // Checks trace = 1 (1e-10), hermiticity (1e-9) and smallest eigenvalue
  // > -1e-8; throws kInvalidState otherwise.
  DensityMatrix(SpaceLayout layout, Matrix matrix);

  const SpaceLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }
  double min_eigenvalue() const;

 private:
  SpaceLayout layout_;
  Matrix matrix_;
};

// Unique steady state of L. The bordered system replaces the first
// (ground-state population) row of L by the trace functional.
DensityMatrix steady_state(const Superoperator& l);
DensityMatrix steady_state(const Superoperator& l, const Grading& grading);

Complex expval(const DensityMatrix& rho, const Operator& op);

// e^{L tau} acting on vectorized operators. Holds the eigendecomposition of
// (graded) L, or an RK4 integrator when the eigenvectors are too
// ill-conditioned to trust.
class Propagator {
 public:
  explicit Propagator(const Superoperator& l);
  Propagator(const Superoperator& l, Grading grading);

  // taus must be ascending and nonnegative.
  std::vector<Vector> evolve(const Vector& v0,
                             std::span<const double> taus) const;

  bool diagonalized() const { return diagonalized_; }
  double condition() const { return condition_; }
  const Vector& eigenvalues() const { return eigenvalues_; }
  int dim() const { return static_cast<int>(generator_.rows()); }

  // Tr[O e^{L tau} v0] = sum_k weights[k] exp(poles[k] tau). Requires
  // diagonalized(). observable is the trace functional of O.
  struct Modes {
    std::vector<Complex> poles;
    std::vector<Complex> weights;
  };
  Modes modes(const Vector& observable, const Vector& v0) const;

 private:
  std::vector<Vector> integrate(const Vector& v0,
                                std::span<const double> taus) const;

  Grading grading_;
  Matrix generator_;  // graded L
  Vector eigenvalues_;
  Matrix eigenvectors_;
  Matrix inverse_eigenvectors_;
  double condition_ = 0.0;
  bool diagonalized_ = false;
};

std::vector<Vector> evolve_vec(const Superoperator& l, const Vector& v0,
                               std::span<const double> taus);

// G(tau) = Tr[observe e^{L tau}(left rho right)]
std::vector<Complex> two_time_correlator(const Superoperator& l,
                                         const DensityMatrix& rho,
                                         const Operator& left,
                                         const Operator& right,
                                         const Operator& observe,
                                         std::span<const double> taus);
std::vector<Complex> two_time_correlator(const Propagator& propagator,
                                         const DensityMatrix& rho,
                                         const Operator& left,
                                         const Operator& right,
                                         const Operator& observe,
                                         std::span<const double> taus);

struct G2TauResult {
  std::vector<double> taus;
  std::vector<double> values;

  double tail_deviation() const;
};

// Normalized <e^+ e^+(tau) e(tau) e> / <e^+ e>^2 for the model's emission
// operator e.
G2TauResult g2_tau_unfiltered(const LindbladModel& model,
                              std::span<const double> taus);

struct SpectrumResult {
  std::vector<double> frequencies;
  std::vector<double> values;
  std::string normalization = "unit-area";
  // |<e>|^2, the elastically scattered part, kept off the grid.
  double coherent_weight = 0.0;
  // <e^+ e> - |<e>|^2
  double incoherent_weight = 0.0;
};

// Incoherent emission spectrum from the Liouvillian eigendecomposition as a
// sum of complex Lorentzians, normalized to unit trapezoid area on the grid.
// Falls back to per-frequency resolvent solves when the eigenvectors are
// ill-conditioned.
SpectrumResult spectrum_qrt(const LindbladModel& model,
                            std::span<const double> grid);

// Same quantity, always through (L + i omega - |rho><1|)^-1 solves; not
// normalized.
std::vector<double> spectrum_resolvent(const LindbladModel& model,
                                       std::span<const double> grid);

double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace mollow
