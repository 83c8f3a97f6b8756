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

// Operators on small tensor-product Hilbert spaces and the Lindblad
// superoperator in column-stacking convention:
//
//   vec(A rho B) = (B^T kron A) vec(rho)
//   L = -i (I kron H - H^T kron I)
//       + sum_k r_k (conj(c_k) kron c_k - 1/2 I kron c_k^+ c_k
//                    - 1/2 (c_k^+ c_k)^T kron I)
//
// The first subsystem of a layout is the most significant tensor factor.
// Level 0 of every subsystem is its ground (vacuum) state.

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mollow/error.hpp"

namespace mollow {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTracePreservationTolerance = 1e-10;

struct Subsystem {
  std::string label;
  int dim = 0;

  bool operator==(const Subsystem&) const = default;
};

class SpaceLayout {
 public:
  // Throws kInvalidArgument on empty layouts, dims < 2 or repeated labels.
  explicit SpaceLayout(std::vector<Subsystem> subsystems);

  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  int dim() const { return dim_; }
  int size() const { return static_cast<int>(subsystems_.size()); }

  // Position of the labeled subsystem; throws on unknown labels.
  int index_of(std::string_view label) const;
  bool contains(std::string_view label) const;

  // Per-subsystem level of a product basis state.
  std::vector<int> levels(int basis_index) const;

  SpaceLayout with(Subsystem extra) const;

  bool operator==(const SpaceLayout&) const = default;

 private:
  std::vector<Subsystem> subsystems_;
  int dim_ = 1;
};

class Operator {
 public:
  Operator(SpaceLayout layout, Matrix matrix);

  static Operator identity(const SpaceLayout& layout);
  static Operator zero(const SpaceLayout& layout);

  const SpaceLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }
  int dim() const { return layout_.dim(); }

  Operator adjoint() const;
  bool is_hermitian(double tol = kHermitianTolerance) const;

  Operator operator+(const Operator& rhs) const;
  Operator operator-(const Operator& rhs) const;
  Operator operator*(const Operator& rhs) const;
  Operator operator*(Complex scale) const;

 private:
  void require_same_layout(const Operator& rhs) const;

  SpaceLayout layout_;
  Matrix matrix_;
};

inline Operator operator*(Complex scale, const Operator& op) {
  return op * scale;
}

// Single-subsystem matrices.
namespace local {
Matrix identity(int dim);
// |g><e| in the {g=0, e=1} basis.
Matrix sigma_lower();
// Truncated bosonic annihilation operator, a|n> = sqrt(n)|n-1>.
Matrix annihilation(int dim);
}  // namespace local

Matrix kron(const Matrix& a, const Matrix& b);

// Lifts a subsystem-local matrix to the full layout, identity elsewhere.
Operator embed(const Matrix& local_op, const SpaceLayout& layout,
               std::string_view label);

struct Collapse {
  double rate = 0.0;
  Operator op;
};

class LindbladModel {
 public:
  // Validates hermiticity of the Hamiltonian, nonnegative rates and
  // layout agreement of every operator.
  LindbladModel(Operator hamiltonian, std::vector<Collapse> collapses,
                Operator emission);

  const SpaceLayout& layout() const { return hamiltonian_.layout(); }
  const Operator& hamiltonian() const { return hamiltonian_; }
  const std::vector<Collapse>& collapses() const { return collapses_; }
  const Operator& emission() const { return emission_; }

 private:
  Operator hamiltonian_;
  std::vector<Collapse> collapses_;
  Operator emission_;
};

class Superoperator {
 public:
  Superoperator(SpaceLayout layout, Matrix matrix);

  const SpaceLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }
  int hilbert_dim() const { return layout_.dim(); }
  int dim() const { return static_cast<int>(matrix_.rows()); }

  Vector apply(const Vector& v) const { return matrix_ * v; }

  // max_j |sum_a L_{(a,a), j}|, the deviation from (vec I)^+ L = 0.
  double trace_defect() const;

 private:
  SpaceLayout layout_;
  Matrix matrix_;
};

Superoperator liouvillian(const LindbladModel& model);

Vector vectorize(const Matrix& m);
Matrix unvectorize(const Vector& v, int dim);

// Row vector o with o . vec(X) = Tr(A X).
Vector trace_functional(const Matrix& a);

// Diagonal similarity on Liouville space, D_{(a,b)} = w_a w_b with
// w_a = prod_s scale_s^{level_s(a)}.
//
// Weakly coupled subsystems (sensors with coupling eps) carry density-matrix
// elements of order eps^(excitations). Working with D^-1 L D and D^-1 vec(rho)
// puts every component at order one so that tiny cross-moments keep their
// relative precision through LU and eigendecompositions.
class Grading {
 public:
  static Grading identity(const SpaceLayout& layout);
  static Grading from_scales(
      const SpaceLayout& layout,
      std::span<const std::pair<std::string, double>> scales);

  bool is_identity() const { return identity_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  // D^-1 L D
  Matrix conjugate(const Matrix& l) const;
  // D^-1 v
  Vector to_graded(const Vector& v) const;
  // D v
  Vector from_graded(const Vector& v) const;

 private:
  Eigen::VectorXd weights_;
  bool identity_ = true;
};

}  // namespace mollow
