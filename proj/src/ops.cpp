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

#include "mollow/ops.hpp"

#include <cmath>
#include <set>

#include "mollow/error.hpp"

namespace mollow {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kDegenerateSteadyState:
      return "degenerate-steady-state";
    case ErrorCode::kInvalidState:
      return "invalid-state";
    case ErrorCode::kEigenDecomposition:
      return "eigendecomposition";
    case ErrorCode::kZeroPopulation:
      return "zero-population";
    case ErrorCode::kVanishingPopulation:
      return "vanishing-population";
    case ErrorCode::kRegime:
      return "regime";
    case ErrorCode::kDimensionBudget:
      return "dimension-budget";
    case ErrorCode::kTruncation:
      return "truncation";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kConfig:
      return "config";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// SpaceLayout

SpaceLayout::SpaceLayout(std::vector<Subsystem> subsystems)
    : subsystems_(std::move(subsystems)) {
  if (subsystems_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "layout: no subsystems");
  }
  std::set<std::string> seen;
  for (const auto& s : subsystems_) {
    if (s.dim < 2) {
      throw Error(ErrorCode::kInvalidArgument,
                  "layout: subsystem '" + s.label + "' has dim < 2");
    }
    if (!seen.insert(s.label).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "layout: duplicate label '" + s.label + "'");
    }
    dim_ *= s.dim;
  }
}

int SpaceLayout::index_of(std::string_view label) const {
  for (int i = 0; i < size(); ++i) {
    if (subsystems_[i].label == label) return i;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "layout: unknown label '" + std::string(label) + "'");
}

bool SpaceLayout::contains(std::string_view label) const {
  for (const auto& s : subsystems_) {
    if (s.label == label) return true;
  }
  return false;
}

std::vector<int> SpaceLayout::levels(int basis_index) const {
  std::vector<int> out(subsystems_.size());
  for (int s = size() - 1; s >= 0; --s) {
    out[s] = basis_index % subsystems_[s].dim;
    basis_index /= subsystems_[s].dim;
  }
  return out;
}

SpaceLayout SpaceLayout::with(Subsystem extra) const {
  auto subsystems = subsystems_;
  subsystems.push_back(std::move(extra));
  return SpaceLayout(std::move(subsystems));
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(SpaceLayout layout, Matrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != layout_.dim() || matrix_.cols() != layout_.dim()) {
    throw Error(ErrorCode::kInvalidArgument,
                "operator: matrix is " + std::to_string(matrix_.rows()) + "x" +
                    std::to_string(matrix_.cols()) + ", layout dim is " +
                    std::to_string(layout_.dim()));
  }
}

Operator Operator::identity(const SpaceLayout& layout) {
  return Operator(layout, Matrix::Identity(layout.dim(), layout.dim()));
}

Operator Operator::zero(const SpaceLayout& layout) {
  return Operator(layout, Matrix::Zero(layout.dim(), layout.dim()));
}

Operator Operator::adjoint() const { return Operator(layout_, matrix_.adjoint()); }

bool Operator::is_hermitian(double tol) const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() < tol;
}

void Operator::require_same_layout(const Operator& rhs) const {
  if (!(layout_ == rhs.layout_)) {
    throw Error(ErrorCode::kInvalidArgument, "operator: layout mismatch");
  }
}

Operator Operator::operator+(const Operator& rhs) const {
  require_same_layout(rhs);
  return Operator(layout_, matrix_ + rhs.matrix_);
}

Operator Operator::operator-(const Operator& rhs) const {
  require_same_layout(rhs);
  return Operator(layout_, matrix_ - rhs.matrix_);
}

Operator Operator::operator*(const Operator& rhs) const {
  require_same_layout(rhs);
  return Operator(layout_, matrix_ * rhs.matrix_);
}

Operator Operator::operator*(Complex scale) const {
  return Operator(layout_, matrix_ * scale);
}

namespace local {

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix sigma_lower() {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

Matrix annihilation(int dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

}  // namespace local

Matrix kron(const Matrix& a, const Matrix& b) {
  const Eigen::Index ar = a.rows(), ac = a.cols();
  const Eigen::Index br = b.rows(), bc = b.cols();
  Matrix out(ar * br, ac * bc);
  for (Eigen::Index j = 0; j < ac; ++j) {
    for (Eigen::Index i = 0; i < ar; ++i) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

Operator embed(const Matrix& local_op, const SpaceLayout& layout,
               std::string_view label) {
  const int target = layout.index_of(label);
  const auto& subsystems = layout.subsystems();
  if (local_op.rows() != subsystems[target].dim ||
      local_op.cols() != subsystems[target].dim) {
    throw Error(ErrorCode::kInvalidArgument,
                "embed: operator dim " + std::to_string(local_op.rows()) +
                    " does not match subsystem '" + std::string(label) +
                    "' of dim " + std::to_string(subsystems[target].dim));
  }
  int left = 1;
  for (int s = 0; s < target; ++s) left *= subsystems[s].dim;
  int right = 1;
  for (int s = target + 1; s < layout.size(); ++s) right *= subsystems[s].dim;
  Matrix out = kron(kron(local::identity(left), local_op), local::identity(right));
  return Operator(layout, std::move(out));
}

// ---------------------------------------------------------------------------
// LindbladModel

LindbladModel::LindbladModel(Operator hamiltonian,
                             std::vector<Collapse> collapses, Operator emission)
    : hamiltonian_(std::move(hamiltonian)),
      collapses_(std::move(collapses)),
      emission_(std::move(emission)) {
  if (!hamiltonian_.is_hermitian()) {
    throw Error(ErrorCode::kInvalidArgument,
                "model: Hamiltonian is not hermitian");
  }
  for (const auto& c : collapses_) {
    if (!(c.rate >= 0.0) || !std::isfinite(c.rate)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "model: collapse rate must be finite and >= 0");
    }
    if (!(c.op.layout() == layout())) {
      throw Error(ErrorCode::kInvalidArgument,
                  "model: collapse operator layout mismatch");
    }
  }
  if (!(emission_.layout() == layout())) {
    throw Error(ErrorCode::kInvalidArgument,
                "model: emission operator layout mismatch");
  }
}

// ---------------------------------------------------------------------------
// Superoperator

Superoperator::Superoperator(SpaceLayout layout, Matrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  const Eigen::Index d2 = static_cast<Eigen::Index>(layout_.dim()) * layout_.dim();
  if (matrix_.rows() != d2 || matrix_.cols() != d2) {
    throw Error(ErrorCode::kInvalidArgument,
                "superoperator: matrix size does not match layout");
  }
}

double Superoperator::trace_defect() const {
  const int d = hilbert_dim();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
    Complex sum = 0.0;
    for (int a = 0; a < d; ++a) sum += matrix_(a + d * a, j);
    worst = std::max(worst, std::abs(sum));
  }
  return worst;
}

Superoperator liouvillian(const LindbladModel& model) {
  // Same generator as the header formula, regrouped as
  //   L = I kron K + conj(K) kron I + sum_k r_k conj(c_k) kron c_k,
  //   K = -i H - 1/2 sum_k r_k c_k^+ c_k,
  // and accumulated in place so large layouts avoid d^2 x d^2 temporaries.
  const int d = model.layout().dim();
  const Complex i_unit(0.0, 1.0);

  Matrix k = -i_unit * model.hamiltonian().matrix();
  for (const auto& c : model.collapses()) {
    if (c.rate == 0.0) continue;
    k -= 0.5 * c.rate * (c.op.matrix().adjoint() * c.op.matrix());
  }
  const Matrix k_conj = k.conjugate();

  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  Matrix l = Matrix::Zero(n, n);
  for (int j = 0; j < d; ++j) l.block(j * d, j * d, d, d) += k;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      const Complex kij = k_conj(i, j);
      if (kij == Complex(0.0)) continue;
      for (int m = 0; m < d; ++m) l(i * d + m, j * d + m) += kij;
    }
  }
  for (const auto& c : model.collapses()) {
    if (c.rate == 0.0) continue;
    const Matrix& op = c.op.matrix();
    const Matrix scaled = c.rate * op;
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) {
        const Complex cij = std::conj(op(i, j));
        if (cij == Complex(0.0)) continue;
        l.block(i * d, j * d, d, d) += cij * scaled;
      }
    }
  }
  return Superoperator(model.layout(), std::move(l));
}

Vector vectorize(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvectorize(const Vector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw Error(ErrorCode::kInvalidArgument, "unvectorize: size mismatch");
  }
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Vector trace_functional(const Matrix& a) { return vectorize(a.transpose()); }

// ---------------------------------------------------------------------------
// Grading

Grading Grading::identity(const SpaceLayout& layout) {
  Grading g;
  const Eigen::Index d = layout.dim();
  g.weights_ = Eigen::VectorXd::Ones(d * d);
  g.identity_ = true;
  return g;
}

Grading Grading::from_scales(
    const SpaceLayout& layout,
    std::span<const std::pair<std::string, double>> scales) {
  const int d = layout.dim();
  std::vector<double> per_subsystem(layout.size(), 1.0);
  for (const auto& [label, scale] : scales) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "grading: scale for '" + label + "' must be positive");
    }
    per_subsystem[layout.index_of(label)] = scale;
  }
  Eigen::VectorXd w(d);
  for (int a = 0; a < d; ++a) {
    const auto lv = layout.levels(a);
    double weight = 1.0;
    for (int s = 0; s < layout.size(); ++s) {
      weight *= std::pow(per_subsystem[s], lv[s]);
    }
    w[a] = weight;
  }
  Grading g;
  g.weights_.resize(static_cast<Eigen::Index>(d) * d);
  for (int b = 0; b < d; ++b) {
    for (int a = 0; a < d; ++a) g.weights_[a + d * b] = w[a] * w[b];
  }
  g.identity_ = (g.weights_.array() == 1.0).all();
  return g;
}

Matrix Grading::conjugate(const Matrix& l) const {
  if (identity_) return l;
  const Eigen::VectorXd inv = weights_.cwiseInverse();
  return inv.asDiagonal() * l * weights_.asDiagonal();
}

Vector Grading::to_graded(const Vector& v) const {
  if (identity_) return v;
  return v.cwiseQuotient(weights_.cast<Complex>());
}

Vector Grading::from_graded(const Vector& v) const {
  if (identity_) return v;
  return v.cwiseProduct(weights_.cast<Complex>());
}

}  // namespace mollow
