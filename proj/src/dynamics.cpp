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

#include "mollow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "mollow/error.hpp"
#include "mollow/kernels.hpp"

namespace mollow {

namespace {

void require_sorted_taus(std::span<const double> taus) {
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (!(taus[k] >= 0.0) || (k > 0 && taus[k] < taus[k - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "taus must be nonnegative and ascending");
    }
  }
}

double norm1(const Matrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(SpaceLayout layout, Matrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != layout_.dim() || matrix_.cols() != layout_.dim()) {
    throw Error(ErrorCode::kInvalidState, "density matrix: dimension mismatch");
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "density matrix: trace " << tr << " differs from 1";
    throw Error(ErrorCode::kInvalidState, msg.str());
  }
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(ErrorCode::kInvalidState, "density matrix: not hermitian");
  }
  const double lowest = min_eigenvalue();
  if (lowest < -1e-8) {
    std::ostringstream msg;
    msg << "density matrix: eigenvalue " << lowest << " below -1e-8";
    throw Error(ErrorCode::kInvalidState, msg.str());
  }
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix h = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// steady state

DensityMatrix steady_state(const Superoperator& l) {
  return steady_state(l, Grading::identity(l.layout()));
}

namespace {

// Connected components of the structural graph of L (i ~ j when L_ij or L_ji
// is nonzero). Symmetries such as excitation-number conservation make L block
// diagonal up to permutation; each block is solved densely on its own.
std::vector<std::vector<Eigen::Index>> structural_blocks(const Matrix& l) {
  const Eigen::Index n = l.rows();
  std::vector<Eigen::Index> parent(n);
  for (Eigen::Index i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j || l(i, j) == Complex(0.0)) continue;
      const Eigen::Index a = find(i);
      const Eigen::Index b = find(j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::vector<Eigen::Index>> blocks;
  std::vector<Eigen::Index> slot(n, -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<Eigen::Index>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[root]].push_back(i);
  }
  return blocks;
}

Matrix graded_block(const Matrix& l, const Grading& grading,
                    const std::vector<Eigen::Index>& idx) {
  const auto m = static_cast<Eigen::Index>(idx.size());
  const auto& w = grading.weights();
  Matrix out(m, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    for (Eigen::Index r = 0; r < m; ++r) {
      out(r, c) = l(idx[r], idx[c]) * (w[idx[c]] / w[idx[r]]);
    }
  }
  return out;
}

[[noreturn]] void degenerate(double rcond, const char* where) {
  std::ostringstream msg;
  msg << "steady state: Liouvillian kernel is not one-dimensional (" << where
      << ", rcond " << rcond << ")";
  throw Error(ErrorCode::kDegenerateSteadyState, msg.str());
}

}  // namespace

DensityMatrix steady_state(const Superoperator& l, const Grading& grading) {
  const int d = l.hilbert_dim();
  const auto& w = grading.weights();
  const auto blocks = structural_blocks(l.matrix());

  // All populations must share one block, otherwise trace can be moved
  // between blocks freely.
  std::vector<int> block_of(l.dim(), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (auto i : blocks[b]) block_of[i] = static_cast<int>(b);
  }
  const int main_block = block_of[0];
  for (int a = 0; a < d; ++a) {
    if (block_of[a + d * a] != main_block) degenerate(0.0, "disconnected populations");
  }

  Vector x = Vector::Zero(l.dim());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& idx = blocks[b];
    Matrix a = graded_block(l.matrix(), grading, idx);
    if (static_cast<int>(b) != main_block) {
      // Must be nonsingular: its only stationary solution is zero.
      const double rcond = Eigen::PartialPivLU<Matrix>(a).rcond();
      if (!(rcond > kDegenerateRcond)) degenerate(rcond, "coherence block");
      continue;
    }
    // idx is ascending, so local row 0 is the (0,0) population.
    a.row(0).setZero();
    for (std::size_t r = 0; r < idx.size(); ++r) {
      const Eigen::Index g = idx[r];
      if (g % d == g / d) a(0, static_cast<Eigen::Index>(r)) = w[g];
    }
    Vector rhs = Vector::Zero(a.rows());
    rhs[0] = 1.0;
    Eigen::PartialPivLU<Matrix> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond > kDegenerateRcond)) degenerate(rcond, "population block");
    const Vector sol = lu.solve(rhs);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      x[idx[r]] = sol[static_cast<Eigen::Index>(r)] * w[idx[r]];
    }
  }

  const double residual = (l.matrix() * x).cwiseAbs().maxCoeff();
  if (!(residual < kSteadyResidualTolerance)) {
    std::ostringstream msg;
    msg << "steady state: residual " << residual << " exceeds "
        << kSteadyResidualTolerance;
    throw Error(ErrorCode::kInvalidState, msg.str());
  }
  Matrix rho = unvectorize(x, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace();
  return DensityMatrix(l.layout(), std::move(rho));
}

Complex expval(const DensityMatrix& rho, const Operator& op) {
  if (!(rho.layout() == op.layout())) {
    throw Error(ErrorCode::kInvalidArgument, "expval: layout mismatch");
  }
  return (op.matrix() * rho.matrix()).trace();
}

// ---------------------------------------------------------------------------
// Propagator

Propagator::Propagator(const Superoperator& l)
    : Propagator(l, Grading::identity(l.layout())) {}

Propagator::Propagator(const Superoperator& l, Grading grading)
    : grading_(std::move(grading)), generator_(grading_.conjugate(l.matrix())) {
  Eigen::ComplexEigenSolver<Matrix> es(generator_, true);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenDecomposition,
                "propagator: eigendecomposition did not converge");
  }
  eigenvalues_ = es.eigenvalues();
  eigenvectors_ = es.eigenvectors();
  Eigen::PartialPivLU<Matrix> lu(eigenvectors_);
  inverse_eigenvectors_ = lu.inverse();
  condition_ = norm1(eigenvectors_) * norm1(inverse_eigenvectors_);
  diagonalized_ = std::isfinite(condition_) && condition_ <= kConditionLimit;
}

std::vector<Vector> Propagator::evolve(const Vector& v0,
                                       std::span<const double> taus) const {
  require_sorted_taus(taus);
  if (v0.size() != generator_.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "evolve: vector size mismatch");
  }
  if (!diagonalized_) return integrate(v0, taus);

  const Vector coeffs = inverse_eigenvectors_ * grading_.to_graded(v0);
  std::vector<Vector> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    if (tau == 0.0) {
      out.push_back(v0);
      continue;
    }
    const Vector scaled =
        coeffs.cwiseProduct((eigenvalues_ * tau).array().exp().matrix());
    out.push_back(grading_.from_graded(eigenvectors_ * scaled));
  }
  return out;
}

std::vector<Vector> Propagator::integrate(const Vector& v0,
                                          std::span<const double> taus) const {
  const auto n = static_cast<std::size_t>(generator_.rows());
  const std::span<const Complex> a(generator_.data(), n * n);
  Vector v = grading_.to_graded(v0);
  Vector k1(n), k2(n), k3(n), k4(n), tmp(n);
  auto span_of = [n](Vector& x) { return std::span<Complex>(x.data(), n); };
  auto cspan_of = [n](const Vector& x) {
    return std::span<const Complex>(x.data(), n);
  };

  auto rk4_step = [&](double h) {
    kernels::cmatvec(a, n, cspan_of(v), span_of(k1));
    tmp = v;
    kernels::caxpy(0.5 * h, cspan_of(k1), span_of(tmp));
    kernels::cmatvec(a, n, cspan_of(tmp), span_of(k2));
    tmp = v;
    kernels::caxpy(0.5 * h, cspan_of(k2), span_of(tmp));
    kernels::cmatvec(a, n, cspan_of(tmp), span_of(k3));
    tmp = v;
    kernels::caxpy(h, cspan_of(k3), span_of(tmp));
    kernels::cmatvec(a, n, cspan_of(tmp), span_of(k4));
    kernels::caxpy(h / 6.0, cspan_of(k1), span_of(v));
    kernels::caxpy(h / 3.0, cspan_of(k2), span_of(v));
    kernels::caxpy(h / 3.0, cspan_of(k3), span_of(v));
    kernels::caxpy(h / 6.0, cspan_of(k4), span_of(v));
  };

  std::vector<Vector> out;
  out.reserve(taus.size());
  double t = 0.0;
  for (double target : taus) {
    const double span = target - t;
    const auto steps = static_cast<long>(std::ceil(span / kFallbackStep - 1e-9));
    if (steps > 0) {
      const double h = span / static_cast<double>(steps);
      for (long s = 0; s < steps; ++s) rk4_step(h);
    }
    t = target;
    out.push_back(target == 0.0 ? v0 : grading_.from_graded(v));
  }
  return out;
}

Propagator::Modes Propagator::modes(const Vector& observable,
                                    const Vector& v0) const {
  if (!diagonalized_) {
    std::ostringstream msg;
    msg << "propagator: eigenvector condition " << condition_
        << " exceeds limit " << kConditionLimit;
    throw Error(ErrorCode::kEigenDecomposition, msg.str());
  }
  // Tr[O X] = o . D x~, so the observable row picks up the grading weights.
  const Vector graded_obs = observable.cwiseProduct(grading_.weights().cast<Complex>());
  const Vector left = eigenvectors_.transpose() * graded_obs;
  const Vector right = inverse_eigenvectors_ * grading_.to_graded(v0);
  Modes m;
  m.poles.reserve(eigenvalues_.size());
  m.weights.reserve(eigenvalues_.size());
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
    m.poles.push_back(eigenvalues_[k]);
    m.weights.push_back(left[k] * right[k]);
  }
  return m;
}

std::vector<Vector> evolve_vec(const Superoperator& l, const Vector& v0,
                               std::span<const double> taus) {
  return Propagator(l).evolve(v0, taus);
}

// ---------------------------------------------------------------------------
// correlators

std::vector<Complex> two_time_correlator(const Superoperator& l,
                                         const DensityMatrix& rho,
                                         const Operator& left,
                                         const Operator& right,
                                         const Operator& observe,
                                         std::span<const double> taus) {
  return two_time_correlator(Propagator(l), rho, left, right, observe, taus);
}

std::vector<Complex> two_time_correlator(const Propagator& propagator,
                                         const DensityMatrix& rho,
                                         const Operator& left,
                                         const Operator& right,
                                         const Operator& observe,
                                         std::span<const double> taus) {
  if (!(left.layout() == rho.layout()) || !(right.layout() == rho.layout()) ||
      !(observe.layout() == rho.layout())) {
    throw Error(ErrorCode::kInvalidArgument, "correlator: layout mismatch");
  }
  const Vector v0 = vectorize(left.matrix() * rho.matrix() * right.matrix());
  const Vector obs = trace_functional(observe.matrix());
  const auto evolved = propagator.evolve(v0, taus);
  std::vector<Complex> out;
  out.reserve(evolved.size());
  for (const auto& v : evolved) out.push_back((obs.array() * v.array()).sum());
  return out;
}

double G2TauResult::tail_deviation() const {
  if (values.empty()) return 0.0;
  return std::abs(values.back() - 1.0);
}

G2TauResult g2_tau_unfiltered(const LindbladModel& model,
                              std::span<const double> taus) {
  const Superoperator l = liouvillian(model);
  const DensityMatrix rho = steady_state(l);
  const Operator& e = model.emission();
  const Operator ed = e.adjoint();
  const Operator n_op = ed * e;
  const double pop = expval(rho, n_op).real();
  if (!(pop >= kZeroPopulationThreshold)) {
    std::ostringstream msg;
    msg << "g2: emitter population " << pop << " below "
        << kZeroPopulationThreshold;
    throw Error(ErrorCode::kZeroPopulation, msg.str());
  }
  const auto g = two_time_correlator(l, rho, e, ed, n_op, taus);
  G2TauResult out;
  out.taus.assign(taus.begin(), taus.end());
  out.values.reserve(g.size());
  for (const auto& v : g) out.values.push_back(v.real() / (pop * pop));
  return out;
}

// ---------------------------------------------------------------------------
// spectra

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kInvalidArgument, "trapezoid: size mismatch");
  }
  double acc = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) {
    acc += 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
  }
  return acc;
}

namespace {

struct SpectralInputs {
  Superoperator l;
  DensityMatrix rho;
  Vector observable;  // Tr[e .]
  Vector initial;     // vec(rho e^+) - <e^+> vec(rho)
  double coherent = 0.0;
  double incoherent = 0.0;
};

SpectralInputs spectral_inputs(const LindbladModel& model) {
  Superoperator l = liouvillian(model);
  DensityMatrix rho = steady_state(l);
  const Operator& e = model.emission();
  const Complex mean_e = expval(rho, e);
  const Complex mean_ed = std::conj(mean_e);
  const double pop = expval(rho, e.adjoint() * e).real();
  Vector initial = vectorize(rho.matrix() * e.adjoint().matrix()) -
                   mean_ed * vectorize(rho.matrix());
  SpectralInputs in{std::move(l), std::move(rho), trace_functional(e.matrix()),
                    std::move(initial), std::norm(mean_e), 0.0};
  in.incoherent = pop - in.coherent;
  return in;
}

void normalize_unit_area(SpectrumResult& result) {
  const double area = trapezoid(result.frequencies, result.values);
  if (!(area > 0.0)) {
    throw Error(ErrorCode::kInvalidState,
                "spectrum: nonpositive area on the grid");
  }
  for (auto& v : result.values) v /= area;
}

std::vector<double> resolvent_values(const SpectralInputs& in,
                                     std::span<const double> grid) {
  const int d = in.l.hilbert_dim();
  // -|rho><1| removes the zero mode without touching traceless inputs.
  Matrix base = in.l.matrix();
  const Vector rho_vec = vectorize(in.rho.matrix());
  for (int a = 0; a < d; ++a) base.col(a + d * a) -= rho_vec;
  std::vector<double> out;
  out.reserve(grid.size());
  for (double omega : grid) {
    Matrix m = base;
    m.diagonal().array() += Complex(0.0, omega);
    const Vector y = -Eigen::PartialPivLU<Matrix>(m).solve(in.initial);
    out.push_back((in.observable.array() * y.array()).sum().real() *
                  std::numbers::inv_pi);
  }
  return out;
}

}  // namespace

SpectrumResult spectrum_qrt(const LindbladModel& model,
                            std::span<const double> grid) {
  const SpectralInputs in = spectral_inputs(model);
  SpectrumResult result;
  result.frequencies.assign(grid.begin(), grid.end());
  result.coherent_weight = in.coherent;
  result.incoherent_weight = in.incoherent;
  result.values.resize(grid.size());

  const Propagator prop(in.l);
  if (!prop.diagonalized()) {
    result.values = resolvent_values(in, grid);
    normalize_unit_area(result);
    return result;
  }

  const auto modes = prop.modes(in.observable, in.initial);
  double scale = 1.0;
  for (const auto& p : modes.poles) scale = std::max(scale, std::abs(p));
  std::vector<Complex> poles;
  std::vector<Complex> weights;
  double total = 0.0;
  for (std::size_t k = 0; k < modes.poles.size(); ++k) {
    total += std::abs(modes.weights[k]);
  }
  for (std::size_t k = 0; k < modes.poles.size(); ++k) {
    if (modes.poles[k].real() < -1e-10 * scale) {
      poles.push_back(modes.poles[k]);
      weights.push_back(modes.weights[k]);
    } else if (std::abs(modes.weights[k]) > 1e-8 * std::max(total, 1e-300)) {
      std::ostringstream msg;
      msg << "spectrum: non-decaying mode " << modes.poles[k]
          << " carries weight " << modes.weights[k];
      throw Error(ErrorCode::kEigenDecomposition, msg.str());
    }
  }
  kernels::lorentzian_sum(poles, weights, grid, result.values);
  normalize_unit_area(result);
  return result;
}

std::vector<double> spectrum_resolvent(const LindbladModel& model,
                                       std::span<const double> grid) {
  return resolvent_values(spectral_inputs(model), grid);
}

}  // namespace mollow
