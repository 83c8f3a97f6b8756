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

#include "mollow/models.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mollow/error.hpp"

namespace mollow {

namespace {

void validate(const RFParams& p) {
  if (!std::isfinite(p.rabi) || p.rabi < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "rf: rabi must be finite and >= 0");
  }
  if (!std::isfinite(p.detuning)) {
    throw Error(ErrorCode::kInvalidArgument, "rf: detuning must be finite");
  }
}

void validate(const BundleParams& b) {
  if (b.n < 2) throw Error(ErrorCode::kInvalidArgument, "bundle: n must be >= 2");
  if (!(b.cavity_coupling >= 0.0) || !(b.cavity_decay > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "bundle: coupling must be >= 0 and decay > 0");
  }
  if (b.fock_truncation < 2 * b.n + 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "bundle: fock_truncation must be >= 2n+2 = " +
                    std::to_string(2 * b.n + 2));
  }
}

}  // namespace

LindbladModel rf_model(const RFParams& p) {
  validate(p);
  const SpaceLayout layout({{kEmitterLabel, 2}});
  const Operator s(layout, local::sigma_lower());
  const Operator sd = s.adjoint();
  const Operator h = Complex(p.detuning) * (sd * s) + Complex(0.5 * p.rabi) * (s + sd);
  return LindbladModel(h, {{1.0, s}}, s);
}

DressedStructure dressed_structure(const RFParams& p) {
  validate(p);
  const Superoperator l = liouvillian(rf_model(p));
  Eigen::ComplexEigenSolver<Matrix> es(l.matrix(), false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigenDecomposition,
                "dressed structure: eigendecomposition did not converge");
  }
  double splitting = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    splitting = std::max(splitting, std::abs(es.eigenvalues()[k].imag()));
  }
  if (!(splitting > 1e-9)) {
    std::ostringstream msg;
    msg << "dressed structure: overdamped at rabi=" << p.rabi
        << " (all Liouvillian eigenvalues real), no triplet";
    throw Error(ErrorCode::kRegime, msg.str());
  }
  DressedStructure d;
  d.splitting = splitting;
  d.line_positions = {-splitting, 0.0, splitting};
  d.leapfrog_sums = {-splitting, 0.0, splitting};
  return d;
}

double LeapfrogLine::distance(double omega1, double omega2) const {
  return std::abs(omega1 + omega2 - sum) / std::sqrt(2.0);
}

std::array<LeapfrogLine, 3> leapfrog_lines(const RFParams& p) {
  const auto d = dressed_structure(p);
  return {LeapfrogLine{d.leapfrog_sums[0]}, LeapfrogLine{d.leapfrog_sums[1]},
          LeapfrogLine{d.leapfrog_sums[2]}};
}

LindbladModel cavity_model(const RFParams& p, const BundleParams& b,
                           double cavity_frequency) {
  validate(p);
  validate(b);
  const SpaceLayout layout({{kEmitterLabel, 2}, {kCavityLabel, b.fock_truncation}});
  const Operator s = embed(local::sigma_lower(), layout, kEmitterLabel);
  const Operator a = embed(local::annihilation(b.fock_truncation), layout, kCavityLabel);
  const Operator sd = s.adjoint();
  const Operator ad = a.adjoint();
  Operator h = Complex(p.detuning) * (sd * s) + Complex(0.5 * p.rabi) * (s + sd) +
               Complex(cavity_frequency) * (ad * a) +
               Complex(b.cavity_coupling) * (s * ad + sd * a);
  h = Operator(layout, 0.5 * (h.matrix() + h.matrix().adjoint()));
  return LindbladModel(h, {{1.0, s}, {b.cavity_decay, a}}, a);
}

LindbladModel bundle_model(const RFParams& p, const BundleParams& b) {
  validate(b);
  const double omega_plus = dressed_structure(p).splitting;
  return cavity_model(p, b, omega_plus / b.n);
}

BundleReport bundle_report(const RFParams& p, const BundleParams& b,
                           std::optional<double> cavity_frequency) {
  validate(b);
  const double wc =
      cavity_frequency ? *cavity_frequency : dressed_structure(p).splitting / b.n;
  const LindbladModel model = cavity_model(p, b, wc);
  const Superoperator l = liouvillian(model);
  const DensityMatrix rho = steady_state(l);
  const SpaceLayout& layout = model.layout();

  Matrix top = Matrix::Zero(b.fock_truncation, b.fock_truncation);
  top(b.fock_truncation - 1, b.fock_truncation - 1) = 1.0;
  const Operator a = model.emission();
  const Operator ad = a.adjoint();
  const Operator s = embed(local::sigma_lower(), layout, kEmitterLabel);

  BundleReport r;
  r.cavity_frequency = wc;
  r.cavity_population = expval(rho, ad * a).real();
  r.emitter_population = expval(rho, s.adjoint() * s).real();
  r.tail_population = expval(rho, embed(top, layout, kCavityLabel)).real();
  if (!(r.tail_population < kTruncationTailLimit)) {
    std::ostringstream msg;
    msg << "bundle: top Fock level population " << r.tail_population
        << " exceeds " << kTruncationTailLimit << "; raise fock_truncation";
    throw Error(ErrorCode::kTruncation, msg.str());
  }
  if (!(r.cavity_population >= kZeroPopulationThreshold)) {
    throw Error(ErrorCode::kZeroPopulation, "bundle: cavity is empty");
  }
  r.g2_zero = expval(rho, ad * ad * a * a).real() /
              (r.cavity_population * r.cavity_population);
  return r;
}

}  // namespace mollow
