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

#include "mollow/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mollow/error.hpp"

namespace mollow {

namespace {

double min_rate(std::span<const double> gamma_filters) {
  double m = 1.0;
  for (double g : gamma_filters) m = std::min(m, g);
  return m;
}

void validate_specs(std::span<const SensorSpec> specs,
                    const EpsilonPolicy& policy) {
  if (specs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "sensors: no sensor given");
  }
  if (static_cast<int>(specs.size()) > kMaxSensors) {
    throw Error(ErrorCode::kDimensionBudget,
                "sensors: at most " + std::to_string(kMaxSensors) +
                    " sensors can be attached");
  }
  std::vector<double> gammas;
  for (const auto& s : specs) {
    if (!(s.gamma_filter > 0.0) || !std::isfinite(s.gamma_filter)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sensors: filter linewidth must be positive");
    }
    if (!std::isfinite(s.omega)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sensors: frequency must be finite");
    }
    gammas.push_back(s.gamma_filter);
  }
  const double eps_cap = epsilon_max(gammas, policy);
  for (const auto& s : specs) {
    if (!(s.epsilon > 0.0) || s.epsilon > eps_cap * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "sensors: coupling " << s.epsilon << " outside (0, " << eps_cap
          << "]";
      throw Error(ErrorCode::kInvalidArgument, msg.str());
    }
  }
}

std::vector<SensorSpec> scaled(std::span<const SensorSpec> specs,
                               double factor) {
  std::vector<SensorSpec> out(specs.begin(), specs.end());
  for (auto& s : out) s.epsilon *= factor;
  return out;
}

struct SensorMoments {
  std::vector<double> populations;
  double joint = 0.0;
};

SensorMoments steady_moments(const LindbladModel& model,
                             std::span<const SensorSpec> specs) {
  const LindbladModel attached = attach_sensors(model, specs);
  const Superoperator l = liouvillian(attached);
  const DensityMatrix rho =
      steady_state(l, sensor_grading(attached.layout(), specs));
  const Matrix number = local::sigma_lower().adjoint() * local::sigma_lower();

  SensorMoments m;
  Operator joint = Operator::identity(attached.layout());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const Operator n_i =
        embed(number, attached.layout(), sensor_label(static_cast<int>(i)));
    m.populations.push_back(expval(rho, n_i).real());
    joint = joint * n_i;
  }
  m.joint = expval(rho, joint).real();
  return m;
}

void require_populations(std::span<const double> pops,
                         std::span<const SensorSpec> specs) {
  for (std::size_t i = 0; i < pops.size(); ++i) {
    if (!(pops[i] >= kVanishingPopulation)) {
      std::ostringstream msg;
      msg << "sensors: population " << pops[i] << " of sensor at omega="
          << specs[i].omega << " below " << kVanishingPopulation;
      throw Error(ErrorCode::kVanishingPopulation, msg.str());
    }
  }
}

double normalized_moment(const LindbladModel& model,
                         std::span<const SensorSpec> specs) {
  const SensorMoments m = steady_moments(model, specs);
  require_populations(m.populations, specs);
  double denom = 1.0;
  for (double p : m.populations) denom *= p;
  return m.joint / denom;
}

struct Converged {
  double value = 0.0;
  std::optional<double> drift;
  double scale = 1.0;
};

// Sorting makes the result exactly invariant under permutations of specs.
Converged converge(const LindbladModel& model, std::vector<SensorSpec> specs,
                   const EpsilonPolicy& policy) {
  std::sort(specs.begin(), specs.end());
  Converged c;
  c.value = normalized_moment(model, specs);
  if (!policy.check) return c;
  for (int k = 0; k <= policy.max_halvings; ++k) {
    const double next_scale = c.scale * 0.5;
    const double next = normalized_moment(model, scaled(specs, next_scale));
    const double drift = std::abs(next - c.value) /
                         std::max(std::abs(c.value), 1e-300);
    c.value = next;
    c.scale = next_scale;
    c.drift = drift;
    if (drift <= policy.drift_tolerance) break;
  }
  return c;
}

}  // namespace

double default_epsilon(std::span<const double> gamma_filters,
                       const EpsilonPolicy& policy) {
  return policy.factor * min_rate(gamma_filters);
}

double epsilon_max(std::span<const double> gamma_filters,
                   const EpsilonPolicy& policy) {
  return policy.max_factor * min_rate(gamma_filters);
}

std::vector<SensorSpec> make_sensors(std::span<const double> omegas,
                                     double gamma_filter,
                                     const EpsilonPolicy& policy) {
  const double gammas[] = {gamma_filter};
  const double eps = default_epsilon(gammas, policy);
  std::vector<SensorSpec> out;
  for (double w : omegas) out.push_back({w, gamma_filter, eps});
  return out;
}

std::string sensor_label(int index) {
  return "sensor" + std::to_string(index + 1);
}

LindbladModel attach_sensors(const LindbladModel& model,
                             std::span<const SensorSpec> specs) {
  if (static_cast<int>(specs.size()) > kMaxSensors) {
    throw Error(ErrorCode::kDimensionBudget,
                "sensors: at most " + std::to_string(kMaxSensors) +
                    " sensors can be attached");
  }
  const long total = static_cast<long>(model.layout().dim())
                     << static_cast<long>(specs.size());
  if (total > kMaxAttachedDim) {
    throw Error(ErrorCode::kDimensionBudget,
                "sensors: attached dimension " + std::to_string(total) +
                    " exceeds " + std::to_string(kMaxAttachedDim));
  }

  SpaceLayout layout = model.layout();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    layout = layout.with({sensor_label(static_cast<int>(i)), 2});
  }
  // Lift the model's operators by appending identities for the sensors.
  const int extra = layout.dim() / model.layout().dim();
  const Matrix pad = local::identity(extra);
  auto lift = [&](const Operator& op) {
    return Operator(layout, kron(op.matrix(), pad));
  };

  const Operator e = lift(model.emission());
  const Operator ed = e.adjoint();
  Operator h = lift(model.hamiltonian());
  std::vector<Collapse> collapses;
  for (const auto& c : model.collapses()) collapses.push_back({c.rate, lift(c.op)});

  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    const Operator sl =
        embed(local::sigma_lower(), layout, sensor_label(static_cast<int>(i)));
    const Operator sd = sl.adjoint();
    h = h + Complex(s.omega) * (sd * sl) +
        Complex(s.epsilon) * (e * sd + ed * sl);
    collapses.push_back({s.gamma_filter, sl});
  }
  // Round-off in the products can leave ~1e-17 antihermitian residue.
  h = Operator(layout, 0.5 * (h.matrix() + h.matrix().adjoint()));
  return LindbladModel(std::move(h), std::move(collapses), e);
}

Grading sensor_grading(const SpaceLayout& attached,
                       std::span<const SensorSpec> specs) {
  std::vector<std::pair<std::string, double>> scales;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    scales.emplace_back(sensor_label(static_cast<int>(i)), specs[i].epsilon);
  }
  return Grading::from_scales(attached, scales);
}

std::vector<double> sensor_populations(const LindbladModel& model,
                                       std::span<const SensorSpec> specs) {
  validate_specs(specs, EpsilonPolicy{.max_factor = 1.0});
  return steady_moments(model, specs).populations;
}

SpectrumResult filtered_spectrum(const LindbladModel& model,
                                 double gamma_filter,
                                 std::span<const double> grid,
                                 const EpsilonPolicy& policy) {
  SpectrumResult result;
  result.frequencies.assign(grid.begin(), grid.end());
  result.values.reserve(grid.size());
  for (double omega : grid) {
    const auto specs = make_sensors(std::span<const double>(&omega, 1),
                                    gamma_filter, policy);
    validate_specs(specs, policy);
    const auto pops = steady_moments(model, specs).populations;
    require_populations(pops, specs);
    result.values.push_back(pops[0]);
  }
  const double area = trapezoid(result.frequencies, result.values);
  if (!(area > 0.0)) {
    throw Error(ErrorCode::kInvalidState,
                "filtered spectrum: nonpositive area on the grid");
  }
  for (auto& v : result.values) v /= area;
  return result;
}

FilteredG2 filtered_g2(const LindbladModel& model, const SensorSpec& s1,
                       const SensorSpec& s2, const EpsilonPolicy& policy) {
  const std::vector<SensorSpec> specs{s1, s2};
  validate_specs(specs, policy);
  const Converged c = converge(model, specs, policy);
  return FilteredG2{s1, s2, c.value, c.drift, c.scale};
}

G2TauResult filtered_g2_tau(const LindbladModel& model, const SensorSpec& s1,
                            const SensorSpec& s2,
                            std::span<const double> taus) {
  const std::vector<SensorSpec> specs{s1, s2};
  validate_specs(specs, EpsilonPolicy{.max_factor = 1.0});
  const LindbladModel attached = attach_sensors(model, specs);
  const Superoperator l = liouvillian(attached);
  const Grading grading = sensor_grading(attached.layout(), specs);
  const DensityMatrix rho = steady_state(l, grading);

  const Operator first = embed(local::sigma_lower(), attached.layout(), sensor_label(0));
  const Operator second = embed(local::sigma_lower(), attached.layout(), sensor_label(1));
  const Operator n1 = first.adjoint() * first;
  const Operator n2 = second.adjoint() * second;
  const double pops[] = {expval(rho, n1).real(), expval(rho, n2).real()};
  require_populations(pops, specs);

  const Propagator prop(l, grading);
  const auto g = two_time_correlator(prop, rho, first, first.adjoint(), n2, taus);
  G2TauResult out;
  out.taus.assign(taus.begin(), taus.end());
  for (const auto& v : g) out.values.push_back(v.real() / (pops[0] * pops[1]));
  return out;
}

FilteredGn filtered_gn(const LindbladModel& model,
                       std::span<const SensorSpec> specs,
                       const EpsilonPolicy& policy) {
  validate_specs(specs, policy);
  const Converged c =
      converge(model, std::vector<SensorSpec>(specs.begin(), specs.end()), policy);
  return FilteredGn{std::vector<SensorSpec>(specs.begin(), specs.end()),
                    c.value, c.drift, c.scale};
}

}  // namespace mollow
