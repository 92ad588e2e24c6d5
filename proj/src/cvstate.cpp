// Copyright 2026 The cvsn Authors
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

#include "cvsn/cvstate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cvsn {

namespace {

constexpr double kInvPi = std::numbers::inv_pi;
const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

double component_weight(const Component& c) {
  return std::visit([](const auto& x) { return x.weight(); }, c);
}

CVState::CVState(std::vector<Component> components) : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("CVState: no components");
  double total = 0.0;
  for (const auto& c : components_) total += component_weight(c);
  if (std::abs(total - 1.0) > 1e-10) {
    throw std::invalid_argument("CVState: component weights sum to " + std::to_string(total));
  }
}

CVState::CVState(const GaussianComponent& c) : CVState(std::vector<Component>{c.with_weight(1.0)}) {}

CVState::CVState(const FockComponent& c) : CVState(std::vector<Component>{c.with_weight(1.0)}) {}

CVState CVState::mix(double p, const CVState& a, const CVState& b) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("CVState::mix: p outside [0,1]");
  std::vector<Component> out;
  auto append = [&out](const CVState& s, double scale) {
    for (const auto& c : s.components()) {
      std::visit([&](const auto& x) { out.emplace_back(x.with_weight(scale * x.weight())); }, c);
    }
  };
  append(a, p);
  append(b, 1.0 - p);
  return CVState(std::move(out));
}

PhaseMap PhaseMap::conj_neg() {
  Eigen::Matrix2d j;
  j << -1.0, 0.0, 0.0, 1.0;
  return PhaseMap(Kind::ConjNeg, j);
}

PhaseMap PhaseMap::linear(const Eigen::Matrix2d& jacobian) {
  return PhaseMap(Kind::Linear, jacobian);
}

double PhaseMap::min_singular_value() const {
  return Eigen::JacobiSVD<Eigen::Matrix2d>(jacobian_).singularValues().minCoeff();
}

cplx PhaseMap::operator()(cplx alpha) const {
  switch (kind_) {
    case Kind::Identity:
      return alpha;
    case Kind::ConjNeg:
      return -std::conj(alpha);
    case Kind::Linear:
      break;
  }
  const Eigen::Vector2d v = jacobian_ * Eigen::Vector2d(alpha.real(), alpha.imag());
  return {v(0), v(1)};
}

void require_unit_jacobian(const PhaseMap& f) {
  if (std::abs(std::abs(f.determinant()) - 1.0) > 1e-12) {
    throw std::invalid_argument("phase map Jacobian determinant must be +-1");
  }
}

NodeChi node_chi(const CVState& state, cplx alpha, cplx beta) {
  NodeChi acc{};
  for (const auto& comp : state.components()) {
    std::visit(overloaded{
                   [&](const GaussianComponent& g) {
                     const double w = g.weight();
                     acc.joint_plus += w * char_function_gaussian(g, alpha, beta);
                     acc.joint_minus += w * char_function_gaussian(g, alpha, -beta);
                     acc.local_a += w * char_function_gaussian(g, alpha, 0.0);
                     acc.local_b += w * char_function_gaussian(g, 0.0, beta);
                   },
                   [&](const FockComponent& f) {
                     const double w = f.weight();
                     const CMatrix da = displacement_matrix(f.dim_a(), alpha);
                     const CMatrix db = displacement_matrix(f.dim_b(), beta);
                     acc.joint_plus += w * f.expectation(da, db);
                     acc.joint_minus += w * f.expectation(da, db.adjoint());
                     acc.local_a += w * f.expectation_a(da);
                     acc.local_b += w * f.expectation_b(db);
                   },
               },
               comp);
  }
  return acc;
}

cplx chi(const CVState& state, cplx alpha1, cplx alpha2) {
  cplx acc{0.0, 0.0};
  for (const auto& comp : state.components()) {
    std::visit(overloaded{
                   [&](const GaussianComponent& g) {
                     acc += g.weight() * char_function_gaussian(g, alpha1, alpha2);
                   },
                   [&](const FockComponent& f) {
                     acc += f.weight() * char_function_fock(f, alpha1, alpha2);
                   },
               },
               comp);
  }
  return acc;
}

NodeExpectations node_expectations(const CVState& state, cplx alpha, cplx beta) {
  const NodeChi c = node_chi(state, alpha, beta);
  return {
      kInvPi * (c.joint_minus.real() - c.joint_plus.imag()),
      kInvSqrtPi * (c.local_a.real() - c.local_a.imag()),
      kInvSqrtPi * (c.local_b.real() - c.local_b.imag()),
  };
}

double q_joint(const CVState& state, cplx alpha, cplx beta) {
  cplx plus{0.0, 0.0};
  cplx minus{0.0, 0.0};
  for (const auto& comp : state.components()) {
    std::visit(overloaded{
                   [&](const GaussianComponent& g) {
                     plus += g.weight() * char_function_gaussian(g, alpha, beta);
                     minus += g.weight() * char_function_gaussian(g, alpha, -beta);
                   },
                   [&](const FockComponent& f) {
                     const CMatrix da = displacement_matrix(f.dim_a(), alpha);
                     const CMatrix db = displacement_matrix(f.dim_b(), beta);
                     plus += f.weight() * f.expectation(da, db);
                     minus += f.weight() * f.expectation(da, db.adjoint());
                   },
               },
               comp);
  }
  return kInvPi * (minus.real() - plus.imag());
}

double q_local(const CVState& state, Mode mode, cplx alpha) {
  const cplx c = mode == Mode::A ? chi(state, alpha, 0.0) : chi(state, 0.0, alpha);
  return kInvSqrtPi * (c.real() - c.imag());
}

double x_function(const CVState& state, cplx alpha, const PhaseMap& f) {
  return node_expectations(state, alpha, f(alpha)).x();
}

CVState mes_noise_mixture(int d, double p, double nbar_a, double nbar_b, NoiseTruncation noise,
                          int cutoff) {
  const CVState pure(build_state(Mes{d}));
  switch (noise) {
    case NoiseTruncation::Gaussian:
      return CVState::mix(p, pure, build_gaussian(ThermalProduct{nbar_a, nbar_b}));
    case NoiseTruncation::AtDimension:
      return CVState::mix(p, pure, build_state(Thermal{nbar_a, nbar_b, d, d}));
    case NoiseTruncation::AtCutoff:
      if (cutoff < d) throw std::invalid_argument("mes_noise_mixture: cutoff must be >= d");
      return CVState::mix(p, pure, build_state(Thermal{nbar_a, nbar_b, cutoff, cutoff}));
  }
  throw std::invalid_argument("mes_noise_mixture: unknown noise truncation");
}

CVState tmsv_thermal_mixture(double xi, double nbar, double p) {
  return CVState::mix(p, build_gaussian(Tmsv{xi}), build_gaussian(ThermalProduct{nbar, nbar}));
}

}  // namespace cvsn
