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

#pragma once

#include <complex>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cvsn/fockspace.hpp"
#include "cvsn/gaussian.hpp"

namespace cvsn {

using Component = std::variant<GaussianComponent, FockComponent>;

double component_weight(const Component& c);

/// A two-mode state as a convex mixture of Gaussian and truncated-Fock
/// components. The characteristic function is linear in the mixture, so
/// every expectation below is a weighted sum over components.
class CVState {
 public:
  /// Throws std::invalid_argument if the list is empty or the weights do not
  /// sum to 1 within 1e-10.
  explicit CVState(std::vector<Component> components);

  /// A single component at weight 1.
  CVState(const GaussianComponent& c);  // NOLINT(google-explicit-constructor)
  CVState(const FockComponent& c);      // NOLINT(google-explicit-constructor)

  /// p * a + (1 - p) * b, each side rescaled by its component weights.
  static CVState mix(double p, const CVState& a, const CVState& b);

  const std::vector<Component>& components() const { return components_; }

 private:
  std::vector<Component> components_;
};

enum class Mode { A, B };

/// Local reparameterization alpha -> f(alpha) of the phase-space argument.
class PhaseMap {
 public:
  enum class Kind { Identity, ConjNeg, Linear };

  static PhaseMap identity() { return PhaseMap(Kind::Identity, Eigen::Matrix2d::Identity()); }
  /// alpha -> -conj(alpha).
  static PhaseMap conj_neg();
  /// (Re, Im) -> J (Re, Im).
  static PhaseMap linear(const Eigen::Matrix2d& jacobian);

  Kind kind() const { return kind_; }
  const Eigen::Matrix2d& jacobian() const { return jacobian_; }
  double determinant() const { return jacobian_.determinant(); }
  double min_singular_value() const;

  cplx operator()(cplx alpha) const;

 private:
  PhaseMap(Kind kind, const Eigen::Matrix2d& jacobian) : kind_(kind), jacobian_(jacobian) {}

  Kind kind_;
  Eigen::Matrix2d jacobian_;
};

/// Throws std::invalid_argument unless |det J_A det J_B| = 1 (1e-12); the
/// map on mode A is the identity.
void require_unit_jacobian(const PhaseMap& f);

/// chi(alpha1, alpha2) = tr(rho D(alpha1) (x) D(alpha2)).
cplx chi(const CVState& state, cplx alpha1, cplx alpha2);

/// <Q_A(alpha) (x) Q_B(beta)> = (Re chi(alpha, -beta) - Im chi(alpha, beta)) / pi
/// with Q(alpha) = ((1+i) D(alpha) + (1-i) D^dag(alpha)) / (2 sqrt(pi)).
double q_joint(const CVState& state, cplx alpha, cplx beta);

/// <Q(alpha)> on one mode, (Re chi_red - Im chi_red) / sqrt(pi).
double q_local(const CVState& state, Mode mode, cplx alpha);

/// X(alpha) = <Q_A(alpha) (x) Q_B(f(alpha))> - <Q_A(alpha)><Q_B(f(alpha))>.
double x_function(const CVState& state, cplx alpha, const PhaseMap& f);

/// The characteristic-function values needed at one phase-space node.
struct NodeChi {
  cplx joint_plus;   // chi(alpha, beta)
  cplx joint_minus;  // chi(alpha, -beta)
  cplx local_a;      // chi(alpha, 0)
  cplx local_b;      // chi(0, beta)
};

/// All four values with shared displacement blocks per Fock component.
NodeChi node_chi(const CVState& state, cplx alpha, cplx beta);

struct NodeExpectations {
  double q_joint;
  double q_a;
  double q_b;

  double x() const { return q_joint - q_a * q_b; }
};

NodeExpectations node_expectations(const CVState& state, cplx alpha, cplx beta);

// ---------------------------------------------------------------------------
// State families used throughout the examples.

/// How the thermal noise of a Fock mixture is represented.
enum class NoiseTruncation {
  Gaussian,    // untruncated, closed-form characteristic function
  AtDimension, // truncated at the pure part's dimension and renormalized
  AtCutoff     // truncated at an explicit larger cutoff and renormalized
};

/// p |psi_+^d><psi_+^d| + (1 - p) rho(nbar_a) (x) rho(nbar_b).
CVState mes_noise_mixture(int d, double p, double nbar_a, double nbar_b,
                          NoiseTruncation noise = NoiseTruncation::AtDimension, int cutoff = 0);

/// p |psi_xi><psi_xi| + (1 - p) rho(nbar) (x) rho(nbar), all Gaussian.
CVState tmsv_thermal_mixture(double xi, double nbar, double p);

}  // namespace cvsn
