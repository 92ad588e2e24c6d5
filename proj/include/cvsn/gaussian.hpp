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
#include <optional>
#include <variant>

#include <Eigen/Dense>

namespace cvsn {

using cplx = std::complex<double>;

// Quadrature ordering is (x1, p1, x2, p2) with x = a + a^dag and
// p = i(a^dag - a); the vacuum covariance is the identity.

struct Tmsv {
  double xi;
};

/// (2 nbar + 1) times the TMSV covariance.
struct Tmst {
  double xi;
  double nbar;
};

struct ThermalProduct {
  double nbar_a;
  double nbar_b;
};

using GaussianKind = std::variant<Tmsv, Tmst, ThermalProduct>;

class GaussianComponent {
 public:
  /// Throws std::invalid_argument unless gamma is symmetric (1e-12) and
  /// gamma + i Omega is positive semidefinite (1e-10).
  static GaussianComponent from_moments(const Eigen::Matrix4d& gamma,
                                        const Eigen::Vector4d& mean = Eigen::Vector4d::Zero(),
                                        double weight = 1.0);

  const Eigen::Matrix4d& gamma() const { return gamma_; }
  const Eigen::Vector4d& mean() const { return mean_; }
  double weight() const { return weight_; }

  /// Family the component was built from, if any. Used when a Fock
  /// truncation of the same state is needed.
  const std::optional<GaussianKind>& kind() const { return kind_; }

  GaussianComponent with_weight(double weight) const;

 private:
  friend GaussianComponent build_gaussian(const GaussianKind& kind);

  Eigen::Matrix4d gamma_;
  Eigen::Vector4d mean_;
  double weight_ = 1.0;
  std::optional<GaussianKind> kind_;
};

/// Omega = [[0,1],[-1,0]] (+) [[0,1],[-1,0]].
Eigen::Matrix4d symplectic_form();

/// Smallest eigenvalue of the Hermitian matrix gamma + i Omega (any even size).
double physicality_margin(const Eigen::MatrixXd& gamma);

GaussianComponent build_gaussian(const GaussianKind& kind);

/// exp(-1/2 y^T Omega Gamma Omega^T y - i d^T Omega^T y) with
/// y = (Re a1, Im a1, Re a2, Im a2).
cplx char_function_gaussian(const GaussianComponent& c, cplx alpha1, cplx alpha2);

/// 1 / sqrt(det gamma) for a covariance matrix of any even size.
/// Throws std::domain_error when det gamma < 1 - 1e-9.
double purity_from_covariance(const Eigen::MatrixXd& gamma);

double purity_gaussian(const GaussianComponent& c);

/// Smallest eigenvalue of Omega Gamma Omega^T, the slowest decay rate of |chi|.
double slowest_decay_rate(const GaussianComponent& c);

}  // namespace cvsn
