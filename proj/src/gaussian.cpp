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

#include "cvsn/gaussian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cvsn {

namespace {

Eigen::Matrix4d tmsv_covariance(double xi) {
  const double c = std::cosh(2.0 * xi);
  const double s = std::sinh(2.0 * xi);
  Eigen::Matrix4d g;
  // clang-format off
  g << c,  0,  s,  0,
       0,  c,  0, -s,
       s,  0,  c,  0,
       0, -s,  0,  c;
  // clang-format on
  return g;
}

void require_nonneg(double v, const char* name) {
  if (!(v >= 0.0)) throw std::invalid_argument(std::string(name) + " must be >= 0");
}

}  // namespace

Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  return omega;
}

double physicality_margin(const Eigen::MatrixXd& gamma) {
  const auto n = gamma.rows();
  if (n % 2 != 0 || gamma.cols() != n) {
    throw std::invalid_argument("physicality_margin: covariance must be square of even size");
  }
  Eigen::MatrixXcd h = gamma.cast<cplx>();
  for (Eigen::Index k = 0; k < n; k += 2) {
    h(k, k + 1) += cplx{0.0, 1.0};
    h(k + 1, k) -= cplx{0.0, 1.0};
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

GaussianComponent GaussianComponent::from_moments(const Eigen::Matrix4d& gamma,
                                                  const Eigen::Vector4d& mean, double weight) {
  if ((gamma - gamma.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("GaussianComponent: covariance is not symmetric");
  }
  if (physicality_margin(gamma) < -1e-10) {
    throw std::invalid_argument("GaussianComponent: covariance violates gamma + i Omega >= 0");
  }
  if (weight < 0.0 || weight > 1.0) {
    throw std::invalid_argument("GaussianComponent: weight outside [0,1]");
  }
  GaussianComponent c;
  c.gamma_ = 0.5 * (gamma + gamma.transpose());
  c.mean_ = mean;
  c.weight_ = weight;
  return c;
}

GaussianComponent GaussianComponent::with_weight(double weight) const {
  if (weight < 0.0 || weight > 1.0) {
    throw std::invalid_argument("GaussianComponent: weight outside [0,1]");
  }
  GaussianComponent c = *this;
  c.weight_ = weight;
  return c;
}

GaussianComponent build_gaussian(const GaussianKind& kind) {
  Eigen::Matrix4d gamma;
  if (const auto* k = std::get_if<Tmsv>(&kind)) {
    require_nonneg(k->xi, "xi");
    gamma = tmsv_covariance(k->xi);
  } else if (const auto* k = std::get_if<Tmst>(&kind)) {
    require_nonneg(k->xi, "xi");
    require_nonneg(k->nbar, "nbar");
    gamma = (2.0 * k->nbar + 1.0) * tmsv_covariance(k->xi);
  } else {
    const auto& t = std::get<ThermalProduct>(kind);
    require_nonneg(t.nbar_a, "nbar_a");
    require_nonneg(t.nbar_b, "nbar_b");
    gamma = Eigen::Vector4d(2.0 * t.nbar_a + 1.0, 2.0 * t.nbar_a + 1.0, 2.0 * t.nbar_b + 1.0,
                            2.0 * t.nbar_b + 1.0)
                .asDiagonal();
  }
  GaussianComponent c = GaussianComponent::from_moments(gamma);
  c.kind_ = kind;
  return c;
}

cplx char_function_gaussian(const GaussianComponent& c, cplx alpha1, cplx alpha2) {
  const Eigen::Vector4d y(alpha1.real(), alpha1.imag(), alpha2.real(), alpha2.imag());
  const Eigen::Matrix4d omega = symplectic_form();
  const Eigen::Vector4d oty = omega.transpose() * y;
  const double quad = oty.dot(c.gamma() * oty);
  const double lin = c.mean().dot(oty);
  return std::exp(cplx{-0.5 * quad, -lin});
}

double purity_from_covariance(const Eigen::MatrixXd& gamma) {
  const double det = gamma.determinant();
  if (det < 1.0 - 1e-9) {
    throw std::domain_error("purity: det(gamma) = " + std::to_string(det) +
                            " < 1, covariance is unphysical");
  }
  return 1.0 / std::sqrt(det);
}

double purity_gaussian(const GaussianComponent& c) { return purity_from_covariance(c.gamma()); }

double slowest_decay_rate(const GaussianComponent& c) {
  const Eigen::Matrix4d omega = symplectic_form();
  const Eigen::Matrix4d m = omega * c.gamma() * omega.transpose();
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(m, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

}  // namespace cvsn
