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
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cvsn/cvstate.hpp"

namespace cvsn {

/// Polar product rule on the disc |alpha| <= r_max: Gauss-Legendre in r
/// (weight r) times the periodic trapezoid rule in theta. Each refinement
/// doubles both node counts.
struct QuadratureConfig {
  int n_radial = 200;
  int n_angular = 64;
  /// nullopt selects auto_rmax of the state being integrated.
  std::optional<double> r_max;
  double rel_tol = 1e-6;
  int max_refinements = 6;

  /// Throws std::invalid_argument on n_radial < 8, odd or small n_angular,
  /// rel_tol <= 0, a nonpositive r_max or negative max_refinements.
  void validate() const;

  QuadratureConfig with_rmax(double r) const {
    QuadratureConfig c = *this;
    c.r_max = r;
    return c;
  }
};

struct IntegralResult {
  double value = 0.0;
  /// |I_k - I_{k-1}| at the last level, floored by an accumulated round-off
  /// term. A successive-refinement heuristic, not a rigorous bound.
  double error_estimate = 0.0;
  bool converged = false;
  /// Values and error estimates per refinement level (level 0 has no error).
  std::vector<double> level_values;
  std::vector<double> level_errors;
};

/// Thrown when the integrand is not finite at a node.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, cplx node)
      : std::runtime_error(what), node_(node) {}
  cplx node() const { return node_; }

 private:
  cplx node_;
};

struct PolarGrid {
  std::vector<cplx> nodes;
  std::vector<double> weights;  // include the Jacobian r
};

PolarGrid polar_grid(int n_radial, int n_angular, double r_max);

using PlaneFunction = std::function<double(cplx)>;
/// Several integrands sharing one node evaluation; fills `out` of fixed size.
using PlaneVectorFunction = std::function<void(cplx, std::span<double> out)>;

/// Integrates func over the disc. The config must have r_max set.
/// Node evaluations may run concurrently; func must be thread-safe.
IntegralResult integrate_plane(const PlaneFunction& func, const QuadratureConfig& cfg);

/// Vector version: refinement continues until every component has converged.
std::vector<IntegralResult> integrate_plane(const PlaneVectorFunction& func, std::size_t count,
                                            const QuadratureConfig& cfg);

/// Integrates precomputed node values against a grid (no refinement).
double integrate_values(const PolarGrid& grid, std::span<const double> values);

/// Radius at which the loosest characteristic-function envelope of the
/// state's components drops below 1e-12.
///
/// Gaussian: exp(-lambda_min R^2 / 2) with lambda_min the smallest eigenvalue
/// of Omega Gamma Omega^T. Fock with largest dimension D:
/// exp(-R^2/2) (1 + R^2)^(D-1) / (D-1)!, a bound of degree 2(D-1) in R.
double auto_rmax(const CVState& state);

/// Envelope threshold used by auto_rmax.
inline constexpr double kEnvelopeThreshold = 1e-12;

}  // namespace cvsn
