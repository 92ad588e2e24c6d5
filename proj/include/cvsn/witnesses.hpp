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

#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvsn/cvstate.hpp"
#include "cvsn/fockspace.hpp"
#include "cvsn/quadrature.hpp"

namespace cvsn {

enum class WitnessKind { Linear, LinearAbs, Nonlinear, PPT, Fidelity };

std::string to_string(WitnessKind kind);
/// Accepts the names produced by to_string; throws std::invalid_argument.
WitnessKind witness_kind_from_string(const std::string& name);

/// Raised when numerically integrated purities exceed 1 beyond tolerance.
class NumericalInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The three integrals behind the nonlinear criterion.
struct NonlinearTerms {
  IntegralResult abs_x;     // int |X(alpha)|
  IntegralResult purity_a;  // int <Q_A(alpha)>^2
  IntegralResult purity_b;  // int <Q_B(f(alpha))>^2
};

struct WitnessReport {
  WitnessKind kind = WitnessKind::Linear;
  double value = 0.0;
  double error_estimate = 0.0;
  int certified_sn = 1;
  bool converged = true;
  /// s for PPT, the truncation dimension for Fidelity, NaN otherwise.
  double parameter = std::numeric_limits<double>::quiet_NaN();
  std::optional<NonlinearTerms> terms;
};

/// Smallest r consistent with W - err, i.e. ceil(W - err), at least 1.
/// States of Schmidt number <= r satisfy W <= r, so W - err > r certifies r + 1.
int certify(double w, double err);

/// Quadrature radius large enough for every integrand a witness uses:
/// auto_rmax(state) stretched by 1 / sigma_min(J_f) for the mode-B term and
/// by `scale` for rescaled arguments. An explicit cfg.r_max is kept.
QuadratureConfig resolve_config(const QuadratureConfig& cfg, const CVState& state,
                                const PhaseMap& f, double scale = 1.0);

/// W = int <Q_A(alpha) (x) Q_B(f(alpha))>, or of its absolute value when
/// abs_mode is set.
WitnessReport linear_witness(const CVState& state, const PhaseMap& f = PhaseMap::conj_neg(),
                             bool abs_mode = false, const QuadratureConfig& cfg = {});

/// W = int |X| - sqrt((1 - P_A)(1 - P_B)) + 1 with P_n = int <Q_n>^2.
/// Throws NumericalInconsistency if a factor 1 - P_n is below -1e-6;
/// factors in [-1e-6, 0) are clamped to 0.
WitnessReport nonlinear_witness(const CVState& state, const PhaseMap& f = PhaseMap::conj_neg(),
                                const QuadratureConfig& cfg = {});

/// W_s = int <O_A(alpha) (x) O~_B(f(alpha))> with O(a) = Q(a / sqrt s) / s and
/// O~(a) = Q(a / sqrt(2 - s)) / (2 - s), so that s tr(O(a) O(b)) and
/// (2 - s) tr(O~(a) O~(b)) are both delta(a - b). W_1 is the linear witness.
/// Throws std::invalid_argument unless 0 < s < 2.
WitnessReport ppt_witness(const CVState& state, double s, const PhaseMap& f = PhaseMap::conj_neg(),
                          const QuadratureConfig& cfg = {});

/// s = 0.2, 0.4, ..., 1.8.
std::vector<double> ppt_s_grid();

/// ppt_witness at every s of the grid; the report with the largest value.
WitnessReport best_ppt_witness(const CVState& state, const PhaseMap& f = PhaseMap::conj_neg(),
                               const QuadratureConfig& cfg = {},
                               const std::vector<double>& s_grid = ppt_s_grid());

/// Smallest r with lambda_1 + ... + lambda_r >= F - 1e-12.
/// Throws std::invalid_argument unless 0 <= F <= 1 (1e-12 slack).
WitnessReport fidelity_certify(double fidelity, const SchmidtSpectrum& spectrum);

/// How a state is brought to d levels per mode before the overlap is taken.
enum class FidelityTruncation {
  Renormalized,  // project onto the first d levels and renormalize
  Exact          // matrix elements of the untruncated state
};

/// <psi_c| rho |psi_c> for |psi_c> = sum_n c_n |nn>, the state truncated at
/// d = c.size(). Gaussian components must carry a family recipe; Fock
/// components need dimensions >= d. `pad` is forwarded to TMST builds.
TruncatedOverlap target_overlap(const CVState& state, std::span<const double> coeffs, int pad = 0);

/// Fidelity witness with target coefficients c (Schmidt spectrum c_n^2).
WitnessReport fidelity_witness(const CVState& state, std::span<const double> coeffs,
                               FidelityTruncation mode = FidelityTruncation::Renormalized,
                               int pad = 0);

}  // namespace cvsn
