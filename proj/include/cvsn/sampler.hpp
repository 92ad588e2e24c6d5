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

#include <cstdint>

#include "cvsn/cvstate.hpp"
#include "cvsn/quadrature.hpp"
#include "cvsn/witnesses.hpp"

namespace cvsn {

/// Generator used for all sampling, reported in CLI output.
inline constexpr const char* kRngName = "mt19937_64 seeded by splitmix64(seed, node)";

struct EstimatorResult {
  double estimate = 0.0;
  double std_error = 0.0;
  long shots = 0;
};

/// <sigma_z> = Re(e^{i pi/4} chi_red(alpha)) for one ancilla coupled to one mode.
/// Throws NumericalInconsistency if |<sigma_z>| > 1 + 1e-9.
double exact_sigma_z_single(const CVState& state, Mode mode, cplx alpha);

/// <sigma_z> = <E_1 - E_0> of the sequential single-ancilla circuit with
/// D_A(alpha) and D_B(f(alpha)); equals (pi/2) q_joint.
double exact_sigma_z_joint(const CVState& state, cplx alpha, const PhaseMap& f);

/// Estimates from one run of the two-ancilla circuit at a node.
struct TwoAncillaSample {
  EstimatorResult x;        // (2/pi)(mean(sA sB) - mean(sA) mean(sB))
  EstimatorResult q_a;      // sqrt(2/pi) mean(sA)
  EstimatorResult q_b;      // sqrt(2/pi) mean(sB)
  /// Unbiased estimates of <Q_A>^2 and <Q_B>^2 with their standard errors.
  EstimatorResult q_a_sq;
  EstimatorResult q_b_sq;
};

/// Samples `shots` outcome pairs from
/// P(sA, sB) = (1 + sA zA + sB zB + sA sB zAB) / 4.
/// Throws std::invalid_argument for shots < 2.
TwoAncillaSample sample_two_ancilla_full(const CVState& state, cplx alpha, const PhaseMap& f,
                                         long shots, std::uint64_t seed);

/// The X estimate of sample_two_ancilla_full; standard error by the delta
/// method.
EstimatorResult sample_two_ancilla(const CVState& state, cplx alpha, const PhaseMap& f,
                                   long shots, std::uint64_t seed);

/// Which conditional displacements of the single-ancilla circuit are active.
enum class AncillaCoupling {
  Both,   // estimates <Q_A(alpha) (x) Q_B(f(alpha))> = (2/pi) <sigma_z>
  OnlyA,  // D_B = 1, estimates <Q_A(alpha)> = (2/sqrt(pi)) <sigma_z>
  OnlyB   // D_A = 1, estimates <Q_B(f(alpha))> = (2/sqrt(pi)) <sigma_z>
};

/// Bernoulli sampling with p(+1) = (1 + <sigma_z>) / 2.
/// Throws std::invalid_argument for shots < 1.
EstimatorResult sample_single_ancilla(const CVState& state, cplx alpha, const PhaseMap& f,
                                      long shots, std::uint64_t seed,
                                      AncillaCoupling coupling = AncillaCoupling::Both);

/// Nonlinear witness from two-ancilla samples at the base-level nodes of
/// cfg. The error estimate adds in quadrature: the statistical error, the
/// upward bias bound of |X| at nodes where the estimate is within 3 standard
/// errors of 0, and the change against the half-angular-resolution rule.
/// With `exact` the sampling is skipped and nonlinear_witness is returned.
/// Throws std::invalid_argument for shots_per_node < 100.
WitnessReport sampled_witness(const CVState& state, const PhaseMap& f, const QuadratureConfig& cfg,
                              long shots_per_node, std::uint64_t seed, bool exact = false);

/// Kraus pair of a two-outcome measurement. Both builders use the truncated
/// displacement unitary, so M_0^dag M_0 + M_1^dag M_1 = 1 on the truncated
/// space.
struct Povm {
  CMatrix m0;
  CMatrix m1;
};

/// Two-ancilla circuit, one mode: M_{0,1} = (+-1 - e^{i pi/4} D) / 2.
Povm single_mode_povm(int dim, cplx alpha);

/// Single-ancilla circuit on both modes, basis index n * d_b + m.
Povm sequential_povm(int d_a, int d_b, cplx alpha, cplx beta);

/// 64-bit mixing used to derive per-node seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace cvsn
