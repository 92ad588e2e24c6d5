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

#include <string>
#include <vector>

#include "cvsn/cvstate.hpp"
#include "cvsn/fockspace.hpp"

namespace cvsn {

/// Largest d_a * d_b accepted by the trace-norm oracles.
inline constexpr int kOracleDimensionCap = 4096;
/// Largest per-mode dimension accepted by x_matrix_brute.
inline constexpr int kBruteForceDimCap = 32;

/// ||R(rho)||_1 where R maps rho_{(n n'), (m m')} to R_{(n m), (n' m')}.
/// Throws std::invalid_argument above kOracleDimensionCap.
double realignment_trace_norm(const FockComponent& c);

/// ||rho^{T_A}||_1, the sum of |eigenvalues| of the partial transpose.
double pt_trace_norm(const FockComponent& c);

/// (sum_n sqrt(lambda_n))^2 - sum_n lambda_n^2.
double lemma1_bound(const SchmidtSpectrum& spectrum);

/// Squared singular values of a coefficient matrix psi(n, m).
SchmidtSpectrum schmidt_spectrum(const CMatrix& coefficients);

/// Coefficient matrix of a pure component (the dominant eigenvector,
/// reshaped). Throws std::invalid_argument if tr(rho^2) < 1 - 1e-10.
CMatrix pure_coefficients(const FockComponent& c);

/// Trace norm of the cross-covariance matrix
/// X_{mu nu} = <g_mu^dag (x) g_nu> - <g_mu^dag>_A <g_nu>_B over the operator
/// basis g_{nm} = |n><m| of each mode. Pure components with both dims
/// <= kBruteForceDimCap only; throws std::invalid_argument otherwise.
double x_matrix_brute(const FockComponent& c);

/// sum_{n,m} <nn|rho|mm>, the exact value of the linear witness with
/// f(alpha) = -conj(alpha).
double epr_correlation(const FockComponent& c);

/// The mixture of all-Fock components with equal dimensions as one density
/// matrix. Throws std::invalid_argument for Gaussian components or
/// mismatched dimensions.
FockComponent combined_fock(const CVState& state);

struct CorpusEntry {
  std::string name;
  CVState state;       // components kept separate for fast evaluation
  FockComponent fock;  // the same state as one density matrix
  /// Schmidt number bound known from the construction.
  int sn_upper;
};

/// Fixed oracle corpus: MES(2..8), truncated TMSV at xi in {0.3, 0.7, 1.0} and
/// d in {8, 16}, MES plus asymmetric truncated thermal noise, truncated TMSV
/// plus symmetric truncated thermal noise, and a few product states.
std::vector<CorpusEntry> oracle_corpus();

}  // namespace cvsn
