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
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace cvsn {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Largest Fock index accepted by the displacement matrix elements.
inline constexpr int kMaxFockIndex = 500;

/// Generalized Laguerre polynomial L_n^{(k)}(x) by the three-term recurrence
/// in the degree.
double laguerre(int n, double k, double x);

/// <n|D(alpha)|m> with D(alpha) = exp(alpha a^dag - conj(alpha) a).
///
/// Factorial ratios are taken in log space. Throws std::out_of_range for
/// indices above kMaxFockIndex and std::overflow_error if the result is not
/// finite.
cplx displacement_matrix_element(int n, int m, cplx alpha);

/// The dim x dim block of exact matrix elements <n|D(alpha)|m>, n, m < dim.
/// This is the upper-left corner of the infinite unitary, not itself unitary.
CMatrix displacement_matrix(int dim, cplx alpha);

/// exp(alpha a^dag - conj(alpha) a) with the ladder operators truncated to
/// dim levels. Exactly unitary on the truncated space.
CMatrix truncated_displacement_unitary(int dim, cplx alpha);

/// Row-major composite index of |n> (x) |m> in a (d_a * d_b)-dimensional
/// product basis.
constexpr int composite_index(int n, int m, int d_b) { return n * d_b + m; }

/// Normalized thermal populations (1-q) q^n, q = nbar/(nbar+1), truncated to
/// `dim` levels and renormalized.
std::vector<double> thermal_populations(double nbar, int dim);

/// Normalized Schmidt coefficients sqrt(lambda_n) of the two-mode squeezed
/// vacuum, proportional to tanh^n(xi), truncated to `dim` terms.
std::vector<double> tmsv_coefficients(double xi, int dim);

/// Nonincreasing list of Schmidt coefficients.
class SchmidtSpectrum {
 public:
  /// Sorts in nonincreasing order. Throws std::invalid_argument on a
  /// negative entry (below -1e-12) or an empty list.
  explicit SchmidtSpectrum(std::vector<double> lambdas);

  static SchmidtSpectrum flat(int d);

  const std::vector<double>& lambdas() const { return lambdas_; }
  std::size_t size() const { return lambdas_.size(); }
  double sum() const;

 private:
  std::vector<double> lambdas_;
};

/// Density matrix on a truncated two-mode Fock space, basis |n>|m> with
/// composite index n * d_b + m.
class FockComponent {
 public:
  /// Validates Hermiticity (1e-12), unit trace (1e-10) and positivity
  /// (eigenvalues >= -1e-10). Throws std::invalid_argument otherwise.
  static FockComponent from_density_matrix(const CMatrix& rho, int d_a, int d_b,
                                           double weight = 1.0);

  /// |psi><psi| for coefficients psi(n, m); normalizes the input.
  static FockComponent from_pure(const CMatrix& coefficients, double weight = 1.0);

  int dim_a() const;
  int dim_b() const;
  double weight() const;
  const CMatrix& matrix() const;
  CMatrix reduced_a() const;
  CMatrix reduced_b() const;

  /// Set when a padded construction may carry truncation artifacts.
  bool truncation_warning() const;

  /// Trace the untruncated state keeps inside the truncated space, before
  /// renormalization. 1 for states that fit exactly.
  double retained_trace() const;

  FockComponent with_weight(double weight) const;

  /// tr(rho (D_a (x) D_b)) for precomputed single-mode displacement blocks.
  cplx expectation(const CMatrix& d_a, const CMatrix& d_b) const;
  /// tr(rho_A D_a).
  cplx expectation_a(const CMatrix& d_a) const;
  /// tr(rho_B D_b).
  cplx expectation_b(const CMatrix& d_b) const;

 private:
  struct Data;
  explicit FockComponent(std::shared_ptr<const Data> data);
  static FockComponent make(CMatrix rho, int d_a, int d_b, double weight,
                            bool warning, double retained = 1.0);
  friend struct FockBuilder;

  std::shared_ptr<const Data> data_;
};

/// |psi_+^d> = d^{-1/2} sum_n |nn>.
struct Mes {
  int d;
};

/// rho(nbar_a) (x) rho(nbar_b), each truncated and renormalized.
struct Thermal {
  double nbar_a;
  double nbar_b;
  int d_a;
  int d_b;

  static Thermal symmetric(double nbar, int d) { return {nbar, nbar, d, d}; }
};

/// Two-mode squeezed vacuum truncated to d levels per mode and renormalized.
struct TmsvTruncated {
  double xi;
  int d;
};

/// U_xi (rho(nbar) (x) rho(nbar)) U_xi^dag truncated to d levels per mode
/// and renormalized. The squeezing elements are exact; `pad` is the number of
/// thermal input levels per mode, and 0 picks enough for a 1e-17 tail.
struct TmstFock {
  double xi;
  double nbar;
  int d;
  int pad = 0;
};

using FockKind = std::variant<Mes, Thermal, TmsvTruncated, TmstFock>;

FockComponent build_state(const FockKind& kind);

struct TruncatedOverlap {
  /// sum_{n,m} c_n c_m <nn|rho|mm> with the untruncated state's elements.
  double overlap;
  /// Trace of the state kept by the truncation to d levels per mode.
  double retained;

  /// Fidelity after truncating and renormalizing.
  double renormalized() const { return overlap / retained; }
};

/// Overlap data of the TMST state of `k` with a target of length <= k.d,
/// without forming the truncated density matrix.
TruncatedOverlap tmst_overlap(const TmstFock& k, std::span<const double> coeffs);

/// tr(rho D(alpha1) (x) D(alpha2)).
cplx char_function_fock(const FockComponent& c, cplx alpha1, cplx alpha2);

/// sum_{n,m} c_n c_m <nn|rho|mm>.
double fidelity_to_target(const FockComponent& c, std::span<const double> coeffs);

/// tr(rho^2).
double purity_fock(const FockComponent& c);

}  // namespace cvsn
