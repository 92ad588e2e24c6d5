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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <boost/math/special_functions/laguerre.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "cvsn/fockspace.hpp"

namespace cvsn {
namespace {

// exp(alpha a^dag - conj(alpha) a) on a large truncated space; its upper-left
// corner converges to the exact elements.
CMatrix expm_displacement(int dim, cplx alpha) {
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const CMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
  return gen.exp();
}

TEST(Laguerre, MatchesBoostOnGrid) {
  for (int n = 0; n <= 30; ++n) {
    for (int k : {0, 1, 3, 7}) {
      for (double x : {0.0, 0.1, 1.0, 2.5, 7.0}) {
        const double want = boost::math::laguerre(n, k, x);
        EXPECT_NEAR(laguerre(n, k, x), want, 1e-10 * std::max(1.0, std::abs(want)))
            << "n=" << n << " k=" << k << " x=" << x;
      }
    }
  }
}

TEST(Displacement, VacuumElementIsGaussian) {
  const cplx a{0.7, -1.1};
  EXPECT_NEAR(std::abs(displacement_matrix_element(0, 0, a) - std::exp(-0.5 * std::norm(a))), 0.0, 1e-15);
}

TEST(Displacement, CoherentAmplitudes) {
  // <n|D(a)|0> = e^{-|a|^2/2} a^n / sqrt(n!)
  const cplx a{0.4, 0.9};
  for (int n = 0; n < 25; ++n) {
    const cplx want = std::exp(-0.5 * std::norm(a)) * std::pow(a, n) / std::sqrt(std::tgamma(n + 1.0));
    EXPECT_NEAR(std::abs(displacement_matrix_element(n, 0, a) - want), 0.0, 1e-14) << n;
  }
}

TEST(Displacement, AgreesWithMatrixExponential) {
  for (cplx a : {cplx{0.3, 0.2}, cplx{-1.2, 0.5}, cplx{0.0, 1.5}}) {
    const CMatrix big = expm_displacement(120, a);
    const CMatrix mine = displacement_matrix(12, a);
    EXPECT_LT((big.topLeftCorner(12, 12) - mine).cwiseAbs().maxCoeff(), 1e-11);
  }
}

TEST(Displacement, AdjointIsNegatedArgument) {
  const cplx a{0.8, -0.3};
  const CMatrix d = displacement_matrix(15, a);
  const CMatrix dm = displacement_matrix(15, -a);
  EXPECT_LT((d.adjoint() - dm).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Displacement, ZeroIsIdentity) {
  EXPECT_LT((displacement_matrix(10, 0.0) - CMatrix::Identity(10, 10)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Displacement, RejectsHugeIndex) {
  EXPECT_THROW(displacement_matrix_element(kMaxFockIndex + 1, 0, 0.1), std::out_of_range);
}

TEST(Displacement, TruncatedUnitaryIsUnitary) {
  const CMatrix u = truncated_displacement_unitary(9, {0.6, -0.4});
  EXPECT_LT((u.adjoint() * u - CMatrix::Identity(9, 9)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Displacement, ColumnsNearlyNormalizedForLowLevels) {
  // Columns of the exact block lose only the tail beyond the cutoff.
  const CMatrix d = displacement_matrix(60, {1.0, 0.5});
  for (int m = 0; m < 5; ++m) EXPECT_NEAR(d.col(m).squaredNorm(), 1.0, 1e-12);
}

TEST(Populations, ThermalSumsToOneAndIsGeometric) {
  const auto p = thermal_populations(0.8, 30);
  double sum = 0.0;
  for (double v : p) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-14);
  EXPECT_NEAR(p[1] / p[0], 0.8 / 1.8, 1e-14);
  EXPECT_THROW(thermal_populations(-0.1, 3), std::invalid_argument);
}

TEST(Populations, TmsvCoefficients) {
  const auto c = tmsv_coefficients(0.9, 10);
  double norm = 0.0;
  for (double v : c) norm += v * v;
  EXPECT_NEAR(norm, 1.0, 1e-14);
  for (int n = 1; n < 10; ++n) EXPECT_NEAR(c[n] / c[n - 1], std::tanh(0.9), 1e-13);
}

TEST(Schmidt, SortsAndValidates) {
  const SchmidtSpectrum s({0.2, 0.5, 0.3});
  EXPECT_EQ(s.lambdas().front(), 0.5);
  EXPECT_NEAR(s.sum(), 1.0, 1e-15);
  EXPECT_THROW(SchmidtSpectrum({0.5, -0.1}), std::invalid_argument);
  EXPECT_THROW(SchmidtSpectrum(std::vector<double>{}), std::invalid_argument);
  EXPECT_EQ(SchmidtSpectrum::flat(4).size(), 4u);
}

TEST(FockComponent, ValidatesDensityMatrix) {
  CMatrix rho = CMatrix::Zero(4, 4);
  rho(0, 0) = 0.5;
  rho(3, 3) = 0.5;
  EXPECT_NO_THROW(FockComponent::from_density_matrix(rho, 2, 2));
  CMatrix bad_trace = rho * 1.1;
  EXPECT_THROW(FockComponent::from_density_matrix(bad_trace, 2, 2), std::invalid_argument);
  CMatrix non_herm = rho;
  non_herm(0, 1) = 0.1;
  EXPECT_THROW(FockComponent::from_density_matrix(non_herm, 2, 2), std::invalid_argument);
  CMatrix negative = CMatrix::Zero(4, 4);
  negative(0, 0) = 1.2;
  negative(1, 1) = -0.2;
  EXPECT_THROW(FockComponent::from_density_matrix(negative, 2, 2), std::invalid_argument);
}

TEST(FockComponent, MesReducedStatesAreMaximallyMixed) {
  const FockComponent mes = build_state(Mes{4});
  EXPECT_LT((mes.reduced_a() - CMatrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(purity_fock(mes), 1.0, 1e-14);
}

TEST(FockComponent, ThermalRetainedTrace) {
  const FockComponent t = build_state(Thermal{0.5, 1.0, 4, 6});
  const double qa = 0.5 / 1.5;
  const double qb = 0.5;
  EXPECT_NEAR(t.retained_trace(), (1 - std::pow(qa, 4)) * (1 - std::pow(qb, 6)), 1e-15);
  EXPECT_NEAR(t.matrix().trace().real(), 1.0, 1e-14);
}

TEST(FockComponent, CharFunctionAtOriginIsOne) {
  const FockComponent t = build_state(TmstFock{0.7, 0.4, 8});
  EXPECT_NEAR(std::abs(char_function_fock(t, 0.0, 0.0) - 1.0), 0.0, 1e-13);
}

TEST(FockComponent, CharFunctionMatchesDirectTrace) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  CMatrix psi(3, 4);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) psi(i, j) = {g(rng), g(rng)};
  }
  const FockComponent c = FockComponent::from_pure(psi);
  const cplx a1{0.3, -0.7};
  const cplx a2{-0.2, 0.4};
  Eigen::MatrixXcd da = displacement_matrix(3, a1);
  Eigen::MatrixXcd db = displacement_matrix(4, a2);
  Eigen::MatrixXcd kron(12, 12);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) kron.block(4 * i, 4 * j, 4, 4) = da(i, j) * db;
  }
  const cplx want = (c.matrix() * kron).trace();
  EXPECT_NEAR(std::abs(char_function_fock(c, a1, a2) - want), 0.0, 1e-14);
}

TEST(Tmst, PureLimitIsTruncatedTmsv) {
  const FockComponent a = build_state(TmstFock{0.8, 0.0, 10});
  const FockComponent b = build_state(TmsvTruncated{0.8, 10});
  EXPECT_LT((a.matrix() - b.matrix()).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_NEAR(a.retained_trace(), b.retained_trace(), 1e-13);
}

// Squeezed thermal state by exponentiating the squeezing generator in each
// n_a - n_b sector on a generously padded space.
CMatrix tmst_by_expm(double xi, double nbar, int d, int pad) {
  const double q = nbar / (1.0 + nbar);
  CMatrix rho = CMatrix::Zero(d * d, d * d);
  for (int delta = -(pad - 1); delta <= pad - 1; ++delta) {
    const int sa = std::max(delta, 0);
    const int sb = std::max(-delta, 0);
    const int len = pad - std::abs(delta);
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(len, len);
    for (int j = 0; j + 1 < len; ++j) {
      const double c = xi * std::sqrt((j + sa + 1.0) * (j + sb + 1.0));
      gen(j + 1, j) = c;
      gen(j, j + 1) = -c;
    }
    const Eigen::MatrixXd u = gen.exp();
    for (int j0 = 0; j0 < len; ++j0) {
      const double w = (1 - q) * std::pow(q, j0 + sa) * (1 - q) * std::pow(q, j0 + sb);
      if (w < 1e-20) continue;
      if (std::abs(delta) >= d) continue;
      const int out = d - std::abs(delta);
      for (int j = 0; j < out; ++j) {
        for (int jp = 0; jp < out; ++jp) {
          rho(composite_index(j + sa, j + sb, d), composite_index(jp + sa, jp + sb, d)) +=
              w * u(j, j0) * u(jp, j0);
        }
      }
    }
  }
  return rho / rho.trace().real();
}

TEST(Tmst, ExactElementsMatchMatrixExponential) {
  for (double xi : {0.4, 1.1}) {
    for (double nbar : {0.0, 0.6}) {
      const CMatrix want = tmst_by_expm(xi, nbar, 6, 160);
      const FockComponent got = build_state(TmstFock{xi, nbar, 6});
      EXPECT_LT((got.matrix() - want).cwiseAbs().maxCoeff(), 1e-11) << xi << " " << nbar;
    }
  }
}

TEST(Tmst, VacuumInputGivesTmsvPopulations) {
  const double xi = 0.6;
  const int d = 5;
  const FockComponent t = build_state(TmstFock{xi, 0.0, d});
  const auto c = tmsv_coefficients(xi, d);
  for (int j = 0; j < d; ++j) {
    EXPECT_NEAR(t.matrix()(composite_index(j, j, d), composite_index(j, j, d)).real(), c[j] * c[j], 1e-13);
  }
}

TEST(Tmst, OverlapConsistentWithBuiltState) {
  const TmstFock k{0.9, 0.5, 7};
  const FockComponent t = build_state(k);
  const auto c = tmsv_coefficients(0.9, 7);
  const TruncatedOverlap o = tmst_overlap(k, c);
  EXPECT_NEAR(o.renormalized(), fidelity_to_target(t, c), 1e-12);
  EXPECT_NEAR(o.retained, t.retained_trace(), 1e-12);
}

TEST(Tmst, RejectsBadArguments) {
  EXPECT_THROW(build_state(TmstFock{-0.1, 0.0, 3}), std::invalid_argument);
  EXPECT_THROW(build_state(TmstFock{0.1, 0.0, 0}), std::invalid_argument);
  EXPECT_THROW(tmst_overlap({0.5, 0.1, 3}, std::vector<double>(4, 0.5)), std::invalid_argument);
}

TEST(Fidelity, FlatTargetOnMesIsOne) {
  const std::vector<double> flat(5, 1.0 / std::sqrt(5.0));
  EXPECT_NEAR(fidelity_to_target(build_state(Mes{5}), flat), 1.0, 1e-14);
}

TEST(Fidelity, ShortTargetOnLargerState) {
  // <psi_2|MES_4|psi_2> = |sum_{n<2} 1/sqrt(2) 1/2|^2 = 1/2
  const std::vector<double> flat(2, 1.0 / std::sqrt(2.0));
  EXPECT_NEAR(fidelity_to_target(build_state(Mes{4}), flat), 0.5, 1e-14);
}

}  // namespace
}  // namespace cvsn
