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

#include "cvsn/oracles.hpp"

namespace cvsn {
namespace {

TEST(Oracles, BellState) {
  const FockComponent bell = build_state(Mes{2});
  EXPECT_NEAR(realignment_trace_norm(bell), 2.0, 1e-12);
  EXPECT_NEAR(pt_trace_norm(bell), 2.0, 1e-12);
  EXPECT_NEAR(x_matrix_brute(bell), 1.5, 1e-12);
  EXPECT_NEAR(lemma1_bound(SchmidtSpectrum({0.5, 0.5})), 1.5, 1e-15);
  EXPECT_NEAR(epr_correlation(bell), 2.0, 1e-14);
}

TEST(Oracles, MesNormsEqualDimension) {
  for (int d = 2; d <= 6; ++d) {
    const FockComponent m = build_state(Mes{d});
    EXPECT_NEAR(realignment_trace_norm(m), d, 1e-10);
    EXPECT_NEAR(pt_trace_norm(m), d, 1e-10);
    EXPECT_NEAR(x_matrix_brute(m), d - 1.0 / d, 1e-10);
  }
}

TEST(Oracles, ProductStateNorms) {
  // Realigned product is rank one: norm = ||rho_A||_F ||rho_B||_F.
  const FockComponent t = build_state(Thermal{0.4, 0.9, 4, 5});
  EXPECT_NEAR(realignment_trace_norm(t), t.reduced_a().norm() * t.reduced_b().norm(), 1e-12);
  EXPECT_LT(realignment_trace_norm(t), 1.0);
  EXPECT_NEAR(pt_trace_norm(t), 1.0, 1e-12);
}

TEST(Oracles, SchmidtSpectrumOfProductIsTrivial) {
  CMatrix u(3, 1);
  u << 0.6, 0.0, 0.8;
  CMatrix v(2, 1);
  v << cplx{0, 1}, 0.0;
  const SchmidtSpectrum s = schmidt_spectrum(u * v.transpose());
  EXPECT_NEAR(s.lambdas()[0], 1.0, 1e-14);
  EXPECT_NEAR(s.lambdas()[1], 0.0, 1e-14);
  EXPECT_NEAR(lemma1_bound(s), 0.0, 1e-14);
}

TEST(Oracles, PureCoefficientsRoundTrip) {
  CMatrix psi(2, 3);
  psi << 0.1, cplx{0, 0.3}, 0.2, 0.5, 0.0, cplx{0.4, -0.1};
  psi /= psi.norm();
  const CMatrix back = pure_coefficients(FockComponent::from_pure(psi));
  // Equal up to a global phase.
  const cplx phase = (back.conjugate().cwiseProduct(psi)).sum();
  EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
  EXPECT_THROW(pure_coefficients(build_state(Thermal{0.5, 0.5, 2, 2})), std::invalid_argument);
}

TEST(Oracles, CapsAreEnforced) {
  EXPECT_THROW(x_matrix_brute(build_state(Mes{kBruteForceDimCap + 1})), std::invalid_argument);
}

TEST(Oracles, CombinedFockIsTheMixture) {
  const CVState s = CVState::mix(0.3, CVState(build_state(Mes{3})), CVState(build_state(Thermal{0.5, 0.0, 3, 3})));
  const FockComponent c = combined_fock(s);
  const CMatrix want = 0.3 * build_state(Mes{3}).matrix() + 0.7 * build_state(Thermal{0.5, 0.0, 3, 3}).matrix();
  EXPECT_LT((c.matrix() - want).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(combined_fock(CVState(build_gaussian(Tmsv{0.2}))), std::invalid_argument);
}

TEST(Oracles, CorpusIsFixed) {
  const auto a = oracle_corpus();
  const auto b = oracle_corpus();
  ASSERT_EQ(a.size(), b.size());
  EXPECT_GE(a.size(), 20u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name, b[i].name);
    EXPECT_EQ((a[i].fock.matrix() - b[i].fock.matrix()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_GE(a[i].sn_upper, 1);
  }
}

// Property: realignment and PT norms are at least 1 and at most the smaller
// dimension; for pure states x_matrix_brute equals lemma1_bound of the Schmidt spectrum.
TEST(OraclesProperty, RandomPureStates) {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> dim(2, 8);
  for (int i = 0; i < 100; ++i) {
    const int da = dim(rng);
    const int db = dim(rng);
    CMatrix psi(da, db);
    for (int a = 0; a < da; ++a) {
      for (int b = 0; b < db; ++b) psi(a, b) = {g(rng), g(rng)};
    }
    psi /= psi.norm();
    const FockComponent c = FockComponent::from_pure(psi);
    const SchmidtSpectrum s = schmidt_spectrum(psi);
    double root = 0.0;
    for (double l : s.lambdas()) root += std::sqrt(l);
    // For pure states both norms equal (sum sqrt(lambda))^2.
    EXPECT_NEAR(realignment_trace_norm(c), root * root, 1e-10);
    EXPECT_NEAR(pt_trace_norm(c), root * root, 1e-10);
    EXPECT_LE(root * root, std::min(da, db) + 1e-12);
    EXPECT_NEAR(x_matrix_brute(c), lemma1_bound(s), 1e-10);
  }
}

}  // namespace
}  // namespace cvsn
