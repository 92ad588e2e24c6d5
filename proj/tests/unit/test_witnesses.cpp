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

#include "cvsn/oracles.hpp"
#include "cvsn/witnesses.hpp"

namespace cvsn {
namespace {

TEST(Certify, Examples) {
  EXPECT_EQ(certify(7.3891, 1e-5), 8);
  EXPECT_EQ(certify(2.0, 0.0), 2);
  EXPECT_EQ(certify(2.0000001, 1e-6), 2);
  EXPECT_EQ(certify(0.3, 0.0), 1);
  EXPECT_EQ(certify(-4.0, 0.0), 1);
}

TEST(WitnessKind, RoundTrip) {
  for (WitnessKind k : {WitnessKind::Linear, WitnessKind::LinearAbs, WitnessKind::Nonlinear, WitnessKind::PPT,
                        WitnessKind::Fidelity}) {
    EXPECT_EQ(witness_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(witness_kind_from_string("bogus"), std::invalid_argument);
}

TEST(Witness, TmsvNonlinearTriple) {
  const double nu = std::tanh(1.0);
  const WitnessReport w = nonlinear_witness(CVState(build_gaussian(Tmsv{1.0})));
  ASSERT_TRUE(w.terms);
  EXPECT_NEAR(w.terms->abs_x.value, 2 * nu * (nu + 1) / ((1 - nu) * (nu * nu + 1)), 1e-6);
  EXPECT_NEAR(w.terms->purity_a.value, (1 - nu * nu) / (1 + nu * nu), 1e-7);
  EXPECT_NEAR(w.value, std::exp(2.0), 1e-6 * std::exp(2.0));
  EXPECT_EQ(w.certified_sn, 8);
  EXPECT_TRUE(w.converged);
}

TEST(Witness, MesLinearEqualsDimension) {
  for (int d : {2, 5}) {
    const WitnessReport w = linear_witness(CVState(build_state(Mes{d})));
    EXPECT_NEAR(w.value, d, 1e-6);
    EXPECT_EQ(w.certified_sn, d);  // W = d exactly certifies only d
  }
}

TEST(Witness, LinearMatchesEprCorrelation) {
  const FockComponent c = build_state(TmstFock{0.6, 0.3, 6});
  EXPECT_NEAR(linear_witness(CVState(c)).value, epr_correlation(c), 1e-7);
}

TEST(Witness, ProductStatesCertifyNothing) {
  const CVState s(build_gaussian(ThermalProduct{0.3, 0.8}));
  EXPECT_EQ(nonlinear_witness(s).certified_sn, 1);
  EXPECT_EQ(linear_witness(s).certified_sn, 1);
  EXPECT_EQ(best_ppt_witness(s).certified_sn, 1);
}

TEST(Witness, PptAtOneIsLinear) {
  const CVState s(build_gaussian(Tmst{0.7, 0.2}));
  EXPECT_NEAR(ppt_witness(s, 1.0).value, linear_witness(s).value, 1e-6);
  EXPECT_THROW(ppt_witness(s, 0.0), std::invalid_argument);
  EXPECT_THROW(ppt_witness(s, 2.0), std::invalid_argument);
}

TEST(Witness, PptGridAndBest) {
  const auto grid = ppt_s_grid();
  ASSERT_EQ(grid.size(), 9u);
  EXPECT_NEAR(grid.front(), 0.2, 1e-15);
  EXPECT_NEAR(grid.back(), 1.8, 1e-15);
  const CVState s(build_state(TmsvTruncated{0.8, 6}));
  const WitnessReport best = best_ppt_witness(s);
  for (double v : grid) EXPECT_GE(best.value, ppt_witness(s, v).value - 1e-12);
}

TEST(Witness, MixtureThresholdFormulas) {
  const double p = 0.6;
  const double nb = 0.5;
  EXPECT_NEAR(linear_witness(mes_noise_mixture(4, p, nb, nb, NoiseTruncation::Gaussian)).value,
              4 * p + (1 - p) / (2 * nb + 1), 1e-6);
  EXPECT_NEAR(nonlinear_witness(tmsv_thermal_mixture(0.5, nb, p)).value, (1 - p) / (2 * nb + 1) + std::exp(1.0) * p,
              1e-5);
}

TEST(Witness, TmstNonlinearValue) {
  // W = e^{2 xi} / (2 nbar + 1) for the symmetric squeezed thermal state.
  for (double nb : {0.1, 0.5, 1.0}) {
    EXPECT_NEAR(nonlinear_witness(CVState(build_gaussian(Tmst{1.0, nb}))).value, std::exp(2.0) / (2 * nb + 1),
                1e-5);
  }
}

TEST(Witness, ResolveConfigStretchesForPhaseMap) {
  const CVState s(build_gaussian(ThermalProduct{0.0, 0.0}));
  const PhaseMap squash = PhaseMap::linear((Eigen::Matrix2d() << 2, 0, 0, 0.5).finished());
  EXPECT_NEAR(*resolve_config({}, s, squash).r_max, 2.0 * auto_rmax(s), 1e-12);
  EXPECT_EQ(*resolve_config(QuadratureConfig{}.with_rmax(3.0), s, squash).r_max, 3.0);
}

TEST(Fidelity, CertifyFromSpectrum) {
  const SchmidtSpectrum flat = SchmidtSpectrum::flat(4);
  EXPECT_EQ(fidelity_certify(0.3, flat).certified_sn, 2);   // 0.3 > 1/4
  EXPECT_EQ(fidelity_certify(0.25, flat).certified_sn, 1);  // not strictly above
  EXPECT_EQ(fidelity_certify(0.8, flat).certified_sn, 4);
  EXPECT_THROW(fidelity_certify(1.5, flat), std::invalid_argument);
}

TEST(Fidelity, ThermalClosedForm) {
  for (int d : {2, 5}) {
    for (double nb : {0.2, 1.0}) {
      const double q = nb / (1 + nb);
      const double want = (1 - std::pow(q, 2 * d)) / (d * (1 + 2 * nb));
      const std::vector<double> flat(d, 1 / std::sqrt(double(d)));
      const CVState s(build_gaussian(ThermalProduct{nb, nb}));
      EXPECT_NEAR(target_overlap(s, flat).overlap, want, 1e-12);
      EXPECT_NEAR(fidelity_witness(s, flat, FidelityTruncation::Exact).value, want, 1e-12);
    }
  }
}

TEST(Fidelity, RenormalizedNotBelowExact) {
  const CVState s(build_gaussian(Tmst{1.0, 0.5}));
  const auto c = tmsv_coefficients(1.0, 8);
  const WitnessReport r = fidelity_witness(s, c, FidelityTruncation::Renormalized);
  const WitnessReport e = fidelity_witness(s, c, FidelityTruncation::Exact);
  EXPECT_GE(r.value, e.value);
  EXPECT_EQ(r.parameter, 8);
  EXPECT_GE(r.certified_sn, e.certified_sn);
}

TEST(Fidelity, GaussianRecipeMatchesFockBuild) {
  const CVState g(build_gaussian(Tmst{0.8, 0.3}));
  const CVState f(build_state(TmstFock{0.8, 0.3, 6}));
  const auto c = tmsv_coefficients(0.8, 6);
  EXPECT_NEAR(fidelity_witness(g, c).value, fidelity_witness(f, c).value, 1e-12);
}

TEST(Fidelity, NeedsRecipeForGaussian) {
  const GaussianComponent bare = GaussianComponent::from_moments(Eigen::Matrix4d::Identity());
  EXPECT_THROW(fidelity_witness(CVState(bare), std::vector<double>(2, std::sqrt(0.5))), std::invalid_argument);
}

// Property: for product states every witness stays at or below 1.
TEST(WitnessProperty, SeparableStatesStayBelowOne) {
  for (double na : {0.0, 0.4}) {
    for (double nb : {0.2, 1.5}) {
      const CVState s(build_gaussian(ThermalProduct{na, nb}));
      EXPECT_LE(linear_witness(s, PhaseMap::conj_neg(), true).value, 1.0 + 1e-6);
      EXPECT_LE(nonlinear_witness(s).value, 1.0 + 1e-6);
      EXPECT_LE(ppt_witness(s, 0.6).value, 1.0 + 1e-6);
    }
  }
}

}  // namespace
}  // namespace cvsn
