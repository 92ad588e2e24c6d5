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

#include "cvsn/sampler.hpp"

namespace cvsn {
namespace {

const PhaseMap kF = PhaseMap::conj_neg();

TEST(Sampler, SplitmixReferenceValue) {
  // First output of the reference splitmix64 generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_NE(splitmix64(1), splitmix64(2));
}

TEST(Sampler, PovmCompleteness) {
  const Povm p = single_mode_povm(10, {0.5, -0.3});
  EXPECT_LT((p.m0.adjoint() * p.m0 + p.m1.adjoint() * p.m1 - CMatrix::Identity(10, 10)).cwiseAbs().maxCoeff(),
            1e-13);
  const Povm q = sequential_povm(4, 3, {0.2, 0.1}, {-0.4, 0.6});
  EXPECT_LT((q.m0.adjoint() * q.m0 + q.m1.adjoint() * q.m1 - CMatrix::Identity(12, 12)).cwiseAbs().maxCoeff(),
            1e-13);
}

TEST(Sampler, SigmaZFromPovmMatchesCharacteristicFunction) {
  // <E_1 - E_0> of the sequential circuit on a state supported well inside
  // the truncation equals (pi/2) q_joint.
  const FockComponent c = build_state(Mes{2});
  const cplx a{0.3, 0.2};
  const cplx b = kF(a);
  const int d = 30;
  CMatrix rho = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) rho(i * d + j, k * d + l) = c.matrix()(i * 2 + j, k * 2 + l);
      }
    }
  }
  const Povm p = sequential_povm(d, d, a, b);
  const double z = (rho * (p.m1.adjoint() * p.m1 - p.m0.adjoint() * p.m0)).trace().real();
  EXPECT_NEAR(z, exact_sigma_z_joint(CVState(c), a, kF), 1e-8);
  EXPECT_NEAR(exact_sigma_z_joint(CVState(c), a, kF), M_PI / 2 * q_joint(CVState(c), a, b), 1e-14);
}

TEST(Sampler, SingleSigmaZIsBounded) {
  const CVState s(build_gaussian(Tmsv{1.0}));
  for (int i = 0; i < 10; ++i) {
    EXPECT_LE(std::abs(exact_sigma_z_single(s, Mode::A, std::polar(0.3 * i, 0.5 * i))), 1.0);
  }
}

TEST(Sampler, DeterministicForSeed) {
  const CVState s(build_gaussian(Tmst{0.5, 0.2}));
  const auto a = sample_two_ancilla(s, {0.2, 0.4}, kF, 5000, 99);
  const auto b = sample_two_ancilla(s, {0.2, 0.4}, kF, 5000, 99);
  const auto c = sample_two_ancilla(s, {0.2, 0.4}, kF, 5000, 100);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_NE(a.estimate, c.estimate);
  EXPECT_EQ(a.shots, 5000);
}

TEST(Sampler, RejectsTooFewShots) {
  const CVState s(build_gaussian(Tmsv{0.5}));
  EXPECT_THROW(sample_two_ancilla(s, 0.1, kF, 1, 1), std::invalid_argument);
  EXPECT_THROW(sample_single_ancilla(s, 0.1, kF, 0, 1), std::invalid_argument);
  EXPECT_THROW(sampled_witness(s, kF, {}, 50, 1), std::invalid_argument);
}

TEST(Sampler, SingleAncillaCouplings) {
  const CVState s(build_gaussian(Tmst{0.6, 0.3}));
  const cplx a{0.25, -0.1};
  const long n = 2000000;
  const auto both = sample_single_ancilla(s, a, kF, n, 5, AncillaCoupling::Both);
  const auto only_a = sample_single_ancilla(s, a, kF, n, 6, AncillaCoupling::OnlyA);
  const auto only_b = sample_single_ancilla(s, a, kF, n, 7, AncillaCoupling::OnlyB);
  EXPECT_NEAR(both.estimate, q_joint(s, a, kF(a)), 5 * both.std_error);
  EXPECT_NEAR(only_a.estimate, q_local(s, Mode::A, a), 5 * only_a.std_error);
  EXPECT_NEAR(only_b.estimate, q_local(s, Mode::B, kF(a)), 5 * only_b.std_error);
}

TEST(Sampler, TwoAncillaLocalTerms) {
  const CVState s(build_gaussian(Tmst{0.6, 0.3}));
  const cplx a{0.25, -0.1};
  const TwoAncillaSample t = sample_two_ancilla_full(s, a, kF, 1000000, 11);
  EXPECT_NEAR(t.q_a.estimate, q_local(s, Mode::A, a), 5 * t.q_a.std_error);
  EXPECT_NEAR(t.q_b.estimate, q_local(s, Mode::B, kF(a)), 5 * t.q_b.std_error);
  const double qa = q_local(s, Mode::A, a);
  EXPECT_NEAR(t.q_a_sq.estimate, qa * qa, 5 * t.q_a_sq.std_error);
}

TEST(Sampler, ExactModeIsNonlinearWitness) {
  const CVState s(build_gaussian(Tmsv{0.7}));
  const WitnessReport e = sampled_witness(s, kF, {}, 1000, 3, true);
  EXPECT_NEAR(e.value, nonlinear_witness(s).value, 1e-12);
}

TEST(Sampler, SampledWitnessCoversExact) {
  const CVState s(build_gaussian(Tmsv{1.0}));
  QuadratureConfig cfg;
  cfg.n_radial = 48;
  cfg.n_angular = 24;
  const WitnessReport w = sampled_witness(s, kF, cfg, 20000, 17);
  EXPECT_LE(std::abs(w.value - std::exp(2.0)), w.error_estimate);
  EXPECT_LE(w.certified_sn, 8);
}

}  // namespace
}  // namespace cvsn
