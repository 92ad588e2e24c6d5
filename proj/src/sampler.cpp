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

#include "cvsn/sampler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace cvsn {

namespace {

constexpr double kTwoOverPi = 2.0 * std::numbers::inv_pi;
const double kSqrtTwoOverPi = std::sqrt(kTwoOverPi);
const cplx kEighthTurn = std::polar(1.0, std::numbers::pi / 4.0);
// Statistical errors enter the certified budget at this many standard errors.
constexpr double kCoverage = 3.0;

double checked_sigma_z(double z) {
  if (!(std::abs(z) <= 1.0 + 1e-9)) {
    throw NumericalInconsistency("|<sigma_z>| = " + std::to_string(std::abs(z)) + " exceeds 1");
  }
  return std::clamp(z, -1.0, 1.0);
}

std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(splitmix64(seed)); }

// Counts of (++, +-, -+, --) by sequential binomial draws.
std::array<long, 4> multinomial(long n, std::array<double, 4> p, std::mt19937_64& rng) {
  std::array<long, 4> counts{0, 0, 0, 0};
  long left = n;
  double mass = 1.0;
  for (int k = 0; k < 3 && left > 0; ++k) {
    const double q = mass > 0.0 ? std::clamp(p[k] / mass, 0.0, 1.0) : 0.0;
    counts[k] = std::binomial_distribution<long>(left, q)(rng);
    left -= counts[k];
    mass -= p[k];
  }
  counts[3] = left;
  return counts;
}

// (sigma_z^A, sigma_z^B, sigma_z^A sigma_z^B) expectations at one node.
std::array<double, 3> two_ancilla_moments(const CVState& state, cplx alpha, cplx beta) {
  const NodeChi c = node_chi(state, alpha, beta);
  return {checked_sigma_z((kEighthTurn * c.local_a).real()),
          checked_sigma_z((kEighthTurn * c.local_b).real()),
          checked_sigma_z(0.5 * (c.joint_minus.real() - c.joint_plus.imag()))};
}

EstimatorResult mean_estimate(double m, long n, double scale) {
  const double var = n > 1 ? std::max(0.0, 1.0 - m * m) / (n - 1) : 1.0;
  return {scale * m, scale * std::sqrt(var), n};
}

EstimatorResult square_estimate(double m, long n, double scale2) {
  const double v = std::max(0.0, 1.0 - m * m) / (n - 1);
  return {scale2 * (m * m - v), scale2 * std::sqrt(4.0 * m * m * v + 2.0 * v * v), n};
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double exact_sigma_z_single(const CVState& state, Mode mode, cplx alpha) {
  const cplx c = mode == Mode::A ? chi(state, alpha, 0.0) : chi(state, 0.0, alpha);
  return checked_sigma_z((kEighthTurn * c).real());
}

double exact_sigma_z_joint(const CVState& state, cplx alpha, const PhaseMap& f) {
  const cplx beta = f(alpha);
  const cplx plus = chi(state, alpha, beta);
  const cplx minus = chi(state, alpha, -beta);
  // (1/4)<i D(x)D + D(x)D^dag + D^dag(x)D - i D^dag(x)D^dag>
  return checked_sigma_z(0.5 * (minus.real() - plus.imag()));
}

TwoAncillaSample sample_two_ancilla_full(const CVState& state, cplx alpha, const PhaseMap& f,
                                         long shots, std::uint64_t seed) {
  if (shots < 2) throw std::invalid_argument("sample_two_ancilla: shots must be >= 2");
  const auto [za, zb, zab] = two_ancilla_moments(state, alpha, f(alpha));
  std::array<double, 4> p{};
  const std::array<std::array<int, 2>, 4> outcomes{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  for (int k = 0; k < 4; ++k) {
    const double sa = outcomes[k][0];
    const double sb = outcomes[k][1];
    p[k] = 0.25 * (1.0 + sa * za + sb * zb + sa * sb * zab);
    if (p[k] < -1e-9) {
      throw NumericalInconsistency("negative two-ancilla outcome probability " +
                                   std::to_string(p[k]));
    }
    p[k] = std::max(p[k], 0.0);
  }

  std::mt19937_64 rng = make_rng(seed);
  const auto counts = multinomial(shots, p, rng);
  const double n = static_cast<double>(shots);
  double ma = 0.0;
  double mb = 0.0;
  double mab = 0.0;
  for (int k = 0; k < 4; ++k) {
    ma += counts[k] * outcomes[k][0] / n;
    mb += counts[k] * outcomes[k][1] / n;
    mab += counts[k] * outcomes[k][0] * outcomes[k][1] / n;
  }
  // Influence function of mean(sA sB) - mean(sA) mean(sB).
  double var = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double sa = outcomes[k][0];
    const double sb = outcomes[k][1];
    const double psi = sa * sb - mab - mb * (sa - ma) - ma * (sb - mb);
    var += counts[k] * psi * psi;
  }
  var /= n - 1.0;

  TwoAncillaSample out;
  out.x = {kTwoOverPi * (mab - ma * mb), kTwoOverPi * std::sqrt(var / n), shots};
  out.q_a = mean_estimate(ma, shots, kSqrtTwoOverPi);
  out.q_b = mean_estimate(mb, shots, kSqrtTwoOverPi);
  out.q_a_sq = square_estimate(ma, shots, kTwoOverPi);
  out.q_b_sq = square_estimate(mb, shots, kTwoOverPi);
  return out;
}

EstimatorResult sample_two_ancilla(const CVState& state, cplx alpha, const PhaseMap& f,
                                   long shots, std::uint64_t seed) {
  return sample_two_ancilla_full(state, alpha, f, shots, seed).x;
}

EstimatorResult sample_single_ancilla(const CVState& state, cplx alpha, const PhaseMap& f,
                                      long shots, std::uint64_t seed, AncillaCoupling coupling) {
  if (shots < 1) throw std::invalid_argument("sample_single_ancilla: shots must be >= 1");
  double z = 0.0;
  double scale = kTwoOverPi;
  if (coupling == AncillaCoupling::Both) {
    z = exact_sigma_z_joint(state, alpha, f);
  } else {
    // With one displacement replaced by 1: <sigma_z> = (Re chi - Im chi) / 2.
    const cplx c = coupling == AncillaCoupling::OnlyA ? chi(state, alpha, 0.0)
                                                      : chi(state, 0.0, f(alpha));
    z = checked_sigma_z(0.5 * (c.real() - c.imag()));
    scale = 2.0 / std::sqrt(std::numbers::pi);
  }
  std::mt19937_64 rng = make_rng(seed);
  const long plus = std::binomial_distribution<long>(shots, 0.5 * (1.0 + z))(rng);
  const double m = (2.0 * plus - shots) / static_cast<double>(shots);
  return mean_estimate(m, shots, scale);
}

WitnessReport sampled_witness(const CVState& state, const PhaseMap& f, const QuadratureConfig& cfg,
                              long shots_per_node, std::uint64_t seed, bool exact) {
  if (exact) return nonlinear_witness(state, f, cfg);
  if (shots_per_node < 100) throw std::invalid_argument("sampled_witness: shots_per_node must be >= 100");
  require_unit_jacobian(f);
  const QuadratureConfig c = resolve_config(cfg, state, f);
  c.validate();
  const PolarGrid grid = polar_grid(c.n_radial, c.n_angular, *c.r_max);
  const auto n = static_cast<std::ptrdiff_t>(grid.nodes.size());
  std::vector<TwoAncillaSample> samples(grid.nodes.size());
  const std::uint64_t base = splitmix64(seed);

#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    samples[i] = sample_two_ancilla_full(state, grid.nodes[i], f, shots_per_node,
                                         base + static_cast<std::uint64_t>(i));
  }

  struct Sum {
    double full = 0.0;
    double half = 0.0;
    double var = 0.0;
  };
  Sum sx, sa, sb;
  double bias = 0.0;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double w = grid.weights[i];
    const bool even = (i % c.n_angular) % 2 == 0;
    auto add = [&](Sum& s, double v, double se) {
      s.full += w * v;
      if (even) s.half += 2.0 * w * v;
      s.var += w * w * se * se;
    };
    const TwoAncillaSample& t = samples[i];
    add(sx, std::abs(t.x.estimate), t.x.std_error);
    add(sa, t.q_a_sq.estimate, t.q_a_sq.std_error);
    add(sb, t.q_b_sq.estimate, t.q_b_sq.std_error);
    // E|X^| - |X| <= se sqrt(2/pi), attained at X = 0.
    if (std::abs(t.x.estimate) < 3.0 * t.x.std_error) bias += w * t.x.std_error * kSqrtTwoOverPi;
  }
  auto to_result = [](const Sum& s, double extra) {
    IntegralResult r;
    r.value = s.full;
    r.error_estimate =
        extra + std::hypot(kCoverage * std::sqrt(s.var), std::abs(s.full - s.half));
    r.converged = true;
    r.level_values = {s.half, s.full};
    r.level_errors = {0.0, r.error_estimate};
    return r;
  };
  NonlinearTerms terms{to_result(sx, bias), to_result(sa, 0.0), to_result(sb, 0.0)};

  auto factor = [](const IntegralResult& p, const char* mode) {
    const double v = 1.0 - p.value;
    if (v >= 0.0) return v;
    if (v > -(1e-6 + p.error_estimate)) return 0.0;
    throw NumericalInconsistency(std::string("sampled purity of mode ") + mode + " is " +
                                 std::to_string(p.value) + " > 1");
  };
  const double fa = factor(terms.purity_a, "A");
  const double fb = factor(terms.purity_b, "B");
  const double ea = terms.purity_a.error_estimate;
  const double eb = terms.purity_b.error_estimate;

  WitnessReport rep;
  rep.kind = WitnessKind::Nonlinear;
  rep.value = terms.abs_x.value - std::sqrt(fa * fb) + 1.0;
  rep.error_estimate = terms.abs_x.error_estimate + std::sqrt(ea * fb + fa * eb + ea * eb);
  rep.converged = true;
  rep.certified_sn = certify(rep.value, rep.error_estimate);
  rep.terms = std::move(terms);
  return rep;
}

Povm single_mode_povm(int dim, cplx alpha) {
  const CMatrix u = truncated_displacement_unitary(dim, alpha);
  const CMatrix id = CMatrix::Identity(dim, dim);
  return {0.5 * (id - kEighthTurn * u), 0.5 * (-id - kEighthTurn * u)};
}

Povm sequential_povm(int d_a, int d_b, cplx alpha, cplx beta) {
  const CMatrix ua = truncated_displacement_unitary(d_a, alpha);
  const CMatrix ub = truncated_displacement_unitary(d_b, beta);
  const CMatrix ia = CMatrix::Identity(d_a, d_a);
  const CMatrix ib = CMatrix::Identity(d_b, d_b);
  const CMatrix id = kron(ia, ib);
  const CMatrix da = kron(ua, ib);
  const CMatrix db = kron(ia, ub);
  const CMatrix dab = kron(ua, ub);
  const cplx i{0.0, 1.0};
  const double s = 1.0 / (2.0 * std::sqrt(2.0));
  return {s * (id - i * kEighthTurn * da - std::conj(kEighthTurn) * db - i * dab),
          s * (-id + i * kEighthTurn * da - std::conj(kEighthTurn) * db - i * dab)};
}

}  // namespace cvsn
