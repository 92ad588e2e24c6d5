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

#include "cvsn/witnesses.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

namespace cvsn {

namespace {

constexpr double kRadicandTol = 1e-6;

// 1 - P for an integrated purity P, clamped at 0 within tolerance.
double entropy_factor(const IntegralResult& purity, const char* mode) {
  const double v = 1.0 - purity.value;
  if (v >= 0.0) return v;
  if (v > -kRadicandTol) return 0.0;
  throw NumericalInconsistency(std::string("integrated purity of mode ") + mode + " is " +
                               std::to_string(purity.value) + " > 1");
}

WitnessReport finish(WitnessKind kind, const IntegralResult& r) {
  WitnessReport rep;
  rep.kind = kind;
  rep.value = r.value;
  rep.error_estimate = r.error_estimate;
  rep.converged = r.converged;
  rep.certified_sn = certify(rep.value, rep.error_estimate);
  return rep;
}

TruncatedOverlap component_overlap(const Component& comp, std::span<const double> coeffs,
                                   int pad) {
  const int d = static_cast<int>(coeffs.size());
  if (const auto* g = std::get_if<GaussianComponent>(&comp)) {
    if (!g->kind()) {
      throw std::invalid_argument("fidelity: Gaussian component without a family recipe");
    }
    const GaussianKind& kind = *g->kind();
    if (const auto* k = std::get_if<Tmsv>(&kind)) return tmst_overlap({k->xi, 0.0, d, pad}, coeffs);
    if (const auto* k = std::get_if<Tmst>(&kind)) {
      return tmst_overlap({k->xi, k->nbar, d, pad}, coeffs);
    }
    const auto& t = std::get<ThermalProduct>(kind);
    const double qa = t.nbar_a / (t.nbar_a + 1.0);
    const double qb = t.nbar_b / (t.nbar_b + 1.0);
    double overlap = 0.0;
    for (int n = 0; n < d; ++n) {
      overlap += coeffs[n] * coeffs[n] * (1.0 - qa) * std::pow(qa, n) * (1.0 - qb) * std::pow(qb, n);
    }
    return {overlap, (1.0 - std::pow(qa, d)) * (1.0 - std::pow(qb, d))};
  }
  const auto& f = std::get<FockComponent>(comp);
  if (f.dim_a() < d || f.dim_b() < d) {
    throw std::invalid_argument("fidelity: Fock component smaller than the target");
  }
  double kept = 0.0;
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      const int i = composite_index(n, m, f.dim_b());
      kept += f.matrix()(i, i).real();
    }
  }
  return {f.retained_trace() * fidelity_to_target(f, coeffs), f.retained_trace() * kept};
}

}  // namespace

std::string to_string(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::Linear:
      return "linear";
    case WitnessKind::LinearAbs:
      return "linear_abs";
    case WitnessKind::Nonlinear:
      return "nonlinear";
    case WitnessKind::PPT:
      return "ppt";
    case WitnessKind::Fidelity:
      return "fidelity";
  }
  return "unknown";
}

WitnessKind witness_kind_from_string(const std::string& name) {
  for (auto k : {WitnessKind::Linear, WitnessKind::LinearAbs, WitnessKind::Nonlinear,
                 WitnessKind::PPT, WitnessKind::Fidelity}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown witness kind '" + name + "'");
}

int certify(double w, double err) {
  if (!std::isfinite(w) || !std::isfinite(err) || err < 0.0) {
    throw std::invalid_argument("certify: W must be finite and err >= 0");
  }
  const double r = std::ceil(w - err);
  if (r >= static_cast<double>(INT_MAX)) return INT_MAX;
  return std::max(1, static_cast<int>(r));
}

QuadratureConfig resolve_config(const QuadratureConfig& cfg, const CVState& state,
                                const PhaseMap& f, double scale) {
  if (cfg.r_max) return cfg;
  const double stretch = 1.0 / std::min(1.0, f.min_singular_value());
  return cfg.with_rmax(auto_rmax(state) * scale * stretch);
}

WitnessReport linear_witness(const CVState& state, const PhaseMap& f, bool abs_mode,
                             const QuadratureConfig& cfg) {
  require_unit_jacobian(f);
  const QuadratureConfig c = resolve_config(cfg, state, f);
  const IntegralResult r = integrate_plane(
      [&](cplx a) {
        const double v = q_joint(state, a, f(a));
        return abs_mode ? std::abs(v) : v;
      },
      c);
  return finish(abs_mode ? WitnessKind::LinearAbs : WitnessKind::Linear, r);
}

WitnessReport nonlinear_witness(const CVState& state, const PhaseMap& f,
                                const QuadratureConfig& cfg) {
  require_unit_jacobian(f);
  const QuadratureConfig c = resolve_config(cfg, state, f);
  const auto r = integrate_plane(
      [&](cplx a, std::span<double> out) {
        const NodeExpectations e = node_expectations(state, a, f(a));
        out[0] = std::abs(e.x());
        out[1] = e.q_a * e.q_a;
        out[2] = e.q_b * e.q_b;
      },
      3, c);
  NonlinearTerms terms{r[0], r[1], r[2]};

  const double fa = entropy_factor(terms.purity_a, "A");
  const double fb = entropy_factor(terms.purity_b, "B");
  const double ea = terms.purity_a.error_estimate;
  const double eb = terms.purity_b.error_estimate;

  WitnessReport rep;
  rep.kind = WitnessKind::Nonlinear;
  rep.value = terms.abs_x.value - std::sqrt(fa * fb) + 1.0;
  // |sqrt(ab) - sqrt(a'b')| <= sqrt(|ab - a'b'|) for nonnegative a, b, a', b'.
  rep.error_estimate = terms.abs_x.error_estimate + std::sqrt(ea * fb + fa * eb + ea * eb);
  rep.converged = terms.abs_x.converged && terms.purity_a.converged && terms.purity_b.converged;
  rep.certified_sn = certify(rep.value, rep.error_estimate);
  rep.terms = std::move(terms);
  return rep;
}

WitnessReport ppt_witness(const CVState& state, double s, const PhaseMap& f,
                          const QuadratureConfig& cfg) {
  if (!(s > 0.0 && s < 2.0)) throw std::invalid_argument("ppt_witness: s must lie in (0, 2)");
  require_unit_jacobian(f);
  const double sa = std::sqrt(s);
  const double sb = std::sqrt(2.0 - s);
  const double norm = 1.0 / (s * (2.0 - s));
  const QuadratureConfig c = resolve_config(cfg, state, f, std::max(sa, 1.0));
  const IntegralResult r =
      integrate_plane([&](cplx a) { return norm * q_joint(state, a / sa, f(a) / sb); }, c);
  WitnessReport rep = finish(WitnessKind::PPT, r);
  rep.parameter = s;
  return rep;
}

std::vector<double> ppt_s_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 9; ++k) grid.push_back(0.2 * k);
  return grid;
}

WitnessReport best_ppt_witness(const CVState& state, const PhaseMap& f,
                               const QuadratureConfig& cfg, const std::vector<double>& s_grid) {
  if (s_grid.empty()) throw std::invalid_argument("best_ppt_witness: empty s grid");
  std::optional<WitnessReport> best;
  for (double s : s_grid) {
    WitnessReport rep = ppt_witness(state, s, f, cfg);
    if (!best || rep.value > best->value) best = std::move(rep);
  }
  return *best;
}

WitnessReport fidelity_certify(double fidelity, const SchmidtSpectrum& spectrum) {
  if (!(fidelity >= -1e-12 && fidelity <= 1.0 + 1e-12)) {
    throw std::invalid_argument("fidelity_certify: F outside [0, 1]");
  }
  WitnessReport rep;
  rep.kind = WitnessKind::Fidelity;
  rep.value = fidelity;
  const auto& l = spectrum.lambdas();
  double partial = 0.0;
  int r = static_cast<int>(l.size());
  for (std::size_t k = 0; k < l.size(); ++k) {
    partial += l[k];
    if (partial >= fidelity - 1e-12) {
      r = static_cast<int>(k) + 1;
      break;
    }
  }
  rep.certified_sn = std::max(r, 1);
  return rep;
}

TruncatedOverlap target_overlap(const CVState& state, std::span<const double> coeffs, int pad) {
  if (coeffs.empty()) throw std::invalid_argument("fidelity: empty target");
  TruncatedOverlap total{0.0, 0.0};
  for (const auto& comp : state.components()) {
    const double w = component_weight(comp);
    if (w == 0.0) continue;
    const TruncatedOverlap o = component_overlap(comp, coeffs, pad);
    total.overlap += w * o.overlap;
    total.retained += w * o.retained;
  }
  return total;
}

WitnessReport fidelity_witness(const CVState& state, std::span<const double> coeffs,
                               FidelityTruncation mode, int pad) {
  const TruncatedOverlap o = target_overlap(state, coeffs, pad);
  const double fidelity = mode == FidelityTruncation::Renormalized ? o.renormalized() : o.overlap;
  std::vector<double> lambdas;
  lambdas.reserve(coeffs.size());
  for (double c : coeffs) lambdas.push_back(c * c);
  WitnessReport rep = fidelity_certify(std::clamp(fidelity, 0.0, 1.0), SchmidtSpectrum(lambdas));
  rep.parameter = static_cast<double>(coeffs.size());
  return rep;
}

}  // namespace cvsn
