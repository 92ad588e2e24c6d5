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

#include "cvsn/oracles.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace cvsn {

namespace {

void check_cap(const FockComponent& c, const char* who) {
  if (static_cast<long>(c.dim_a()) * c.dim_b() > kOracleDimensionCap) {
    throw std::invalid_argument(std::string(who) + ": d_a * d_b exceeds " +
                                std::to_string(kOracleDimensionCap));
  }
}

// JacobiSVD, not BDCSVD: Eigen 3.4.0's divide-and-conquer path loses
// about 1e-2 on some rank-one realigned matrices above 16 columns.
double trace_norm(const CMatrix& m) {
  return Eigen::JacobiSVD<CMatrix>(m).singularValues().sum();
}

CMatrix random_unit_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix v(n, 1);
  for (int i = 0; i < n; ++i) v(i, 0) = {g(rng), g(rng)};
  return v / v.norm();
}

CVState two_fock(double p, const FockComponent& a, const FockComponent& b) {
  return CVState::mix(p, CVState(a), CVState(b));
}

}  // namespace

double realignment_trace_norm(const FockComponent& c) {
  check_cap(c, "realignment_trace_norm");
  const int da = c.dim_a();
  const int db = c.dim_b();
  const CMatrix& rho = c.matrix();
  CMatrix r(da * da, db * db);
  for (int n = 0; n < da; ++n) {
    for (int m = 0; m < da; ++m) {
      for (int np = 0; np < db; ++np) {
        for (int mp = 0; mp < db; ++mp) {
          r(n * da + m, np * db + mp) = rho(composite_index(n, np, db), composite_index(m, mp, db));
        }
      }
    }
  }
  return trace_norm(r);
}

double pt_trace_norm(const FockComponent& c) {
  check_cap(c, "pt_trace_norm");
  const int da = c.dim_a();
  const int db = c.dim_b();
  const CMatrix& rho = c.matrix();
  CMatrix t(da * db, da * db);
  for (int n = 0; n < da; ++n) {
    for (int m = 0; m < da; ++m) {
      t.block(n * db, m * db, db, db) = rho.block(m * db, n * db, db, db);
    }
  }
  const Eigen::VectorXd ev =
      Eigen::SelfAdjointEigenSolver<CMatrix>(t, Eigen::EigenvaluesOnly).eigenvalues();
  return ev.cwiseAbs().sum();
}

double lemma1_bound(const SchmidtSpectrum& spectrum) {
  double root_sum = 0.0;
  double sq_sum = 0.0;
  for (double l : spectrum.lambdas()) {
    const double v = std::max(l, 0.0);
    root_sum += std::sqrt(v);
    sq_sum += v * v;
  }
  return root_sum * root_sum - sq_sum;
}

SchmidtSpectrum schmidt_spectrum(const CMatrix& coefficients) {
  const Eigen::VectorXd sv = Eigen::JacobiSVD<CMatrix>(coefficients).singularValues();
  std::vector<double> lambdas(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) lambdas[i] = sv(i) * sv(i);
  return SchmidtSpectrum(std::move(lambdas));
}

CMatrix pure_coefficients(const FockComponent& c) {
  if (purity_fock(c) < 1.0 - 1e-10) {
    throw std::invalid_argument("pure_coefficients: component is not pure");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(c.matrix());
  const Eigen::Index top = eig.eigenvalues().size() - 1;
  const CVector v = eig.eigenvectors().col(top);
  CMatrix psi(c.dim_a(), c.dim_b());
  for (int n = 0; n < c.dim_a(); ++n) {
    for (int m = 0; m < c.dim_b(); ++m) psi(n, m) = v(composite_index(n, m, c.dim_b()));
  }
  return psi;
}

double x_matrix_brute(const FockComponent& c) {
  const int da = c.dim_a();
  const int db = c.dim_b();
  if (da > kBruteForceDimCap || db > kBruteForceDimCap) {
    throw std::invalid_argument("x_matrix_brute: dimension above cap");
  }
  const CMatrix psi = pure_coefficients(c);
  const CMatrix rho_a = psi * psi.adjoint();
  const CMatrix rho_b = psi.transpose() * psi.conjugate();
  CMatrix x(da * da, db * db);
  for (int n = 0; n < da; ++n) {
    for (int m = 0; m < da; ++m) {
      // g_mu^dag = |m><n| on A.
      const cplx local_a = rho_a(n, m);
      for (int np = 0; np < db; ++np) {
        for (int mp = 0; mp < db; ++mp) {
          // g_nu = |n'><m'| on B.
          const cplx joint = std::conj(psi(m, np)) * psi(n, mp);
          x(n * da + m, np * db + mp) = joint - local_a * rho_b(mp, np);
        }
      }
    }
  }
  return trace_norm(x);
}

double epr_correlation(const FockComponent& c) {
  const int d = std::min(c.dim_a(), c.dim_b());
  const int db = c.dim_b();
  cplx acc{0.0, 0.0};
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) acc += c.matrix()(composite_index(n, n, db), composite_index(m, m, db));
  }
  return acc.real();
}

FockComponent combined_fock(const CVState& state) {
  int da = -1;
  int db = -1;
  CMatrix rho;
  for (const auto& comp : state.components()) {
    const auto* f = std::get_if<FockComponent>(&comp);
    if (!f) throw std::invalid_argument("combined_fock: Gaussian component");
    if (da < 0) {
      da = f->dim_a();
      db = f->dim_b();
      rho = CMatrix::Zero(da * db, da * db);
    } else if (f->dim_a() != da || f->dim_b() != db) {
      throw std::invalid_argument("combined_fock: component dimensions differ");
    }
    rho += f->weight() * f->matrix();
  }
  return FockComponent::from_density_matrix(rho, da, db);
}

std::vector<CorpusEntry> oracle_corpus() {
  std::vector<CorpusEntry> out;
  auto add = [&out](std::string name, CVState state, int sn) {
    FockComponent fock = combined_fock(state);
    out.push_back({std::move(name), std::move(state), std::move(fock), sn});
  };

  for (int d = 2; d <= 8; ++d) add("mes_d" + std::to_string(d), build_state(Mes{d}), d);
  for (double xi : {0.3, 0.7, 1.0}) {
    for (int d : {8, 16}) {
      add("tmsv_xi" + std::to_string(xi).substr(0, 3) + "_d" + std::to_string(d),
          build_state(TmsvTruncated{xi, d}), d);
    }
  }
  for (int d : {3, 5}) {
    for (double p : {0.3, 0.7}) {
      add("mes_asym_noise_d" + std::to_string(d) + "_p" + std::to_string(p).substr(0, 3),
          two_fock(p, build_state(Mes{d}), build_state(Thermal{0.5, 0.0, d, d})), d);
    }
  }
  for (double p : {0.4, 0.8}) {
    add("tmsv_sym_noise_d8_p" + std::to_string(p).substr(0, 3),
        two_fock(p, build_state(TmsvTruncated{1.0, 8}), build_state(Thermal::symmetric(0.5, 8))),
        8);
  }
  add("thermal_product_d6", build_state(Thermal{0.3, 0.8, 6, 6}), 1);
  std::mt19937_64 rng(20260101);
  for (int d : {3, 6}) {
    const CMatrix u = random_unit_vector(d, rng);
    const CMatrix v = random_unit_vector(d, rng);
    add("random_product_d" + std::to_string(d), FockComponent::from_pure(u * v.transpose()), 1);
  }
  return out;
}

}  // namespace cvsn
