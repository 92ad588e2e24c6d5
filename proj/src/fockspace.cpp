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

#include "cvsn/fockspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace cvsn {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-10;
constexpr double kPositivityTol = 1e-10;
// Eigenvalues below this are dropped from the factored representation.
constexpr double kFactorCutoff = 1e-14;

void check_index(int n, const char* what) {
  if (n < 0) {
    throw std::invalid_argument(std::string(what) + " must be nonnegative");
  }
  if (n > kMaxFockIndex) {
    throw std::out_of_range(std::string(what) + " = " + std::to_string(n) +
                            " exceeds the Fock index cap " +
                            std::to_string(kMaxFockIndex));
  }
}

// Log-magnitude and phase of the n >= m element without the Laguerre factor.
cplx lower_prefactor(int n, int m, double abs_alpha, double arg_alpha, double x) {
  const int k = n - m;
  const double log_mag = -0.5 * x + 0.5 * (std::lgamma(m + 1.0) - std::lgamma(n + 1.0)) +
                         (k > 0 ? k * std::log(abs_alpha) : 0.0);
  return std::polar(std::exp(log_mag), k * arg_alpha);
}

}  // namespace

double laguerre(int n, double k, double x) {
  if (n < 0) throw std::invalid_argument("laguerre: negative degree");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + k - x;
  for (int j = 1; j < n; ++j) {
    const double next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

cplx displacement_matrix_element(int n, int m, cplx alpha) {
  check_index(n, "n");
  check_index(m, "m");
  if (n < m) {
    // <n|D(a)|m> = (-1)^{m-n} conj(<m|D(a)|n>)
    const cplx upper = std::conj(displacement_matrix_element(m, n, alpha));
    return ((m - n) % 2 == 0) ? upper : -upper;
  }
  const double x = std::norm(alpha);
  if (x == 0.0) return n == m ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
  const cplx value = lower_prefactor(n, m, std::abs(alpha), std::arg(alpha), x) *
                     laguerre(m, static_cast<double>(n - m), x);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw std::overflow_error("displacement matrix element <" + std::to_string(n) + "|D|" +
                              std::to_string(m) + "> is not finite at |alpha|^2 = " +
                              std::to_string(x));
  }
  return value;
}

CMatrix displacement_matrix(int dim, cplx alpha) {
  if (dim < 1) throw std::invalid_argument("displacement_matrix: dim must be positive");
  check_index(dim - 1, "dim - 1");
  const double x = std::norm(alpha);
  if (x == 0.0) return CMatrix::Identity(dim, dim);

  const double abs_alpha = std::abs(alpha);
  const double log_abs = std::log(abs_alpha);
  const double arg_alpha = std::arg(alpha);
  std::vector<double> log_fact(dim);
  for (int i = 0; i < dim; ++i) log_fact[i] = std::lgamma(i + 1.0);

  CMatrix out(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const cplx phase = std::polar(1.0, k * arg_alpha);
    const cplx mirror = (k % 2 == 0) ? cplx{1.0, 0.0} : cplx{-1.0, 0.0};
    // Degree recurrence of L_m^{(k)}(x) along the k-th subdiagonal.
    double prev = 0.0;
    double cur = 1.0;
    for (int m = 0; m + k < dim; ++m) {
      if (m == 1) {
        prev = 1.0;
        cur = 1.0 + k - x;
      } else if (m > 1) {
        const double next =
            ((2.0 * (m - 1) + 1.0 + k - x) * cur - (m - 1 + k) * prev) / static_cast<double>(m);
        prev = cur;
        cur = next;
      }
      const int n = m + k;
      const double mag =
          std::exp(-0.5 * x + 0.5 * (log_fact[m] - log_fact[n]) + k * log_abs) * cur;
      const cplx value = mag * phase;
      if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        throw std::overflow_error("displacement_matrix: non-finite element at |alpha|^2 = " +
                                  std::to_string(x));
      }
      out(n, m) = value;
      if (k > 0) out(m, n) = mirror * std::conj(value);
    }
  }
  return out;
}

CMatrix truncated_displacement_unitary(int dim, cplx alpha) {
  if (dim < 1) throw std::invalid_argument("truncated_displacement_unitary: dim must be positive");
  CMatrix generator = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    const double s = std::sqrt(static_cast<double>(n));
    generator(n, n - 1) = alpha * s;              // alpha a^dag
    generator(n - 1, n) = -std::conj(alpha) * s;  // -conj(alpha) a
  }
  return generator.exp();
}

std::vector<double> thermal_populations(double nbar, int dim) {
  if (nbar < 0.0) throw std::invalid_argument("thermal_populations: nbar must be >= 0");
  if (dim < 1) throw std::invalid_argument("thermal_populations: dim must be positive");
  std::vector<double> p(dim, 0.0);
  const double q = nbar / (nbar + 1.0);
  double term = 1.0;
  for (int n = 0; n < dim; ++n) {
    p[n] = term;
    term *= q;
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= total;
  return p;
}

std::vector<double> tmsv_coefficients(double xi, int dim) {
  if (xi < 0.0) throw std::invalid_argument("tmsv_coefficients: xi must be >= 0");
  if (dim < 1) throw std::invalid_argument("tmsv_coefficients: dim must be positive");
  const double t = std::tanh(xi);
  std::vector<double> c(dim, 0.0);
  double term = 1.0;
  double norm2 = 0.0;
  for (int n = 0; n < dim; ++n) {
    c[n] = term;
    norm2 += term * term;
    term *= t;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& v : c) v *= inv;
  return c;
}

SchmidtSpectrum::SchmidtSpectrum(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
  if (lambdas_.empty()) throw std::invalid_argument("SchmidtSpectrum: empty spectrum");
  for (double& l : lambdas_) {
    if (l < -1e-12) throw std::invalid_argument("SchmidtSpectrum: negative coefficient");
    l = std::max(l, 0.0);
  }
  std::sort(lambdas_.begin(), lambdas_.end(), std::greater<>());
}

SchmidtSpectrum SchmidtSpectrum::flat(int d) {
  if (d < 1) throw std::invalid_argument("SchmidtSpectrum::flat: d must be positive");
  return SchmidtSpectrum(std::vector<double>(d, 1.0 / d));
}

double SchmidtSpectrum::sum() const {
  return std::accumulate(lambdas_.begin(), lambdas_.end(), 0.0);
}

// ---------------------------------------------------------------------------
// FockComponent

struct FockComponent::Data {
  enum class Mode { kDiagonal, kPaired, kFactored, kDense };

  CMatrix rho;
  int d_a = 0;
  int d_b = 0;
  double weight = 1.0;
  bool warning = false;
  double retained = 1.0;
  CMatrix rho_a;
  CMatrix rho_b;

  Mode mode = Mode::kDense;
  Eigen::VectorXd diagonal;
  // <nn|rho|mm> when rho lives on span{|nn>}.
  CMatrix paired;
  // sqrt(p_k) * psi_k reshaped to d_a x d_b.
  std::vector<CMatrix> factors;
};

FockComponent::FockComponent(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

FockComponent FockComponent::make(CMatrix rho, int d_a, int d_b, double weight, bool warning,
                                  double retained) {
  auto data = std::make_shared<Data>();
  const int dim = d_a * d_b;
  data->d_a = d_a;
  data->d_b = d_b;
  data->weight = weight;
  data->warning = warning;
  data->retained = retained;

  data->rho_a = CMatrix::Zero(d_a, d_a);
  data->rho_b = CMatrix::Zero(d_b, d_b);
  for (int n = 0; n < d_a; ++n) {
    for (int np = 0; np < d_a; ++np) {
      data->rho_a(n, np) = rho.block(n * d_b, np * d_b, d_b, d_b).trace();
    }
    data->rho_b += rho.block(n * d_b, n * d_b, d_b, d_b);
  }

  const bool diagonal = (rho - CMatrix(rho.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  const int d_min = std::min(d_a, d_b);
  bool paired = true;
  for (int i = 0; i < dim && paired; ++i) {
    for (int j = 0; j < dim; ++j) {
      const bool on_pairs = i / d_b == i % d_b && j / d_b == j % d_b;
      if (!on_pairs && rho(i, j) != cplx{0.0, 0.0}) {
        paired = false;
        break;
      }
    }
  }
  if (diagonal) {
    data->mode = Data::Mode::kDiagonal;
    data->diagonal = rho.diagonal().real();
  } else if (paired) {
    data->mode = Data::Mode::kPaired;
    data->paired.resize(d_min, d_min);
    for (int n = 0; n < d_min; ++n) {
      for (int m = 0; m < d_min; ++m) {
        data->paired(n, m) = rho(composite_index(n, n, d_b), composite_index(m, m, d_b));
      }
    }
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho);
    std::vector<int> keep;
    for (int i = 0; i < dim; ++i) {
      if (eig.eigenvalues()(i) > kFactorCutoff) keep.push_back(i);
    }
    const long rank = static_cast<long>(keep.size());
    if (rank * (d_a + d_b) < static_cast<long>(d_a) * d_b) {
      data->mode = Data::Mode::kFactored;
      for (int i : keep) {
        const double s = std::sqrt(eig.eigenvalues()(i));
        CMatrix psi(d_a, d_b);
        for (int n = 0; n < d_a; ++n) {
          for (int m = 0; m < d_b; ++m) {
            psi(n, m) = s * eig.eigenvectors()(composite_index(n, m, d_b), i);
          }
        }
        data->factors.push_back(std::move(psi));
      }
    }
  }
  data->rho = std::move(rho);
  return FockComponent(std::move(data));
}

FockComponent FockComponent::from_density_matrix(const CMatrix& rho, int d_a, int d_b,
                                                 double weight) {
  if (d_a < 1 || d_b < 1) throw std::invalid_argument("FockComponent: dims must be positive");
  const int dim = d_a * d_b;
  if (rho.rows() != dim || rho.cols() != dim) {
    throw std::invalid_argument("FockComponent: matrix is not (d_a*d_b) x (d_a*d_b)");
  }
  if (weight < 0.0 || weight > 1.0) throw std::invalid_argument("FockComponent: weight outside [0,1]");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw std::invalid_argument("FockComponent: matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > kTraceTol) {
    throw std::invalid_argument("FockComponent: trace differs from 1");
  }
  CMatrix herm = 0.5 * (rho + rho.adjoint());
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<CMatrix>(herm, Eigen::EigenvaluesOnly)
                                 .eigenvalues();
  if (ev.minCoeff() < -kPositivityTol) {
    throw std::invalid_argument("FockComponent: matrix has a negative eigenvalue " +
                                std::to_string(ev.minCoeff()));
  }
  return make(std::move(herm), d_a, d_b, weight, false);
}

FockComponent FockComponent::from_pure(const CMatrix& coefficients, double weight) {
  const int d_a = static_cast<int>(coefficients.rows());
  const int d_b = static_cast<int>(coefficients.cols());
  if (d_a < 1 || d_b < 1) throw std::invalid_argument("FockComponent: empty coefficient matrix");
  if (weight < 0.0 || weight > 1.0) throw std::invalid_argument("FockComponent: weight outside [0,1]");
  const double norm = coefficients.norm();
  if (norm == 0.0) throw std::invalid_argument("FockComponent: zero vector");
  CVector psi(d_a * d_b);
  for (int n = 0; n < d_a; ++n) {
    for (int m = 0; m < d_b; ++m) psi(composite_index(n, m, d_b)) = coefficients(n, m) / norm;
  }
  return make(psi * psi.adjoint(), d_a, d_b, weight, false);
}

int FockComponent::dim_a() const { return data_->d_a; }
int FockComponent::dim_b() const { return data_->d_b; }
double FockComponent::weight() const { return data_->weight; }
const CMatrix& FockComponent::matrix() const { return data_->rho; }
CMatrix FockComponent::reduced_a() const { return data_->rho_a; }
CMatrix FockComponent::reduced_b() const { return data_->rho_b; }
bool FockComponent::truncation_warning() const { return data_->warning; }
double FockComponent::retained_trace() const { return data_->retained; }

FockComponent FockComponent::with_weight(double weight) const {
  if (weight < 0.0 || weight > 1.0) throw std::invalid_argument("FockComponent: weight outside [0,1]");
  auto copy = std::make_shared<Data>(*data_);
  copy->weight = weight;
  return FockComponent(std::move(copy));
}

cplx FockComponent::expectation(const CMatrix& d_a_full, const CMatrix& d_b_full) const {
  const Data& s = *data_;
  const auto da = d_a_full.topLeftCorner(s.d_a, s.d_a);
  const auto db = d_b_full.topLeftCorner(s.d_b, s.d_b);
  cplx acc{0.0, 0.0};
  switch (s.mode) {
    case Data::Mode::kDiagonal:
      for (int n = 0; n < s.d_a; ++n) {
        for (int m = 0; m < s.d_b; ++m) {
          acc += s.diagonal(composite_index(n, m, s.d_b)) * da(n, n) * db(m, m);
        }
      }
      break;
    case Data::Mode::kPaired:
      // tr(rho D_a (x) D_b) = sum_{n,m} <nn|rho|mm> <m|D_a|n> <m|D_b|n>.
      acc = s.paired.cwiseProduct(
                     da.topLeftCorner(s.paired.rows(), s.paired.rows()).transpose().cwiseProduct(
                         db.topLeftCorner(s.paired.rows(), s.paired.rows()).transpose()))
                .sum();
      break;
    case Data::Mode::kFactored:
      for (const CMatrix& psi : s.factors) {
        acc += (psi.conjugate().cwiseProduct(da * psi * db.transpose())).sum();
      }
      break;
    case Data::Mode::kDense:
      for (int n = 0; n < s.d_a; ++n) {
        for (int np = 0; np < s.d_a; ++np) {
          const cplx a = da(np, n);
          if (a == cplx{0.0, 0.0}) continue;
          acc += a * s.rho.block(n * s.d_b, np * s.d_b, s.d_b, s.d_b)
                         .cwiseProduct(db.transpose())
                         .sum();
        }
      }
      break;
  }
  return acc;
}

cplx FockComponent::expectation_a(const CMatrix& d_a_full) const {
  const auto da = d_a_full.topLeftCorner(data_->d_a, data_->d_a);
  return data_->rho_a.cwiseProduct(da.transpose()).sum();
}

cplx FockComponent::expectation_b(const CMatrix& d_b_full) const {
  const auto db = d_b_full.topLeftCorner(data_->d_b, data_->d_b);
  return data_->rho_b.cwiseProduct(db.transpose()).sum();
}

// ---------------------------------------------------------------------------
// State factories

namespace {

// The squeezing unitary conserves n1 - n2, so it acts one difference sector
// at a time; sector delta holds |j + shift_a, j + shift_b>. Elements come
// from the disentangled form
//   U = exp(t a^dag b^dag) cosh(xi)^-(n_a + n_b + 1) exp(-t a b),  t = tanh xi,
// so they are exact: `pad` only limits the thermal input levels. u is
// rows x len with u(j, j0) = <j| U |j0>.
struct TmstSector {
  TmstSector(double xi, int pad, int delta, int rows)
      : shift_a(std::max(delta, 0)), shift_b(std::max(-delta, 0)), len(pad - std::abs(delta)) {
    rows = std::min(rows, len);
    u = Eigen::MatrixXd::Zero(std::max(rows, 0), std::max(len, 0));
    if (xi == 0.0) {
      for (int j = 0; j < rows; ++j) u(j, j) = 1.0;
      return;
    }
    const int top = pad + 1;
    std::vector<long double> lf(top + 1, 0.0L);
    for (int n = 1; n <= top; ++n) lf[n] = lf[n - 1] + std::log(static_cast<long double>(n));
    const long double lt = std::log(static_cast<long double>(std::tanh(xi)));
    const long double lc = std::log(std::cosh(static_cast<long double>(xi)));
    const int a = shift_a;
    const int b = shift_b;
    for (int j0 = 0; j0 < len; ++j0) {
      for (int j = 0; j < rows; ++j) {
        // m pairs survive the annihilation; k = j0 - m removed, l = j - m added.
        long double acc = 0.0L;
        const long double outer = 0.5L * (lf[j0 + a] + lf[j0 + b] + lf[j + a] + lf[j + b]);
        for (int m = 0; m <= std::min(j, j0); ++m) {
          const int k = j0 - m;
          const int l = j - m;
          const long double lg = (k + l) * lt - lf[k] - lf[l] + outer - lf[m + a] - lf[m + b] -
                                 (2 * m + a + b + 1) * lc;
          acc += (k % 2 ? -1.0L : 1.0L) * std::exp(lg);
        }
        u(j, j0) = static_cast<double>(acc);
      }
    }
  }

  int shift_a;
  int shift_b;
  int len;
  Eigen::MatrixXd u;
};

// Input levels for the thermal populations: enough that the dropped tail of
// each mode is below 1e-17.
int tmst_pad(const TmstFock& k) {
  if (k.pad != 0) return k.pad;
  if (k.nbar <= 0.0) return k.d;
  const double q = k.nbar / (k.nbar + 1.0);
  return k.d + static_cast<int>(std::ceil(std::log(1e-17) / std::log(q)));
}

void check_tmst(const TmstFock& k, int pad) {
  if (k.d < 1) throw std::invalid_argument("TMST: d must be >= 1");
  if (k.xi < 0.0 || k.nbar < 0.0) throw std::invalid_argument("TMST: xi and nbar must be >= 0");
  if (pad < k.d) throw std::invalid_argument("TMST: pad must be >= d");
}

}  // namespace

struct FockBuilder {
  static FockComponent operator_from(CMatrix rho, int d_a, int d_b, bool warning,
                                     double retained) {
    return FockComponent::make(std::move(rho), d_a, d_b, 1.0, warning, retained);
  }

  static double geometric_retained(double q, int dim) { return -std::expm1(dim * std::log(q)); }

  FockComponent operator()(const Mes& k) const {
    if (k.d < 1) throw std::invalid_argument("MES: d must be >= 1");
    return FockComponent::from_pure(CMatrix::Identity(k.d, k.d));
  }

  FockComponent operator()(const Thermal& k) const {
    if (k.d_a < 1 || k.d_b < 1) throw std::invalid_argument("Thermal: dims must be >= 1");
    const auto pa = thermal_populations(k.nbar_a, k.d_a);
    const auto pb = thermal_populations(k.nbar_b, k.d_b);
    CMatrix rho = CMatrix::Zero(k.d_a * k.d_b, k.d_a * k.d_b);
    for (int n = 0; n < k.d_a; ++n) {
      for (int m = 0; m < k.d_b; ++m) {
        const int i = composite_index(n, m, k.d_b);
        rho(i, i) = pa[n] * pb[m];
      }
    }
    const double qa = k.nbar_a / (k.nbar_a + 1.0);
    const double qb = k.nbar_b / (k.nbar_b + 1.0);
    return operator_from(std::move(rho), k.d_a, k.d_b, false,
                         geometric_retained(qa, k.d_a) * geometric_retained(qb, k.d_b));
  }

  FockComponent operator()(const TmsvTruncated& k) const {
    if (k.d < 1) throw std::invalid_argument("TMSV: d must be >= 1");
    const auto c = tmsv_coefficients(k.xi, k.d);
    CVector psi = CVector::Zero(k.d * k.d);
    for (int n = 0; n < k.d; ++n) psi(composite_index(n, n, k.d)) = c[n];
    const double t = std::tanh(k.xi);
    return operator_from(psi * psi.adjoint(), k.d, k.d, false, geometric_retained(t * t, k.d));
  }

  FockComponent operator()(const TmstFock& k) const {
    const int pad = tmst_pad(k);
    check_tmst(k, pad);
    const double q = k.nbar / (k.nbar + 1.0);
    const bool warning = std::pow(q, pad) > 1e-12;

    const auto p = thermal_populations(k.nbar, pad);
    const int d = k.d;
    CMatrix rho = CMatrix::Zero(d * d, d * d);

    for (int delta = -(d - 1); delta <= d - 1; ++delta) {
      const int out_len = d - std::abs(delta);
      const TmstSector sec(k.xi, pad, delta, out_len);
      for (int j0 = 0; j0 < sec.len; ++j0) {
        const double w = p[j0 + sec.shift_a] * p[j0 + sec.shift_b];
        if (w < 1e-18) continue;
        for (int j = 0; j < out_len; ++j) {
          const int row = composite_index(j + sec.shift_a, j + sec.shift_b, d);
          for (int jp = 0; jp < out_len; ++jp) {
            const int col = composite_index(jp + sec.shift_a, jp + sec.shift_b, d);
            rho(row, col) += w * sec.u(j, j0) * sec.u(jp, j0);
          }
        }
      }
    }
    const double tr = rho.trace().real();
    rho /= tr;
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return operator_from(std::move(rho), d, d, warning, tr);
  }
};

FockComponent build_state(const FockKind& kind) { return std::visit(FockBuilder{}, kind); }

TruncatedOverlap tmst_overlap(const TmstFock& k, std::span<const double> coeffs) {
  const int pad = tmst_pad(k);
  check_tmst(k, pad);
  if (coeffs.empty() || static_cast<int>(coeffs.size()) > k.d) {
    throw std::invalid_argument("tmst_overlap: target length must be in [1, d]");
  }
  const auto p = thermal_populations(k.nbar, pad);
  const int d = k.d;
  const int len = static_cast<int>(coeffs.size());
  double overlap = 0.0;
  double retained = 0.0;
  for (int delta = -(d - 1); delta <= d - 1; ++delta) {
    const int out_len = d - std::abs(delta);
    const TmstSector sec(k.xi, pad, delta, out_len);
    for (int j0 = 0; j0 < sec.len; ++j0) {
      const double w = p[j0 + sec.shift_a] * p[j0 + sec.shift_b];
      if (w < 1e-18) continue;
      double amp2 = 0.0;
      for (int j = 0; j < out_len; ++j) amp2 += sec.u(j, j0) * sec.u(j, j0);
      retained += w * amp2;
      if (delta == 0) {
        double amp = 0.0;
        for (int j = 0; j < len; ++j) amp += coeffs[j] * sec.u(j, j0);
        overlap += w * amp * amp;
      }
    }
  }
  return {overlap, retained};
}

cplx char_function_fock(const FockComponent& c, cplx alpha1, cplx alpha2) {
  return c.expectation(displacement_matrix(c.dim_a(), alpha1),
                       displacement_matrix(c.dim_b(), alpha2));
}

double fidelity_to_target(const FockComponent& c, std::span<const double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("fidelity_to_target: empty target");
  if (static_cast<int>(coeffs.size()) > std::min(c.dim_a(), c.dim_b())) {
    throw std::invalid_argument("fidelity_to_target: target longer than the truncated space");
  }
  double norm2 = 0.0;
  for (double v : coeffs) norm2 += v * v;
  if (std::abs(norm2 - 1.0) > 1e-10) {
    throw std::invalid_argument("fidelity_to_target: target coefficients are not normalized");
  }
  const int db = c.dim_b();
  double f = 0.0;
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    for (std::size_t m = 0; m < coeffs.size(); ++m) {
      const int i = composite_index(static_cast<int>(n), static_cast<int>(n), db);
      const int j = composite_index(static_cast<int>(m), static_cast<int>(m), db);
      f += coeffs[n] * coeffs[m] * c.matrix()(i, j).real();
    }
  }
  return f;
}

double purity_fock(const FockComponent& c) { return c.matrix().squaredNorm(); }

}  // namespace cvsn
