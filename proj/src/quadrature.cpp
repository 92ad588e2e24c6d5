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

#include "cvsn/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>

namespace cvsn {

namespace {

// Relative size of accumulated round-off, measured against sum |w f|.
constexpr double kRoundoffFloor = 1e-10;
constexpr double kAbsoluteFloor = 1e-13;

std::string node_message(cplx node, double value, std::size_t component) {
  std::ostringstream os;
  os.precision(17);
  os << "integrand is not finite (" << value << ") at node alpha = " << node.real()
     << (node.imag() < 0 ? " - " : " + ") << std::abs(node.imag()) << "i";
  if (component > 0) os << " (component " << component << ")";
  return os.str();
}

struct LevelSums {
  std::vector<double> value;
  std::vector<double> magnitude;
};

LevelSums evaluate_level(const PlaneVectorFunction& func, std::size_t count,
                         const PolarGrid& grid) {
  const auto n = static_cast<std::ptrdiff_t>(grid.nodes.size());
  std::vector<double> values(grid.nodes.size() * count);
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      std::span<double> out(values.data() + i * count, count);
      func(grid.nodes[i], out);
      for (std::size_t k = 0; k < count; ++k) {
        if (!std::isfinite(out[k])) {
          throw QuadratureError(node_message(grid.nodes[i], out[k], k), grid.nodes[i]);
        }
      }
    } catch (...) {
#pragma omp critical(cvsn_quadrature_failure)
      if (!failure) failure = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  }
  if (failure) std::rethrow_exception(failure);

  LevelSums sums{std::vector<double>(count, 0.0), std::vector<double>(count, 0.0)};
  // Sequential accumulation keeps results independent of the thread count.
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double w = grid.weights[i];
    for (std::size_t k = 0; k < count; ++k) {
      const double v = values[i * count + k];
      sums.value[k] += w * v;
      sums.magnitude[k] += std::abs(w * v);
    }
  }
  return sums;
}

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

// GSL tabulates only some orders; the rest come from a solver good to ~1e-10.
// A few Newton steps restore full precision.
std::pair<double, double> polished_node(int n, double x) {
  for (int it = 0; it < 4; ++it) {
    const auto [p, dp] = legendre_with_derivative(n, x);
    const double step = p / dp;
    x -= step;
    if (std::abs(step) < 1e-17) break;
  }
  const double dp = legendre_with_derivative(n, x).second;
  return {x, 2.0 / ((1.0 - x * x) * dp * dp)};
}

}  // namespace

void QuadratureConfig::validate() const {
  if (n_radial < 8) throw std::invalid_argument("quadrature: n_radial must be >= 8");
  if (n_angular < 8 || n_angular % 2 != 0) {
    throw std::invalid_argument("quadrature: n_angular must be even and >= 8");
  }
  if (!(rel_tol > 0.0)) throw std::invalid_argument("quadrature: rel_tol must be > 0");
  if (r_max && !(*r_max > 0.0 && std::isfinite(*r_max))) {
    throw std::invalid_argument("quadrature: r_max must be positive and finite");
  }
  if (max_refinements < 0) throw std::invalid_argument("quadrature: max_refinements must be >= 0");
}

PolarGrid polar_grid(int n_radial, int n_angular, double r_max) {
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)>
      table(gsl_integration_glfixed_table_alloc(static_cast<size_t>(n_radial)),
            &gsl_integration_glfixed_table_free);
  if (!table) throw std::runtime_error("quadrature: cannot allocate Gauss-Legendre table");

  PolarGrid grid;
  grid.nodes.reserve(static_cast<std::size_t>(n_radial) * n_angular);
  grid.weights.reserve(static_cast<std::size_t>(n_radial) * n_angular);
  const double dtheta = 2.0 * std::numbers::pi / n_angular;
  for (int i = 0; i < n_radial; ++i) {
    double x = 0.0;
    double w = 0.0;
    gsl_integration_glfixed_point(-1.0, 1.0, static_cast<size_t>(i), &x, &w, table.get());
    std::tie(x, w) = polished_node(n_radial, x);
    const double r = 0.5 * r_max * (x + 1.0);
    const double wr = 0.5 * r_max * w;
    for (int j = 0; j < n_angular; ++j) {
      grid.nodes.push_back(std::polar(r, j * dtheta));
      grid.weights.push_back(wr * r * dtheta);
    }
  }
  return grid;
}

double integrate_values(const PolarGrid& grid, std::span<const double> values) {
  if (values.size() != grid.weights.size()) {
    throw std::invalid_argument("integrate_values: size mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) acc += grid.weights[i] * values[i];
  return acc;
}

std::vector<IntegralResult> integrate_plane(const PlaneVectorFunction& func, std::size_t count,
                                            const QuadratureConfig& cfg) {
  cfg.validate();
  if (!cfg.r_max) throw std::invalid_argument("integrate_plane: r_max must be resolved");
  if (count == 0) return {};

  std::vector<IntegralResult> results(count);
  std::vector<bool> done(count, false);
  int nr = cfg.n_radial;
  int na = cfg.n_angular;
  for (int level = 0; level <= cfg.max_refinements; ++level) {
    const LevelSums sums = evaluate_level(func, count, polar_grid(nr, na, *cfg.r_max));
    bool all_done = true;
    for (std::size_t k = 0; k < count; ++k) {
      IntegralResult& res = results[k];
      const double floor = kRoundoffFloor * sums.magnitude[k] + kAbsoluteFloor;
      if (level > 0) {
        const double change = std::abs(sums.value[k] - res.value);
        res.error_estimate = std::max(change, floor);
        res.level_errors.push_back(res.error_estimate);
        if (!done[k] && change <= std::max(cfg.rel_tol * std::abs(sums.value[k]), floor)) {
          done[k] = true;
          res.converged = true;
        }
      } else {
        res.level_errors.push_back(0.0);
      }
      res.value = sums.value[k];
      res.level_values.push_back(res.value);
      all_done = all_done && done[k];
    }
    if (all_done) break;
    nr *= 2;
    na *= 2;
  }
  return results;
}

IntegralResult integrate_plane(const PlaneFunction& func, const QuadratureConfig& cfg) {
  auto wrapped = [&func](cplx a, std::span<double> out) { out[0] = func(a); };
  return integrate_plane(PlaneVectorFunction(wrapped), 1, cfg).front();
}

double auto_rmax(const CVState& state) {
  const double log_threshold = std::log(kEnvelopeThreshold);
  double r = 0.0;
  for (const auto& comp : state.components()) {
    if (const auto* g = std::get_if<GaussianComponent>(&comp)) {
      const double lambda = slowest_decay_rate(*g);
      r = std::max(r, std::sqrt(-2.0 * log_threshold / lambda));
      continue;
    }
    const auto& f = std::get<FockComponent>(comp);
    const int deg = std::max(f.dim_a(), f.dim_b()) - 1;
    // log of exp(-R^2/2) (1 + R^2)^deg / deg!, decreasing beyond its maximum.
    auto log_env = [deg](double rr) {
      return -0.5 * rr * rr + deg * std::log1p(rr * rr) - std::lgamma(deg + 1.0);
    };
    double lo = std::sqrt(std::max(0.0, 2.0 * deg - 1.0));
    double hi = std::max(lo, 1.0);
    while (log_env(hi) > log_threshold) hi *= 2.0;
    while (hi - lo > 1e-6 * hi) {
      const double mid = 0.5 * (lo + hi);
      (log_env(mid) > log_threshold ? lo : hi) = mid;
    }
    r = std::max(r, hi);
  }
  return r;
}

}  // namespace cvsn
