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

#include "cvsn/scenario.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cvsn/sampler.hpp"

namespace cvsn::cli {

namespace {

using json = nlohmann::json;

struct FamilyInfo {
  std::vector<std::string> required;
  std::map<std::string, double> defaults;
  std::vector<std::string> options;
};

const std::map<std::string, FamilyInfo>& families() {
  static const std::map<std::string, FamilyInfo> table = {
      {"tmsv", {{"xi"}, {}, {}}},
      {"tmst", {{"xi", "nbar"}, {}, {}}},
      {"thermal", {{"nbar_a", "nbar_b"}, {}, {}}},
      {"tmsv_noise", {{"xi", "nbar", "p"}, {}, {}}},
      {"mes_noise", {{"d", "p", "nbar_a", "nbar_b"}, {{"cutoff", 0.0}}, {"noise"}}},
      {"mes", {{"d"}, {}, {}}},
      {"tmsv_fock", {{"xi", "d"}, {}, {}}},
      {"tmst_fock", {{"xi", "nbar", "d"}, {{"pad", 0.0}}, {}}},
      {"thermal_fock", {{"nbar_a", "nbar_b", "d"}, {}, {}}},
  };
  return table;
}

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
      throw ConfigError(child(path, k), "unknown field");
    }
  }
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(child(path, key), "missing required field");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
  return x;
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

int integral_param(const std::map<std::string, double>& p, const std::string& key) {
  const double v = p.at(key);
  if (std::abs(v - std::round(v)) > 1e-9) {
    throw ConfigError("/state/" + key, "must be an integer, got " + format_number(v));
  }
  return static_cast<int>(std::lround(v));
}

Eigen::MatrixXd real_matrix(const json& v, const std::string& path, int rows, int cols) {
  if (!v.is_array() || static_cast<int>(v.size()) != rows) {
    throw ConfigError(path, "expected " + std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = v[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw ConfigError(child(path, i), "expected " + std::to_string(cols) + " columns");
    }
    for (int j = 0; j < cols; ++j) m(i, j) = as_number(row[j], child(child(path, i), j));
  }
  return m;
}

CMatrix complex_matrix(const json& v, const std::string& path, int rows, int cols) {
  allow_keys(v, path, {"re", "im"});
  CMatrix m = real_matrix(require(v, path, "re"), child(path, "re"), rows, cols).cast<cplx>();
  if (v.contains("im")) {
    m += cplx{0.0, 1.0} * real_matrix(v["im"], child(path, "im"), rows, cols).cast<cplx>();
  }
  return m;
}

CVState parse_components(const json& list, const std::string& path) {
  if (!list.is_array() || list.empty()) throw ConfigError(path, "expected a non-empty array");
  std::vector<Component> comps;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& c = list[i];
    const std::string p = child(path, i);
    const std::string type = as_string(require(c, p, "type"), child(p, "type"));
    const double weight = as_number(require(c, p, "weight"), child(p, "weight"));
    try {
      if (type == "gaussian") {
        allow_keys(c, p, {"type", "weight", "gamma", "mean"});
        const Eigen::Matrix4d gamma = real_matrix(require(c, p, "gamma"), child(p, "gamma"), 4, 4);
        Eigen::Vector4d mean = Eigen::Vector4d::Zero();
        if (c.contains("mean")) {
          const json& m = c["mean"];
          if (!m.is_array() || m.size() != 4) throw ConfigError(child(p, "mean"), "expected 4 numbers");
          for (int k = 0; k < 4; ++k) mean(k) = as_number(m[k], child(child(p, "mean"), k));
        }
        comps.emplace_back(GaussianComponent::from_moments(gamma, mean, weight));
      } else if (type == "fock") {
        allow_keys(c, p, {"type", "weight", "d_a", "d_b", "rho", "psi"});
        const int da = as_int(require(c, p, "d_a"), child(p, "d_a"));
        const int db = as_int(require(c, p, "d_b"), child(p, "d_b"));
        if (da < 1 || db < 1 || da * db > 4096) throw ConfigError(p, "dimensions out of range");
        if (c.contains("rho") == c.contains("psi")) {
          throw ConfigError(p, "give exactly one of rho and psi");
        }
        if (c.contains("rho")) {
          comps.emplace_back(FockComponent::from_density_matrix(
              complex_matrix(c["rho"], child(p, "rho"), da * db, da * db), da, db, weight));
        } else {
          comps.emplace_back(
              FockComponent::from_pure(complex_matrix(c["psi"], child(p, "psi"), da, db), weight));
        }
      } else {
        throw ConfigError(child(p, "type"), "expected gaussian or fock");
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(p, e.what());
    }
  }
  try {
    return CVState(std::move(comps));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

StateSpec parse_state(const json& s) {
  const std::string path = "/state";
  if (!s.is_object()) throw ConfigError(path, "expected an object");
  StateSpec spec;
  if (s.contains("components")) {
    allow_keys(s, path, {"components"});
    spec.family = "components";
    spec.explicit_state = parse_components(s["components"], child(path, "components"));
    return spec;
  }
  spec.family = as_string(require(s, path, "family"), child(path, "family"));
  const auto it = families().find(spec.family);
  if (it == families().end()) throw ConfigError(child(path, "family"), "unknown family '" + spec.family + "'");
  const FamilyInfo& info = it->second;
  spec.params = info.defaults;
  for (const auto& [k, v] : s.items()) {
    if (k == "family") continue;
    const std::string p = child(path, k);
    if (std::find(info.options.begin(), info.options.end(), k) != info.options.end()) {
      spec.options[k] = as_string(v, p);
    } else if (std::find(info.required.begin(), info.required.end(), k) != info.required.end() ||
               info.defaults.count(k)) {
      spec.params[k] = as_number(v, p);
    } else {
      throw ConfigError(p, "unknown field for family '" + spec.family + "'");
    }
  }
  for (const auto& k : info.required) {
    if (!spec.params.count(k)) throw ConfigError(child(path, k), "missing required field");
  }
  if (spec.options.count("noise")) {
    const std::string& n = spec.options["noise"];
    if (n != "dimension" && n != "cutoff" && n != "gaussian") {
      throw ConfigError(child(path, "noise"), "expected dimension, cutoff or gaussian");
    }
  }
  return spec;
}

std::vector<WitnessSpec> parse_witnesses(const json& list, const StateSpec& state) {
  const std::string path = "/witnesses";
  if (!list.is_array() || list.empty()) throw ConfigError(path, "expected a non-empty array");
  std::vector<WitnessSpec> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& w = list[i];
    const std::string p = child(path, i);
    WitnessSpec spec;
    try {
      spec.kind = witness_kind_from_string(as_string(require(w, p, "kind"), child(p, "kind")));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(child(p, "kind"), e.what());
    }
    if (spec.kind == WitnessKind::PPT) {
      allow_keys(w, p, {"kind", "s"});
      if (w.contains("s")) {
        spec.s = as_number(w["s"], child(p, "s"));
        if (!(*spec.s > 0.0 && *spec.s < 2.0)) throw ConfigError(child(p, "s"), "must lie in (0, 2)");
      }
      out.push_back(spec);
    } else if (spec.kind == WitnessKind::Fidelity) {
      allow_keys(w, p, {"kind", "d", "target", "truncation", "pad"});
      if (state.family == "components") {
        for (const auto& c : state.explicit_state->components()) {
          if (std::holds_alternative<GaussianComponent>(c)) {
            throw ConfigError(p, "fidelity needs family states or Fock components");
          }
        }
      }
      if (w.contains("target")) {
        spec.target = as_string(w["target"], child(p, "target"));
        if (spec.target != "tmsv" && spec.target != "mes" && spec.target != "auto") {
          throw ConfigError(child(p, "target"), "expected tmsv, mes or auto");
        }
      }
      if (w.contains("truncation")) {
        const std::string t = as_string(w["truncation"], child(p, "truncation"));
        if (t == "renormalized") {
          spec.truncation = FidelityTruncation::Renormalized;
        } else if (t == "exact") {
          spec.truncation = FidelityTruncation::Exact;
        } else {
          throw ConfigError(child(p, "truncation"), "expected renormalized or exact");
        }
      }
      if (w.contains("pad")) spec.pad = as_int(w["pad"], child(p, "pad"));
      const json& d = require(w, p, "d");
      const std::string dp = child(p, "d");
      auto check_d = [&](int v, const std::string& where) {
        if (v < 1 || v > 64) throw ConfigError(where, "truncation dimension must be in [1, 64]");
        return v;
      };
      if (d.is_number_integer()) {
        spec.dims = {check_d(d.get<int>(), dp)};
        out.push_back(spec);
      } else if (d.is_array()) {
        if (d.empty()) throw ConfigError(dp, "expected at least one dimension");
        for (std::size_t k = 0; k < d.size(); ++k) {
          WitnessSpec one = spec;
          one.dims = {check_d(as_int(d[k], child(dp, k)), child(dp, k))};
          out.push_back(one);
        }
      } else if (d.is_object()) {
        allow_keys(d, dp, {"min", "max"});
        const int lo = check_d(as_int(require(d, dp, "min"), child(dp, "min")), child(dp, "min"));
        const int hi = check_d(as_int(require(d, dp, "max"), child(dp, "max")), child(dp, "max"));
        if (hi < lo) throw ConfigError(dp, "max < min");
        for (int v = lo; v <= hi; ++v) spec.dims.push_back(v);
        out.push_back(spec);
      } else {
        throw ConfigError(dp, "expected an integer, a list or {min, max}");
      }
    } else {
      allow_keys(w, p, {"kind"});
      out.push_back(spec);
    }
  }
  return out;
}

PhaseMap parse_phase_map(const json& v) {
  const std::string path = "/phase_map";
  PhaseMap f = PhaseMap::conj_neg();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "conj_neg") {
      f = PhaseMap::conj_neg();
    } else if (s == "identity") {
      f = PhaseMap::identity();
    } else {
      throw ConfigError(path, "expected conj_neg, identity or {jacobian}");
    }
  } else if (v.is_object()) {
    allow_keys(v, path, {"jacobian"});
    f = PhaseMap::linear(real_matrix(require(v, path, "jacobian"), child(path, "jacobian"), 2, 2));
  } else {
    throw ConfigError(path, "expected a string or an object");
  }
  try {
    require_unit_jacobian(f);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  return f;
}

QuadratureConfig parse_quadrature(const json& q) {
  const std::string path = "/quadrature";
  if (!q.is_object()) throw ConfigError(path, "expected an object");
  allow_keys(q, path, {"n_radial", "n_angular", "r_max", "rel_tol", "max_refinements"});
  QuadratureConfig cfg;
  if (q.contains("n_radial")) cfg.n_radial = as_int(q["n_radial"], child(path, "n_radial"));
  if (q.contains("n_angular")) cfg.n_angular = as_int(q["n_angular"], child(path, "n_angular"));
  if (q.contains("rel_tol")) cfg.rel_tol = as_number(q["rel_tol"], child(path, "rel_tol"));
  if (q.contains("max_refinements")) {
    cfg.max_refinements = as_int(q["max_refinements"], child(path, "max_refinements"));
  }
  if (q.contains("r_max")) {
    const json& r = q["r_max"];
    if (r.is_string()) {
      if (r.get<std::string>() != "auto") throw ConfigError(child(path, "r_max"), "expected a number or \"auto\"");
    } else {
      cfg.r_max = as_number(r, child(path, "r_max"));
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  return cfg;
}

std::vector<double> parse_axis_values(const json& a, const std::string& path) {
  if (a.contains("values")) {
    allow_keys(a, path, {"parameter", "values"});
    const json& v = a["values"];
    if (!v.is_array() || v.empty()) throw ConfigError(child(path, "values"), "expected a non-empty array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], child(child(path, "values"), i)));
    return out;
  }
  allow_keys(a, path, {"parameter", "min", "max", "steps"});
  const double lo = as_number(require(a, path, "min"), child(path, "min"));
  const double hi = as_number(require(a, path, "max"), child(path, "max"));
  const int steps = as_int(require(a, path, "steps"), child(path, "steps"));
  if (steps < 1) throw ConfigError(child(path, "steps"), "must be >= 1");
  std::vector<double> out;
  for (int i = 0; i < steps; ++i) out.push_back(steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1));
  return out;
}

void check_parameter(const StateSpec& state, const std::string& name, const std::string& path) {
  if (!state.params.count(name)) {
    throw ConfigError(path, "'" + name + "' is not a parameter of the state");
  }
}

std::uint64_t as_seed(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ConfigError(path, "expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

// ---------------------------------------------------------------------------
// Evaluation

struct Point {
  std::map<std::string, double> params;
  std::vector<double> axis_values;
};

std::vector<Point> expand_sweep(const Scenario& sc, bool use_sweep) {
  std::vector<Point> points{{sc.state.params, {}}};
  if (!use_sweep) return points;
  for (const auto& axis : sc.sweep) {
    std::vector<Point> next;
    for (const auto& p : points) {
      for (double v : axis.values) {
        Point q = p;
        q.params[axis.parameter] = v;
        q.axis_values.push_back(v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

std::vector<double> target_coefficients(const WitnessSpec& w, const StateSpec& state,
                                        const std::map<std::string, double>& params, int d) {
  std::string target = w.target;
  if (target == "auto") target = params.count("xi") ? "tmsv" : "mes";
  if (target == "tmsv") {
    if (!params.count("xi")) throw ConfigError("/witnesses", "tmsv target needs a state with xi");
    return tmsv_coefficients(params.at("xi"), d);
  }
  (void)state;
  return std::vector<double>(d, 1.0 / std::sqrt(static_cast<double>(d)));
}

WitnessReport evaluate(const Scenario& sc, const WitnessSpec& w, const CVState& state,
                       const std::map<std::string, double>& params, const QuadratureConfig& cfg) {
  switch (w.kind) {
    case WitnessKind::Linear:
      return linear_witness(state, sc.phase_map, false, cfg);
    case WitnessKind::LinearAbs:
      return linear_witness(state, sc.phase_map, true, cfg);
    case WitnessKind::Nonlinear:
      return nonlinear_witness(state, sc.phase_map, cfg);
    case WitnessKind::PPT:
      return w.s ? ppt_witness(state, *w.s, sc.phase_map, cfg)
                 : best_ppt_witness(state, sc.phase_map, cfg);
    case WitnessKind::Fidelity:
      break;
  }
  std::optional<WitnessReport> best;
  for (int d : w.dims) {
    const auto coeffs = target_coefficients(w, sc.state, params, d);
    WitnessReport rep = fidelity_witness(state, coeffs, w.truncation, w.pad);
    if (!best || rep.certified_sn > best->certified_sn) best = std::move(rep);
  }
  return *best;
}

std::string parameter_cell(const WitnessReport& r) {
  return std::isnan(r.parameter) ? "" : format_number(r.parameter);
}

QuadratureConfig effective_quadrature(const Scenario& sc, const RunOptions& opt) {
  QuadratureConfig cfg = sc.quadrature;
  if (opt.tol) cfg.rel_tol = *opt.tol;
  cfg.validate();
  return cfg;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// Runs body(i) for i < n on the OpenMP pool, rethrowing the first failure
// in index order.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Table run_points(const Scenario& sc, Command command, const RunOptions& opt) {
  const QuadratureConfig cfg = effective_quadrature(sc, opt);
  const bool use_sweep = command != Command::Witness;
  const auto points = expand_sweep(sc, use_sweep);

  Table table;
  if (use_sweep) {
    for (const auto& axis : sc.sweep) table.columns.push_back(axis.parameter);
  }
  const bool sampling = command == Command::Sample;
  std::uint64_t seed = 0;
  if (sampling) {
    if (!sc.sampling) throw ConfigError("/sampling", "the sample command needs a sampling section");
    seed = opt.seed.value_or(sc.sampling->seed);
    for (const char* c : {"witness", "parameter", "W", "error_estimate", "certified_sn", "converged",
                          "shots_per_node", "seed", "wall_time_ms"}) {
      table.columns.push_back(c);
    }
    table.note = std::string("rng=") + kRngName + " seed=" + std::to_string(seed);
  } else {
    for (const char* c : {"witness", "parameter", "W", "error_estimate", "certified_sn", "converged",
                          "wall_time_ms"}) {
      table.columns.push_back(c);
    }
  }

  const std::size_t per_point = sampling ? 1 : sc.witnesses.size();
  std::vector<std::vector<std::string>> rows(points.size() * per_point);
  parallel_for(rows.size(), [&](std::size_t task) {
    const Point& pt = points[task / per_point];
    const auto t0 = std::chrono::steady_clock::now();
    const CVState state = build_cv_state(sc.state, pt.params);
    std::vector<std::string> row;
    for (double v : pt.axis_values) row.push_back(format_number(v));
    if (sampling) {
      const std::uint64_t point_seed = splitmix64(seed + task);
      const WitnessReport r = sampled_witness(state, sc.phase_map, cfg, sc.sampling->shots_per_node,
                                              point_seed, sc.sampling->exact);
      row.insert(row.end(), {sc.sampling->exact ? "nonlinear" : "nonlinear_sampled", "",
                             format_number(r.value), format_number(r.error_estimate),
                             std::to_string(r.certified_sn), r.converged ? "1" : "0",
                             std::to_string(sc.sampling->shots_per_node),
                             std::to_string(point_seed)});
    } else {
      const WitnessSpec& w = sc.witnesses[task % per_point];
      const WitnessReport r = evaluate(sc, w, state, pt.params, cfg);
      row.insert(row.end(), {to_string(r.kind), parameter_cell(r), format_number(r.value),
                             format_number(r.error_estimate), std::to_string(r.certified_sn),
                             r.converged ? "1" : "0"});
    }
    row.push_back(format_number(opt.timestamps ? std::round(elapsed_ms(t0)) : 0.0));
    rows[task] = std::move(row);
  });
  table.rows = std::move(rows);
  return table;
}

// Smallest x in [lo, hi] with g(x) > 0, to within tol. lo if g(lo) > 0
// already; NaN if g(hi) <= 0 (level not reached in the range).
double bisect(const std::function<double(double)>& g, double lo, double hi, double tol) {
  if (g(lo) > 0.0) return lo;
  if (g(hi) <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Table run_boundary(const Scenario& sc, const RunOptions& opt) {
  const QuadratureConfig cfg = effective_quadrature(sc, opt);
  const BoundarySpec& b = *sc.boundary;
  const auto points = expand_sweep(sc, true);

  Table table;
  for (const auto& axis : sc.sweep) table.columns.push_back(axis.parameter);
  for (const std::string& c : {std::string("witness"), std::string("r"), b.parameter + "_boundary",
                              std::string("selected_d"), std::string("wall_time_ms")}) {
    table.columns.push_back(c);
  }

  const std::size_t nw = sc.witnesses.size();
  const std::size_t nl = b.levels.size();
  std::vector<std::vector<std::string>> rows(points.size() * nw * nl);
  parallel_for(rows.size(), [&](std::size_t task) {
    const Point& pt = points[task / (nw * nl)];
    const WitnessSpec& w = sc.witnesses[(task / nl) % nw];
    const int r = b.levels[task % nl];
    const auto t0 = std::chrono::steady_clock::now();
    int selected = 0;
    auto at = [&](double x) {
      auto params = pt.params;
      params[b.parameter] = x;
      return params;
    };
    std::function<double(double)> g;
    if (w.kind == WitnessKind::Fidelity) {
      // max_d (F_d - lambda_1 - ... - lambda_r): positive where some d certifies r + 1.
      g = [&](double x) {
        const auto params = at(x);
        const CVState state = build_cv_state(sc.state, params);
        double best = -std::numeric_limits<double>::infinity();
        // d <= r cannot certify r + 1; skip those unless nothing else is left.
        const bool any_above = std::any_of(w.dims.begin(), w.dims.end(), [&](int d) { return d > r; });
        for (int d : w.dims) {
          if (any_above && d <= r) continue;
          const auto coeffs = target_coefficients(w, sc.state, params, d);
          const WitnessReport rep = fidelity_witness(state, coeffs, w.truncation, w.pad);
          std::vector<double> l;
          for (double c : coeffs) l.push_back(c * c);
          std::sort(l.rbegin(), l.rend());
          double partial = 0.0;
          for (int k = 0; k < std::min<int>(r, static_cast<int>(l.size())); ++k) partial += l[k];
          if (r >= static_cast<int>(l.size())) partial = 1.0;
          const double v = rep.value - partial;
          if (v > best) {
            best = v;
            selected = d;
          }
        }
        return best;
      };
    } else {
      g = [&](double x) { return evaluate(sc, w, build_cv_state(sc.state, at(x)), at(x), cfg).value - r; };
    }
    const double x = bisect(g, b.lo, b.hi, b.tol);
    if (w.kind == WitnessKind::Fidelity && !std::isnan(x)) g(x);
    std::vector<std::string> row;
    for (double v : pt.axis_values) row.push_back(format_number(v));
    row.insert(row.end(), {to_string(w.kind), std::to_string(r), format_number(x),
                           w.kind == WitnessKind::Fidelity && !std::isnan(x) ? std::to_string(selected) : "",
                           format_number(opt.timestamps ? std::round(elapsed_ms(t0)) : 0.0)});
    rows[task] = std::move(row);
  });
  table.rows = std::move(rows);
  return table;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(std::to_string(line) + ":" + std::to_string(col), "syntax error");
  }
  if (!root.is_object()) throw ConfigError("/", "expected an object");
  allow_keys(root, "", {"$schema", "$comment", "name", "description", "state", "witnesses", "phase_map",
                        "quadrature", "sweep", "sampling", "boundary", "output"});

  Scenario sc;
  sc.name = root.contains("name") ? as_string(root["name"], "/name") : "scenario";
  sc.state = parse_state(require(root, "", "state"));
  sc.witnesses = parse_witnesses(require(root, "", "witnesses"), sc.state);
  if (root.contains("phase_map")) sc.phase_map = parse_phase_map(root["phase_map"]);
  if (root.contains("quadrature")) sc.quadrature = parse_quadrature(root["quadrature"]);

  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    if (!s.is_array()) throw ConfigError("/sweep", "expected an array");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string p = child("/sweep", i);
      SweepAxis axis;
      axis.parameter = as_string(require(s[i], p, "parameter"), child(p, "parameter"));
      check_parameter(sc.state, axis.parameter, child(p, "parameter"));
      if (!seen.insert(axis.parameter).second) throw ConfigError(child(p, "parameter"), "swept twice");
      axis.values = parse_axis_values(s[i], p);
      sc.sweep.push_back(std::move(axis));
    }
  }

  if (root.contains("sampling")) {
    const json& s = root["sampling"];
    const std::string p = "/sampling";
    if (!s.is_object()) throw ConfigError(p, "expected an object");
    allow_keys(s, p, {"shots_per_node", "seed", "exact"});
    SamplingSpec spec;
    if (s.contains("shots_per_node")) {
      const json& v = s["shots_per_node"];
      if (!v.is_number_integer() || v.get<long long>() < 100) {
        throw ConfigError(child(p, "shots_per_node"), "expected an integer >= 100");
      }
      spec.shots_per_node = v.get<long>();
    }
    if (s.contains("seed")) spec.seed = as_seed(s["seed"], child(p, "seed"));
    if (s.contains("exact")) {
      if (!s["exact"].is_boolean()) throw ConfigError(child(p, "exact"), "expected a boolean");
      spec.exact = s["exact"].get<bool>();
    }
    sc.sampling = spec;
  }

  if (root.contains("boundary")) {
    const json& s = root["boundary"];
    const std::string p = "/boundary";
    if (!s.is_object()) throw ConfigError(p, "expected an object");
    allow_keys(s, p, {"parameter", "lo", "hi", "tol", "levels"});
    BoundarySpec b;
    if (s.contains("parameter")) b.parameter = as_string(s["parameter"], child(p, "parameter"));
    check_parameter(sc.state, b.parameter, child(p, "parameter"));
    for (const auto& axis : sc.sweep) {
      if (axis.parameter == b.parameter) throw ConfigError(child(p, "parameter"), "also swept");
    }
    b.lo = as_number(require(s, p, "lo"), child(p, "lo"));
    b.hi = as_number(require(s, p, "hi"), child(p, "hi"));
    if (!(b.hi > b.lo)) throw ConfigError(child(p, "hi"), "must exceed lo");
    if (s.contains("tol")) b.tol = as_number(s["tol"], child(p, "tol"));
    if (!(b.tol > 0.0)) throw ConfigError(child(p, "tol"), "must be > 0");
    const json& lv = require(s, p, "levels");
    if (!lv.is_array() || lv.empty()) throw ConfigError(child(p, "levels"), "expected a non-empty array");
    for (std::size_t i = 0; i < lv.size(); ++i) {
      const int r = as_int(lv[i], child(child(p, "levels"), i));
      if (r < 1) throw ConfigError(child(child(p, "levels"), i), "must be >= 1");
      b.levels.push_back(r);
    }
    sc.boundary = b;
  }

  sc.output = root.contains("output") ? as_string(root["output"], "/output") : sc.name + ".csv";

  // Building the base state surfaces parameter errors before any work starts.
  try {
    build_cv_state(sc.state);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/state", e.what());
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

CVState build_cv_state(const StateSpec& spec, const std::map<std::string, double>& overrides) {
  if (spec.explicit_state) return *spec.explicit_state;
  std::map<std::string, double> p = spec.params;
  for (const auto& [k, v] : overrides) p[k] = v;
  const std::string& f = spec.family;
  if (f == "tmsv") return build_gaussian(Tmsv{p["xi"]});
  if (f == "tmst") return build_gaussian(Tmst{p["xi"], p["nbar"]});
  if (f == "thermal") return build_gaussian(ThermalProduct{p["nbar_a"], p["nbar_b"]});
  if (f == "tmsv_noise") return tmsv_thermal_mixture(p["xi"], p["nbar"], p["p"]);
  if (f == "mes") return build_state(Mes{integral_param(p, "d")});
  if (f == "tmsv_fock") return build_state(TmsvTruncated{p["xi"], integral_param(p, "d")});
  if (f == "tmst_fock") {
    return build_state(TmstFock{p["xi"], p["nbar"], integral_param(p, "d"), integral_param(p, "pad")});
  }
  if (f == "thermal_fock") {
    const int d = integral_param(p, "d");
    return build_state(Thermal{p["nbar_a"], p["nbar_b"], d, d});
  }
  if (f == "mes_noise") {
    NoiseTruncation noise = NoiseTruncation::AtDimension;
    const auto it = spec.options.find("noise");
    if (it != spec.options.end()) {
      noise = it->second == "cutoff"     ? NoiseTruncation::AtCutoff
              : it->second == "gaussian" ? NoiseTruncation::Gaussian
                                         : NoiseTruncation::AtDimension;
    }
    return mes_noise_mixture(integral_param(p, "d"), p["p"], p["nbar_a"], p["nbar_b"], noise,
                             integral_param(p, "cutoff"));
  }
  throw ConfigError("/state/family", "unknown family '" + f + "'");
}

Table run_scenario(const Scenario& scenario, Command command, const RunOptions& options) {
  if (options.threads > 0) omp_set_num_threads(options.threads);
  if (scenario.boundary && command != Command::Sample) return run_boundary(scenario, options);
  return run_points(scenario, command, options);
}

}  // namespace cvsn::cli
