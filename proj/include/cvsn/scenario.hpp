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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvsn/cvstate.hpp"
#include "cvsn/quadrature.hpp"
#include "cvsn/witnesses.hpp"

namespace cvsn::cli {

/// Invalid configuration. `where` is "line:column" for syntax errors and a
/// JSON pointer such as /state/xi for field errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& message)
      : std::runtime_error(where + ": " + message), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct StateSpec {
  /// tmsv, tmst, thermal, tmsv_noise, mes_noise, mes, tmsv_fock, tmst_fock,
  /// thermal_fock, or "components" for an explicit list.
  std::string family;
  std::map<std::string, double> params;
  std::map<std::string, std::string> options;
  /// Explicit components, already validated into a state.
  std::optional<CVState> explicit_state;
};

struct WitnessSpec {
  WitnessKind kind = WitnessKind::Nonlinear;
  /// PPT: fixed s; unset means the best value over ppt_s_grid().
  std::optional<double> s;
  /// Fidelity: candidate truncation dimensions. More than one selects the
  /// dimension with the largest certified Schmidt number.
  std::vector<int> dims;
  std::string target = "auto";  // tmsv, mes or auto
  FidelityTruncation truncation = FidelityTruncation::Renormalized;
  int pad = 0;
};

struct SweepAxis {
  std::string parameter;
  std::vector<double> values;
};

struct SamplingSpec {
  long shots_per_node = 100000;
  std::uint64_t seed = 1;
  bool exact = false;
};

/// Bisection for the parameter value where a witness crosses each level r.
/// The boundary column holds lo when the level is already exceeded at lo and
/// nan when it is not reached by hi.
struct BoundarySpec {
  std::string parameter = "xi";
  double lo = 0.0;
  double hi = 3.0;
  double tol = 1e-3;
  std::vector<int> levels;
};

struct Scenario {
  std::string name;
  StateSpec state;
  std::vector<WitnessSpec> witnesses;
  PhaseMap phase_map = PhaseMap::conj_neg();
  QuadratureConfig quadrature;
  std::vector<SweepAxis> sweep;
  std::optional<SamplingSpec> sampling;
  std::optional<BoundarySpec> boundary;
  std::string output;
};

/// Parses and validates a JSON scenario. Throws ConfigError.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

/// Builds the state with `overrides` replacing the spec's parameters.
CVState build_cv_state(const StateSpec& spec, const std::map<std::string, double>& overrides = {});

/// Column names and formatted cells; numbers use '.' and up to 10
/// significant digits.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  /// Free-form provenance written as a comment line when timestamps are on.
  std::string note;
};

struct RunOptions {
  int threads = 0;  // 0 keeps the OpenMP default
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool timestamps = true;
};

enum class Command { Witness, Sweep, Sample };

/// Evaluates every witness at every sweep point (Witness ignores the sweep).
/// Boundary scenarios run the bisection instead. Sample requires `sampling`.
Table run_scenario(const Scenario& scenario, Command command, const RunOptions& options);

std::string format_number(double v);

}  // namespace cvsn::cli
