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
#include <sstream>

#include "cvsn/report.hpp"
#include "cvsn/scenario.hpp"

namespace cvsn::cli {
namespace {

std::string where_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.where();
  }
  return "(no error)";
}

const char* kTmsv = R"({"state": {"family": "tmsv", "xi": 0.5}, "witnesses": [{"kind": "nonlinear"}]})";

TEST(Scenario, ParsesMinimalConfig) {
  const Scenario s = parse_scenario(kTmsv);
  EXPECT_EQ(s.state.family, "tmsv");
  EXPECT_EQ(s.state.params.at("xi"), 0.5);
  ASSERT_EQ(s.witnesses.size(), 1u);
  EXPECT_EQ(s.witnesses[0].kind, WitnessKind::Nonlinear);
  EXPECT_EQ(s.output, "scenario.csv");
}

TEST(Scenario, SyntaxErrorsCarryLineAndColumn) {
  EXPECT_EQ(where_of("{\n  \"state\": ,\n}"), "2:12");
}

TEST(Scenario, FieldErrorsCarryPointers) {
  EXPECT_EQ(where_of(R"({"witnesses": [{"kind": "nonlinear"}]})"), "/state");
  EXPECT_EQ(where_of(R"({"state": {"family": "tmsv"}, "witnesses": [{"kind": "nonlinear"}]})"), "/state/xi");
  EXPECT_EQ(where_of(R"({"state": {"family": "nope"}, "witnesses": [{"kind": "nonlinear"}]})"), "/state/family");
  EXPECT_EQ(where_of(R"({"state": {"family": "tmsv", "xi": 1}, "witnesses": [{"kind": "bogus"}]})"),
            "/witnesses/0/kind");
  EXPECT_EQ(where_of(R"({"state": {"family": "tmsv", "xi": 1}, "witnesses": [{"kind": "ppt", "s": 2.5}]})"),
            "/witnesses/0/s");
  EXPECT_EQ(where_of(R"({"state": {"family": "tmsv", "xi": 1}, "witnesses": [{"kind": "nonlinear"}],
                       "sweep": [{"parameter": "nbar", "values": [1]}]})"),
            "/sweep/0/parameter");
  EXPECT_EQ(where_of(R"({"state": {"family": "tmsv", "xi": 1}, "witnesses": [{"kind": "nonlinear"}],
                       "sweep": [{"parameter": "xi", "min": 0, "max": 1, "steps": 0}]})"),
            "/sweep/0/steps");
  EXPECT_EQ(where_of(R"({"state": {"family": "tmsv", "xi": 1}, "witnesses": [{"kind": "nonlinear"}],
                       "quadrature": {"n_angular": 7}})"),
            "/quadrature");
  EXPECT_EQ(where_of(R"({"state": {"family": "tmsv", "xi": 1}, "witnesses": [{"kind": "nonlinear"}],
                       "phase_map": {"jacobian": [[2, 0], [0, 2]]}})"),
            "/phase_map");
  EXPECT_EQ(where_of(R"({"state": {"family": "tmsv", "xi": 1}, "witnesses": [{"kind": "nonlinear"}], "extra": 1})"),
            "/extra");
  EXPECT_EQ(where_of(R"({"state": {"family": "mes", "d": 2.5}, "witnesses": [{"kind": "nonlinear"}]})"), "/state/d");
}

TEST(Scenario, FidelityDimensionForms) {
  const Scenario s = parse_scenario(R"({"state": {"family": "tmst", "xi": 1, "nbar": 0.1},
    "witnesses": [{"kind": "fidelity", "d": [2, 4]}, {"kind": "fidelity", "d": {"min": 3, "max": 5}}]})");
  ASSERT_EQ(s.witnesses.size(), 3u);
  EXPECT_EQ(s.witnesses[0].dims, std::vector<int>{2});
  EXPECT_EQ(s.witnesses[1].dims, std::vector<int>{4});
  EXPECT_EQ(s.witnesses[2].dims, (std::vector<int>{3, 4, 5}));
}

TEST(Scenario, ExplicitComponents) {
  const Scenario s = parse_scenario(R"({"state": {"components": [
      {"type": "fock", "weight": 0.5, "d_a": 2, "d_b": 2, "psi": {"re": [[1, 0], [0, 1]]}},
      {"type": "gaussian", "weight": 0.5, "gamma": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}]},
    "witnesses": [{"kind": "linear"}]})");
  const CVState st = build_cv_state(s.state);
  EXPECT_EQ(st.components().size(), 2u);
  EXPECT_EQ(where_of(R"({"state": {"components": [
      {"type": "gaussian", "weight": 1, "gamma": [[0.1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}]},
    "witnesses": [{"kind": "linear"}]})"),
            "/state/components/0");
}

TEST(Scenario, BuildsEveryFamily) {
  const char* states[] = {
      R"({"family": "tmsv", "xi": 0.3})",
      R"({"family": "tmst", "xi": 0.3, "nbar": 0.2})",
      R"({"family": "thermal", "nbar_a": 0.3, "nbar_b": 0.2})",
      R"({"family": "tmsv_noise", "xi": 0.3, "nbar": 0.2, "p": 0.5})",
      R"({"family": "mes_noise", "d": 3, "p": 0.5, "nbar_a": 0.5, "nbar_b": 0, "noise": "cutoff", "cutoff": 6})",
      R"({"family": "mes", "d": 3})",
      R"({"family": "tmsv_fock", "xi": 0.3, "d": 4})",
      R"({"family": "tmst_fock", "xi": 0.3, "nbar": 0.1, "d": 4})",
      R"({"family": "thermal_fock", "nbar_a": 0.3, "nbar_b": 0.2, "d": 4})",
  };
  for (const char* st : states) {
    const Scenario s = parse_scenario(std::string(R"({"state": )") + st + R"(, "witnesses": [{"kind": "linear"}]})");
    EXPECT_NEAR(std::abs(chi(build_cv_state(s.state), 0.0, 0.0)), 1.0, 1e-12) << st;
  }
}

TEST(Scenario, SweepRowsAndDeterminism) {
  const Scenario s = parse_scenario(R"({"state": {"family": "tmst", "xi": 1.0, "nbar": 0.1},
    "witnesses": [{"kind": "nonlinear"}, {"kind": "fidelity", "d": 4}],
    "sweep": [{"parameter": "nbar", "values": [0.1, 0.5]}, {"parameter": "xi", "min": 0.5, "max": 1.0, "steps": 2}]})");
  RunOptions opt;
  opt.timestamps = false;
  opt.threads = 1;
  const Table a = run_scenario(s, Command::Sweep, opt);
  opt.threads = 2;
  const Table b = run_scenario(s, Command::Sweep, opt);
  ASSERT_EQ(a.rows.size(), 8u);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_EQ(a.columns.front(), "nbar");
  EXPECT_EQ(a.columns[1], "xi");
  // Last axis varies fastest; row 6 is nbar = 0.5, xi = 1: W = e^2 / 2.
  const auto& row = a.rows[6];
  EXPECT_EQ(row[0], "0.5");
  EXPECT_EQ(row[1], "1");
  EXPECT_EQ(row[2], "nonlinear");
  EXPECT_NEAR(std::stod(row[4]), std::exp(2.0) / 2.0, 1e-5);
  EXPECT_EQ(row.back(), "0");  // wall time zeroed without timestamps

  const Table w = run_scenario(s, Command::Witness, opt);
  EXPECT_EQ(w.rows.size(), 2u);
}

TEST(Scenario, SampleCommand) {
  const Scenario s = parse_scenario(R"({"state": {"family": "tmsv", "xi": 0.5},
    "witnesses": [{"kind": "nonlinear"}], "quadrature": {"n_radial": 32, "n_angular": 16},
    "sampling": {"shots_per_node": 2000, "seed": 5}})");
  RunOptions opt;
  opt.timestamps = false;
  const Table a = run_scenario(s, Command::Sample, opt);
  const Table b = run_scenario(s, Command::Sample, opt);
  EXPECT_EQ(a.rows, b.rows);
  opt.seed = 6;
  const Table c = run_scenario(s, Command::Sample, opt);
  EXPECT_NE(a.rows, c.rows);
  EXPECT_EQ(a.rows[0][0], "nonlinear_sampled");
  EXPECT_THROW(run_scenario(parse_scenario(kTmsv), Command::Sample, opt), ConfigError);
}

TEST(Scenario, BoundaryBisection) {
  // Nonlinear W = e^{2 xi} for TMSV, so W = r at xi = ln(r) / 2.
  const Scenario s = parse_scenario(R"({"state": {"family": "tmst", "xi": 0.5, "nbar": 0.0},
    "witnesses": [{"kind": "nonlinear"}],
    "boundary": {"parameter": "xi", "lo": 0.0, "hi": 2.0, "tol": 0.0005, "levels": [2, 3]}})");
  RunOptions opt;
  opt.timestamps = false;
  const Table t = run_scenario(s, Command::Sweep, opt);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.columns[2], "xi_boundary");
  EXPECT_NEAR(std::stod(t.rows[0][2]), std::log(2.0) / 2, 5e-4);
  EXPECT_NEAR(std::stod(t.rows[1][2]), std::log(3.0) / 2, 5e-4);
}

TEST(Report, CsvRoundTripAndFormat) {
  Table t;
  t.columns = {"a", "b,c"};
  t.rows = {{"1", "x"}, {"2.5", "say \"hi\""}};
  std::ostringstream out;
  write_csv(out, t, false);
  EXPECT_EQ(out.str(), "a,\"b,c\"\n1,x\n2.5,\"say \"\"hi\"\"\"\n");
  std::istringstream in("# comment\n" + out.str());
  const Table back = read_csv(in);
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_EQ(back.rows, t.rows);
  std::ostringstream stamped;
  write_csv(stamped, t, true);
  EXPECT_EQ(stamped.str().rfind("# generated ", 0), 0u);
  std::istringstream ragged("a,b\n1\n");
  EXPECT_THROW(read_csv(ragged), std::runtime_error);
}

TEST(Report, FormatNumber) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(7.38905609893065), "7.389056099");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(1e-12), "1e-12");
}

TEST(Report, SvgHasOneSeriesPerWitness) {
  Table t;
  t.columns = {"nbar", "witness", "parameter", "W", "error_estimate", "certified_sn", "converged", "wall_time_ms"};
  t.rows = {{"0.1", "nonlinear", "", "6", "0", "7", "1", "0"},
            {"0.2", "nonlinear", "", "5", "0", "6", "1", "0"},
            {"0.1", "fidelity", "8", "0.8", "0", "4", "1", "0"},
            {"0.2", "fidelity", "8", "0.7", "0", "3", "1", "0"}};
  const std::string svg = render_svg(t, "demo <1>");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  std::size_t lines = 0;
  for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++lines;
  EXPECT_EQ(lines, 2u);
  EXPECT_NE(svg.find("fidelity d=8"), std::string::npos);
  EXPECT_NE(svg.find("demo &lt;1&gt;"), std::string::npos);
}

}  // namespace
}  // namespace cvsn::cli
