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


#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cvsn/report.hpp"
#include "cvsn/scenario.hpp"
#include "cvsn/validation.hpp"

namespace fs = std::filesystem;
using namespace cvsn::cli;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kBadConfig = 2;
constexpr int kNumerical = 3;

fs::path preset_dir() {
  if (const char* env = std::getenv("CVSN_PRESET_DIR")) return env;
  return CVSN_PRESET_DIR;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void print_summary(const Table& t, const fs::path& path) {
  std::size_t flagged = 0;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (t.columns[c] != "converged") continue;
    for (const auto& row : t.rows) flagged += row[c] == "0";
  }
  // Column widths for a readable echo of the table.
  std::vector<std::size_t> w(t.columns.size());
  for (std::size_t c = 0; c < w.size(); ++c) {
    w[c] = t.columns[c].size();
    for (const auto& row : t.rows) w[c] = std::max(w[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      std::printf("%s%-*s", c ? "  " : "", static_cast<int>(w[c]), cells[c].c_str());
    }
    std::printf("\n");
  };
  line(t.columns);
  const std::size_t shown = std::min<std::size_t>(t.rows.size(), 40);
  for (std::size_t i = 0; i < shown; ++i) line(t.rows[i]);
  if (shown < t.rows.size()) std::printf("... %zu more rows\n", t.rows.size() - shown);
  std::printf("wrote %zu rows to %s\n", t.rows.size(), path.string().c_str());
  if (flagged) std::printf("warning: %zu rows did not converge (converged=0)\n", flagged);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schmidt-number certification for two-mode continuous-variable states"};
  app.require_subcommand(1);
  app.fallthrough();

  RunOptions opt;
  std::string out_path;
  std::uint64_t seed = 0;
  double tol = 0.0;
  bool no_timestamp = false;
  app.add_option("--threads", opt.threads, "worker threads (default: OpenMP default)")
      ->check(CLI::NonNegativeNumber);
  auto* seed_opt = app.add_option("--seed", seed, "override the sampling seed");
  auto* tol_opt = app.add_option("--tol", tol, "override the quadrature relative tolerance")
                      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "output file (CSV, or SVG for plot)");
  app.add_flag("--no-header-timestamp", no_timestamp,
               "omit the timestamp comment line and zero wall_time_ms for byte-stable output");

  std::string config;
  std::string preset;
  std::string csv;
  auto* witness = app.add_subcommand("witness", "evaluate the witnesses once, ignoring the sweep");
  witness->add_option("config", config, "scenario file (JSON)")->required();
  auto* sweep = app.add_subcommand("sweep", "evaluate the witnesses over the sweep");
  sweep->add_option("config", config, "scenario file (JSON)")->required();
  auto* sample = app.add_subcommand("sample", "sampled nonlinear witness over the sweep");
  sample->add_option("config", config, "scenario file (JSON)")->required();
  auto* reproduce = app.add_subcommand("reproduce", "run a shipped preset");
  reproduce->add_option("preset", preset, "fig2a, fig2b, figS1 or figS2")
      ->required()
      ->check(CLI::IsMember({"fig2a", "fig2b", "figS1", "figS2"}));
  auto* plot = app.add_subcommand("plot", "render a result CSV as SVG");
  plot->add_option("csv", csv, "CSV written by sweep or reproduce")->required();
  auto* validate = app.add_subcommand("validate", "run the acceptance checks");

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) opt.seed = seed;
  if (*tol_opt) opt.tol = tol;
  opt.timestamps = !no_timestamp;

  try {
    if (*validate) {
      std::printf("%-3s %-44s %-6s %8s  %s\n", "id", "check", "result", "seconds", "detail");
      const auto results = run_acceptance_suite([](const CheckResult& r) {
        std::printf("%-3d %-44s %-6s %8.2f  %s\n", r.id, r.name.c_str(), r.pass ? "PASS" : "FAIL",
                    r.seconds, r.detail.c_str());
        std::fflush(stdout);
      });
      int failed = 0;
      for (const auto& r : results) failed += !r.pass;
      std::printf("%d of %zu checks passed\n", static_cast<int>(results.size()) - failed, results.size());
      return failed ? kFailure : kOk;
    }
    if (*plot) {
      std::ifstream in(csv, std::ios::binary);
      if (!in) throw std::runtime_error("cannot open " + csv);
      const Table t = read_csv(in);
      const fs::path target = out_path.empty() ? fs::path(csv).replace_extension(".svg") : fs::path(out_path);
      write_file(target, render_svg(t, fs::path(csv).stem().string()));
      std::printf("wrote %s\n", target.string().c_str());
      return kOk;
    }

    Command command = Command::Sweep;
    fs::path config_path = config;
    if (*witness) command = Command::Witness;
    if (*sample) command = Command::Sample;
    if (*reproduce) config_path = preset_dir() / (preset + ".json");
    const Scenario sc = load_scenario(config_path);
    const Table table = run_scenario(sc, command, opt);
    const fs::path target = out_path.empty() ? fs::path(sc.output) : fs::path(out_path);
    std::ostringstream csv_text;
    write_csv(csv_text, table, opt.timestamps);
    write_file(target, csv_text.str());
    print_summary(table, target);
    return kOk;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error at %s\n", e.what());
    return kBadConfig;
  } catch (const cvsn::NumericalInconsistency& e) {
    std::fprintf(stderr, "numerical inconsistency: %s\n", e.what());
    return kNumerical;
  } catch (const cvsn::QuadratureError& e) {
    std::fprintf(stderr, "quadrature failure: %s\n", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
}
