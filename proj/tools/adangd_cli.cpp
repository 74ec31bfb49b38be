// Copyright 2026 The AdaNGD Authors
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

// adangd run    --config <file>
// adangd verify --result <file> [--out <file>]
// adangd sweep  --config <file> --grid <file>
//
// Exit status: 0 success, 1 a bound was violated, 2 bad configuration.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "adangd/error.hpp"
#include "adangd/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

void print_reports(const std::vector<adangd::BoundReport>& reports) {
  for (const auto& r : reports) {
    std::cout << "  " << r.name << ": " << adangd::to_string(r.status);
    if (r.status == adangd::BoundStatus::satisfied ||
        r.status == adangd::BoundStatus::violated) {
      std::cout << "  measured=" << adangd::format_real(r.measured)
                << " stated=" << adangd::format_real(r.stated);
    }
    std::cout << '\n';
  }
}

int cmd_run(const std::string& config_path) {
  const adangd::ExperimentConfig cfg = adangd::load_config(config_path);
  const adangd::RunResult result = adangd::run_experiment(cfg);
  const auto dir = adangd::resolve_output_dir(cfg);
  const auto files = adangd::write_run(result, dir);
  adangd::write_reports(result.bound_reports,
                        dir / (cfg.run_id + ".report.json"));
  std::cout << cfg.run_id << ": f(x_bar)=" << adangd::format_real(result.stats.f_bar)
            << " excess=" << adangd::format_real(result.stats.excess)
            << " oracle_calls=" << result.stats.oracle_calls
            << " halt=" << adangd::to_string(result.stats.halt_reason) << '\n';
  print_reports(result.bound_reports);
  std::cout << "wrote " << files.result_json.string() << '\n';
  return adangd::any_violated(result.bound_reports) ? kExitViolation : kExitOk;
}

int cmd_verify(const std::string& result_path, std::string out_path) {
  const adangd::RunResult result =
      adangd::result_from_json(adangd::load_json(result_path));
  const auto reports = adangd::verify_bounds(result);
  if (out_path.empty()) {
    out_path = (std::filesystem::path(result_path).parent_path() /
                (result.config.run_id + ".report.json"))
                   .string();
  }
  adangd::write_reports(reports, out_path);
  std::cout << result.config.run_id << ":\n";
  if (reports.empty()) std::cout << "  no applicable bounds\n";
  print_reports(reports);
  std::cout << "wrote " << out_path << '\n';
  return adangd::any_violated(reports) ? kExitViolation : kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& grid_path) {
  const nlohmann::json tmpl = adangd::load_json(config_path);
  const adangd::SweepGrid grid =
      adangd::SweepGrid::from_json(adangd::load_json(grid_path));
  // Validates the template before any cell runs.
  const adangd::ExperimentConfig base = adangd::parse_config(tmpl);
  const auto outcome =
      adangd::sweep(tmpl, grid, adangd::resolve_output_dir(base));

  bool violated = adangd::any_violated(outcome.aggregate_reports);
  bool failed = false;
  for (const auto& c : outcome.cells) {
    if (!c.ok) {
      failed = true;
      std::cerr << c.run_id << ": " << c.error << '\n';
    } else if (c.bounds_violated) {
      violated = true;
      std::cout << c.run_id << ": bound violated\n";
    }
  }
  std::cout << outcome.cells.size() << " runs in "
            << outcome.dir.string() << '\n';
  print_reports(outcome.aggregate_reports);
  if (failed) return kExitConfig;
  return violated ? kExitViolation : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive normalized gradient methods: runs, checks, sweeps"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("--config", run_config, "Experiment config (JSON)")
      ->required();

  std::string verify_result;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "Re-check bounds of a result");
  verify->add_option("--result", verify_result, "Result file (JSON)")
      ->required();
  verify->add_option("--out", verify_out, "Report path");

  std::string sweep_config;
  std::string sweep_grid;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid");
  sweep->add_option("--config", sweep_config, "Config template (JSON)")
      ->required();
  sweep->add_option("--grid", sweep_grid, "Grid and seeds (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_config);
    if (*verify) return cmd_verify(verify_result, verify_out);
    if (*sweep) return cmd_sweep(sweep_config, sweep_grid);
  } catch (const adangd::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
