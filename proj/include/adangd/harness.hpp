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

// Experiment configuration, seeded execution, serialization and sweeps.
//
// A run writes three files into its output directory:
//   <run_id>.trace.csv    one row per query point (downsampled above 1e5 rows)
//   <run_id>.result.json  config echo, final point, full-resolution statistics
//                         and bound reports
//   <run_id>.timing.json  wall-clock time, kept apart so the first two files
//                         are byte-identical across repeated runs
//
// The environment variable ADANGD_OUTPUT_DIR, when set, replaces the
// configured output directory.

#ifndef ADANGD_HARNESS_HPP_
#define ADANGD_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "adangd/bounds.hpp"
#include "adangd/objectives.hpp"
#include "adangd/stochastic.hpp"
#include "adangd/trace.hpp"

namespace adangd {

inline constexpr std::size_t kDownsampleAbove = 100000;
inline constexpr std::size_t kDownsampleTargetRows = 10000;
inline constexpr double kLazySgdSlack = 5.0;
inline constexpr const char* kOutputDirEnv = "ADANGD_OUTPUT_DIR";

struct ObjectiveSpec {
  std::string kind = "R";  // R, F or Z
  int dim = 100;           // ignored for Z
  // Defaults: 2 * init_radius for R, 1 for F, 10 for Z.
  std::optional<double> ball_radius;
};

struct AlgorithmSpec {
  // adagrad, adangd, sc_adangd, gd_const, gd_sc_decay, nesterov, lazy_sgd,
  // minibatch_sgd
  std::string name = "adangd";
  double k = 1.0;
  std::optional<double> beta;  // GD baselines: overrides the objective's beta
  LazySgdMode mode = LazySgdMode::theoretical;
  double p = 0.5;
  std::optional<double> eta0;
  std::optional<double> m0;
  std::optional<double> delta;
  std::size_t b = 1;  // minibatch size
};

struct ExperimentConfig {
  ObjectiveSpec objective;
  AlgorithmSpec algorithm;
  std::size_t T = 1;  // iterations, or the oracle budget for stochastic runs
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;
  double init_radius = 1.0;
  double grad_floor_eps = kDefaultGradFloor;
  std::string run_id;
  std::string output_path = ".";
  nlohmann::json raw;  // the config exactly as given
};

// Both throw ConfigError on malformed or inconsistent input.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json load_json(const std::filesystem::path& path);

Objective build_objective(const ObjectiveSpec& spec, double init_radius);
// Uniform on the sphere of the given radius around 0.
Vector initial_point(Eigen::Index dim, double radius, std::uint64_t seed);
// Seed of the noisy oracle, decorrelated from the initial-point stream.
std::uint64_t oracle_seed(std::uint64_t seed);

// Everything the bound checks need, at full resolution.
struct RunStatistics {
  std::vector<double> grad_norms;
  double loss_sum = 0.0;  // sum of f(x_t) over all query points
  double f_bar = 0.0;
  double excess = 0.0;    // f_bar - f*
  HaltReason halt_reason = HaltReason::completed;
  std::size_t oracle_calls = 0;
  std::size_t records = 0;
  std::int64_t rescale_exponent = 0;
  // Stochastic runs only.
  std::optional<double> oracle_bound_G;
  std::optional<double> m0;
  std::optional<double> eta0;
  std::optional<double> ae_max_sqrtN_gnorm;
};

struct RunResult {
  ExperimentConfig config;
  Trace trace;  // empty when loaded from a result file
  Vector x_bar;
  RunStatistics stats;
  std::vector<BoundReport> bound_reports;
  double wall_time_seconds = 0.0;
};

// Runs one configured experiment and evaluates its bound reports.
RunResult run_experiment(const ExperimentConfig& config);

// One report per applicable bound, computed from config and statistics.
std::vector<BoundReport> verify_bounds(const RunResult& result);
bool any_violated(const std::vector<BoundReport>& reports);

std::filesystem::path resolve_output_dir(const ExperimentConfig& config);

// Shortest round-trip decimal; "inf", "-inf", "nan" for non-finite values.
std::string format_real(double v);

// Columns: run_id,s,t_oracle_calls,loss,grad_norm_or_estimate,eta,Q,weight,
// minibatch_n. Traces longer than kDownsampleAbove keep every
// ceil(T / kDownsampleTargetRows)-th row plus the first and last.
void write_trace_csv(const Trace& trace, const std::string& run_id,
                     std::ostream& out);
std::vector<std::size_t> csv_row_indices(std::size_t n_records);

nlohmann::json result_to_json(const RunResult& result);
RunResult result_from_json(const nlohmann::json& j);

struct RunArtifacts {
  std::filesystem::path trace_csv;
  std::filesystem::path result_json;
  std::filesystem::path timing_json;
};
RunArtifacts write_run(const RunResult& result,
                       const std::filesystem::path& dir);
void write_reports(const std::vector<BoundReport>& reports,
                   const std::filesystem::path& path);

// Cartesian grid over dotted config paths, e.g. "algorithm.k": [1, 1.1, 2].
struct SweepGrid {
  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> vary;
  std::vector<std::uint64_t> seeds;

  // Throws ConfigError on an empty seed list or an empty value list.
  static SweepGrid from_json(const nlohmann::json& j);
  std::size_t cell_count() const;
};

// Sets a dotted path, creating intermediate objects.
void set_dotted(nlohmann::json& j, const std::string& path,
                const nlohmann::json& value);

struct SweepCell {
  std::size_t cell = 0;  // grid point index
  std::uint64_t seed = 0;
  std::string run_id;
  nlohmann::json params;
  bool ok = false;
  std::string error;
  // Valid when ok.
  double f_bar = 0.0;
  double excess = 0.0;
  std::size_t oracle_calls = 0;
  HaltReason halt_reason = HaltReason::completed;
  bool bounds_violated = false;
  std::string algorithm;
  std::string objective;
  double lazy_p = 0.0;
  double T = 0.0;
  double D = 0.0;
  double G = 0.0;
  double H = 0.0;
};

struct SweepOutcome {
  std::vector<SweepCell> cells;
  std::vector<BoundReport> aggregate_reports;
  std::filesystem::path dir;
};

// Runs every grid point x seed, concurrently, writing each run plus
// summary.csv and aggregate.json into dir. A failing cell is recorded and
// the sweep continues.
SweepOutcome sweep(const nlohmann::json& template_config,
                   const SweepGrid& grid, const std::filesystem::path& dir);

// Mean excess over the runs of one LazySGD grid point against
// C G D log T / sqrt T (p = 1/2) or C G^2 log^2 T / (H T) (p = 1), with G the
// oracle bound.
BoundReport lazy_sgd_mean_excess_report(const std::vector<SweepCell>& runs,
                                        double slack = kLazySgdSlack);

}  // namespace adangd

#endif  // ADANGD_HARNESS_HPP_
