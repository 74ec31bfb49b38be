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

#include "adangd/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "adangd/error.hpp"
#include "adangd/numerics.hpp"
#include "adangd/offline.hpp"

namespace adangd {

namespace {

using nlohmann::json;

const std::set<std::string> kTopKeys = {
    "objective",   "algorithm",      "T",      "budget",     "seed",
    "noise_sigma", "init_radius",    "run_id", "output_path",
    "grad_floor_eps"};
const std::set<std::string> kObjectiveKeys = {"kind", "dim", "ball_radius"};
const std::set<std::string> kAlgorithmKeys = {
    "name", "k", "beta", "mode", "p", "eta0", "m0", "delta", "b"};
const std::set<std::string> kAlgorithms = {
    "adagrad",  "adangd",   "sc_adangd", "gd_const",
    "gd_sc_decay", "nesterov", "lazy_sgd", "minibatch_sgd"};

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

double number(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError("'" + key + "' must be finite");
  return d;
}

std::optional<double> optional_number(const json& j, const std::string& key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return number(j, key, 0.0);
}

std::uint64_t unsigned_integer(const json& j, const std::string& key,
                               std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  const bool ok = v.is_number_unsigned() ||
                  (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  if (!ok) throw ConfigError("'" + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

bool is_offline(const std::string& name) {
  return name != "lazy_sgd" && name != "minibatch_sgd";
}

bool valid_run_id(const std::string& id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '-' || c == '.';
  });
}

std::string default_run_id(const ExperimentConfig& c) {
  std::string id = c.algorithm.name + "_" + c.objective.kind;
  if (c.objective.kind != "Z") id += std::to_string(c.objective.dim);
  return id + "_s" + std::to_string(c.seed);
}

json vector_to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(real_to_json(v[i]));
  return a;
}

Vector vector_from_json(const json& a) {
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = real_from_json(a[i]);
  }
  return v;
}

json optional_to_json(const std::optional<double>& v) {
  return v ? real_to_json(*v) : json(nullptr);
}

std::optional<double> optional_from_json(const json& j, const std::string& key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return real_from_json(j.at(key));
}

HaltReason halt_from_string(const std::string& s) {
  if (s == "completed") return HaltReason::completed;
  if (s == "gradient_floor") return HaltReason::gradient_floor;
  throw ConfigError("unknown halt reason: " + s);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("write failed: " + path.string());
}

// Defaults for the stochastic step size: the convex setting uses
// D / (sqrt2 G) (theoretical) or D / sqrt2 (practical, where the clock is
// already in units of 1/|g|^2); p >= 1 is the strongly-convex setting.
double default_eta0(const AlgorithmSpec& a, double D, double G, double H) {
  if (a.p >= 1.0) {
    if (!(H > 0.0)) {
      throw ConfigError("eta0 = 1/H needs a strongly-convex objective");
    }
    return lazy_sgd_strongly_convex_eta0(H);
  }
  if (a.name == "lazy_sgd" && a.mode == LazySgdMode::practical) {
    return D / std::sqrt(2.0);
  }
  return lazy_sgd_convex_eta0(D, G);
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown_keys(j, kTopKeys, "config");
    ExperimentConfig c;
    c.raw = j;

    if (!j.contains("objective") || !j.at("objective").is_object()) {
      throw ConfigError("missing 'objective' object");
    }
    const json& o = j.at("objective");
    reject_unknown_keys(o, kObjectiveKeys, "objective");
    c.objective.kind = o.value("kind", std::string("R"));
    if (c.objective.kind != "R" && c.objective.kind != "F" &&
        c.objective.kind != "Z") {
      throw ConfigError("objective.kind must be R, F or Z");
    }
    const auto dim = static_cast<std::int64_t>(
        unsigned_integer(o, "dim", c.objective.kind == "Z" ? 2 : 100));
    if (dim < 1 || dim > 1000000) throw ConfigError("objective.dim out of range");
    c.objective.dim = static_cast<int>(dim);
    if (c.objective.kind == "Z" && c.objective.dim != 2) {
      throw ConfigError("objective Z is two-dimensional");
    }
    c.objective.ball_radius = optional_number(o, "ball_radius");
    if (c.objective.ball_radius && !(*c.objective.ball_radius > 0.0)) {
      throw ConfigError("objective.ball_radius must be > 0");
    }
    if (c.objective.kind == "F" && c.objective.ball_radius &&
        *c.objective.ball_radius != 1.0) {
      throw ConfigError("objective F is defined on the unit ball");
    }

    if (!j.contains("algorithm") || !j.at("algorithm").is_object()) {
      throw ConfigError("missing 'algorithm' object");
    }
    const json& a = j.at("algorithm");
    reject_unknown_keys(a, kAlgorithmKeys, "algorithm");
    if (!a.contains("name") || !a.at("name").is_string()) {
      throw ConfigError("algorithm.name is required");
    }
    c.algorithm.name = a.at("name").get<std::string>();
    if (!kAlgorithms.count(c.algorithm.name)) {
      throw ConfigError("unknown algorithm '" + c.algorithm.name + "'");
    }
    c.algorithm.k = number(a, "k", c.algorithm.name == "adagrad" ? 0.0 : 1.0);
    c.algorithm.beta = optional_number(a, "beta");
    if (c.algorithm.beta && !(*c.algorithm.beta > 0.0)) {
      throw ConfigError("algorithm.beta must be > 0");
    }
    const std::string mode = a.value("mode", std::string("theoretical"));
    if (mode == "theoretical") {
      c.algorithm.mode = LazySgdMode::theoretical;
    } else if (mode == "practical") {
      c.algorithm.mode = LazySgdMode::practical;
    } else {
      throw ConfigError("algorithm.mode must be theoretical or practical");
    }
    c.algorithm.p = number(a, "p", 0.5);
    if (c.algorithm.p < 0.0) throw ConfigError("algorithm.p must be >= 0");
    c.algorithm.eta0 = optional_number(a, "eta0");
    if (c.algorithm.eta0 && !(*c.algorithm.eta0 > 0.0)) {
      throw ConfigError("algorithm.eta0 must be > 0");
    }
    c.algorithm.m0 = optional_number(a, "m0");
    if (c.algorithm.m0 && !(*c.algorithm.m0 > 0.0)) {
      throw ConfigError("algorithm.m0 must be > 0");
    }
    c.algorithm.delta = optional_number(a, "delta");
    if (c.algorithm.delta &&
        !(*c.algorithm.delta > 0.0 && *c.algorithm.delta < 1.0)) {
      throw ConfigError("algorithm.delta must lie in (0, 1)");
    }
    c.algorithm.b = unsigned_integer(a, "b", 1);
    if (c.algorithm.b < 1) throw ConfigError("algorithm.b must be >= 1");

    if (j.contains("T") && j.contains("budget")) {
      throw ConfigError("give either 'T' or 'budget', not both");
    }
    c.T = unsigned_integer(j, j.contains("budget") ? "budget" : "T", 0);
    if (c.T < 1) throw ConfigError("'T' must be a positive integer");
    if (c.algorithm.name == "minibatch_sgd" && c.T % c.algorithm.b != 0) {
      throw ConfigError("minibatch_sgd: the budget must be a multiple of b");
    }
    c.seed = unsigned_integer(j, "seed", 0);
    c.noise_sigma = number(j, "noise_sigma", 0.0);
    if (c.noise_sigma < 0.0) throw ConfigError("noise_sigma must be >= 0");
    c.init_radius = number(j, "init_radius", 1.0);
    if (!(c.init_radius > 0.0)) throw ConfigError("init_radius must be > 0");
    c.grad_floor_eps = number(j, "grad_floor_eps", kDefaultGradFloor);
    if (c.grad_floor_eps < 0.0) throw ConfigError("grad_floor_eps must be >= 0");

    if (j.contains("run_id")) {
      if (!j.at("run_id").is_string()) throw ConfigError("run_id must be a string");
      c.run_id = j.at("run_id").get<std::string>();
    } else {
      c.run_id = default_run_id(c);
    }
    if (!valid_run_id(c.run_id)) {
      throw ConfigError("run_id may only contain [A-Za-z0-9_.-]");
    }
    if (j.contains("output_path")) {
      if (!j.at("output_path").is_string()) {
        throw ConfigError("output_path must be a string");
      }
      c.output_path = j.at("output_path").get<std::string>();
    }
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(load_json(path));
}

Objective build_objective(const ObjectiveSpec& spec, double init_radius) {
  if (spec.kind == "R") {
    return make_quadratic_R(spec.dim,
                            spec.ball_radius.value_or(2.0 * init_radius));
  }
  if (spec.kind == "F") return make_nonsmooth_F(spec.dim);
  if (spec.kind == "Z") return make_2d_Z(spec.ball_radius.value_or(10.0));
  throw ConfigError("unknown objective kind '" + spec.kind + "'");
}

Vector initial_point(Eigen::Index dim, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector u(dim);
  double len = 0.0;
  do {
    for (Eigen::Index i = 0; i < dim; ++i) u[i] = normal(rng);
    len = u.norm();
  } while (!(len > 0.0));
  return (radius / len) * u;
}

std::uint64_t oracle_seed(std::uint64_t seed) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RunResult run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const Objective f = build_objective(config.objective, config.init_radius);
  const ConvexSet& set = f.feasible_set;
  const Vector x1 = initial_point(f.dim, config.init_radius, config.seed);
  const AlgorithmSpec& a = config.algorithm;
  const std::size_t T = config.T;
  const double H = f.strong_convexity_H;

  RunResult r;
  r.config = config;

  auto oracle = std::make_shared<NoisyGradientOracle>(f, config.noise_sigma,
                                                      oracle_seed(config.seed));
  Objective f_run = f;
  if (is_offline(a.name) && config.noise_sigma > 0.0) {
    f_run.subgradient_fn = [oracle](const Vector& x) {
      return oracle->sample(x);
    };
  }
  auto require_H = [&] {
    if (!(H > 0.0)) {
      throw ConfigError(a.name + " needs a strongly-convex objective (H > 0)");
    }
  };

  if (a.name == "adagrad") {
    r.trace = adagrad_run(f_run, T, x1, set);
  } else if (a.name == "adangd") {
    r.trace = adangd_run(f_run, {a.k, T, x1, set, config.grad_floor_eps});
  } else if (a.name == "sc_adangd") {
    require_H();
    r.trace =
        sc_adangd_run(f_run, {a.k, T, x1, set, H, config.grad_floor_eps});
  } else if (a.name == "gd_const" || a.name == "gd_sc_decay" ||
             a.name == "nesterov") {
    const GdMode mode = a.name == "gd_const"      ? GdMode::const_lr
                        : a.name == "gd_sc_decay" ? GdMode::sc_decay
                                                  : GdMode::nesterov_sc;
    if (mode != GdMode::const_lr) require_H();
    const GdBaselineConfig g{.mode = mode,
                             .iterations = T,
                             .x1 = x1,
                             .set = set,
                             .beta = a.beta,
                             .strong_convexity_H = std::nullopt};
    r.trace = gd_baseline_run(f_run, g);
  } else if (a.name == "lazy_sgd") {
    const double G = oracle->bound_G();
    // Default confidence level for the budget; kept below 1 for tiny T.
    const double tf = static_cast<double>(T);
    const double delta = a.delta.value_or(
        std::min(0.5, a.p >= 1.0 ? 1.0 / (tf * tf) : std::pow(tf, -1.5)));
    const LazySgdConfig c{
        .total_budget = T,
        .x1 = x1,
        .set = set,
        .eta0 = a.eta0.value_or(default_eta0(a, set.diameter(), G, H)),
        .p = a.p,
        .mode = a.mode,
        .m0 = a.m0.value_or(default_m0(G, delta, T)),
        .grad_floor_eps = config.grad_floor_eps};
    r.trace = lazy_sgd_run(*oracle, c);
    r.stats.m0 = c.m0;
    r.stats.eta0 = c.eta0;
    double cap = 0.0;
    for (const auto& rec : r.trace.records) {
      cap = std::max(cap, std::sqrt(static_cast<double>(rec.minibatch_n)) *
                              rec.grad_norm);
    }
    r.stats.ae_max_sqrtN_gnorm = cap;
  } else if (a.name == "minibatch_sgd") {
    const MinibatchSgdConfig c{
        .batch_size = a.b,
        .iterations = T / a.b,
        .x1 = x1,
        .set = set,
        .schedule = {.eta0 = a.eta0.value_or(default_eta0(
                         a, set.diameter(), oracle->bound_G(), H)),
                     .p = a.p}};
    r.trace = minibatch_sgd_run(*oracle, c);
    r.stats.eta0 = c.schedule.eta0;
  } else {
    throw ConfigError("unknown algorithm '" + a.name + "'");
  }
  if (!is_offline(a.name)) r.stats.oracle_bound_G = oracle->bound_G();

  RunStatistics& s = r.stats;
  s.grad_norms = r.trace.grad_norms();
  CompensatedSum losses;
  for (const auto& rec : r.trace.records) losses.add(rec.loss);
  s.loss_sum = losses.value();
  r.x_bar = r.trace.x_bar;
  s.f_bar = f.value(r.x_bar);
  s.excess = f.known_optimum ? s.f_bar - f.known_optimum->value
                             : std::numeric_limits<double>::quiet_NaN();
  s.halt_reason = r.trace.halt_reason;
  s.oracle_calls = r.trace.oracle_calls;
  s.records = r.trace.records.size();
  s.rescale_exponent = r.trace.rescale_exponent;

  r.bound_reports = verify_bounds(r);
  r.wall_time_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return r;
}

std::vector<BoundReport> verify_bounds(const RunResult& result) {
  const ExperimentConfig& cfg = result.config;
  const RunStatistics& s = result.stats;
  const Objective f = build_objective(cfg.objective, cfg.init_radius);
  const std::string& algo = cfg.algorithm.name;
  const double k = cfg.algorithm.k;
  const double D = f.feasible_set.diameter();
  const double H = f.strong_convexity_H;
  const std::size_t T = s.records;
  const bool exact = cfg.noise_sigma == 0.0;
  const bool halted = s.halt_reason == HaltReason::gradient_floor;
  const bool smooth_ok = f.smoothness_beta && f.optimum_is_feasible();

  json in{{"T", T},
          {"D", D},
          {"G", optional_to_json(f.lipschitz_G)},
          {"H", H},
          {"beta", optional_to_json(f.smoothness_beta)},
          {"algorithm", algo},
          {"k", k},
          {"norms", norms_digest(s.grad_norms)}};
  if (f.smoothness_beta) in["gamma"] = H / *f.smoothness_beta;

  std::vector<BoundReport> out;
  auto skip = [&](const std::string& name, BoundStatus st,
                  const std::string& why) {
    out.push_back(BoundReport::skipped(name, st, why, in));
  };
  auto compare = [&](const std::string& name, auto&& stated_fn) {
    try {
      out.push_back(BoundReport::compare(name, stated_fn(), s.excess, in));
    } catch (const DegenerateInput& e) {
      skip(name, BoundStatus::degenerate, e.what());
    }
  };
  // Reports every check in `names` as skipped when the run is noisy or
  // stopped early; returns true if they may be evaluated.
  auto evaluable = [&](const std::vector<std::string>& names) {
    if (!exact) {
      for (const auto& n : names) {
        skip(n, BoundStatus::not_applicable, "noisy gradients");
      }
      return false;
    }
    if (halted) {
      for (const auto& n : names) {
        skip(n, BoundStatus::not_applicable, "halted at the gradient floor");
      }
      if (!s.grad_norms.empty()) {
        out.push_back(BoundReport::compare("gradient_floor_stationarity",
                                           s.grad_norms.back() * D, s.excess,
                                           in));
      }
      return false;
    }
    return true;
  };

  if (algo == "adangd") {
    const bool k12 = k == 1.0 || k == 2.0;
    if (evaluable({"adangd_k_lemma", "adangd_k_convex_rate",
                   "adangd_k_smooth_rate"})) {
      compare("adangd_k_lemma",
              [&] { return adangd_k_bound(s.grad_norms, D, k); });
      if (!k12 || !f.lipschitz_G) {
        skip("adangd_k_convex_rate", BoundStatus::not_applicable,
             "needs k in {1, 2} and a Lipschitz bound");
      } else {
        compare("adangd_k_convex_rate",
                [&] { return convex_rate_bound(*f.lipschitz_G, D, T); });
      }
      if (!k12 || !smooth_ok) {
        skip("adangd_k_smooth_rate", BoundStatus::not_applicable,
             "needs k in {1, 2}, smoothness and an interior optimum");
      } else {
        compare("adangd_k_smooth_rate", [&] {
          return smooth_rate_bounds(T, D, *f.smoothness_beta).adangd1;
        });
      }
    }
  } else if (algo == "sc_adangd") {
    const bool k12 = k == 1.0 || k == 2.0;
    if (evaluable({"sc_adangd_k_lemma", "sc_adangd_k_strongly_convex_rate",
                   "sc_adangd_k_smooth_rate"})) {
      compare("sc_adangd_k_lemma",
              [&] { return sc_adangd_k_bound(s.grad_norms, H, k); });
      if (!k12 || !f.lipschitz_G) {
        skip("sc_adangd_k_strongly_convex_rate", BoundStatus::not_applicable,
             "needs k in {1, 2} and a Lipschitz bound");
      } else {
        compare("sc_adangd_k_strongly_convex_rate", [&] {
          return strongly_convex_rate_bound(*f.lipschitz_G, H, T);
        });
      }
      if (!k12 || !smooth_ok || !f.lipschitz_G) {
        skip("sc_adangd_k_smooth_rate", BoundStatus::not_applicable,
             "needs k in {1, 2}, smoothness and an interior optimum");
      } else {
        const ScSmoothRates rates =
            sc_smooth_rate_bounds(T, *f.lipschitz_G, H, *f.smoothness_beta);
        if (k == 1.0) {
          compare("sc_adangd_k_smooth_rate", [&] { return rates.sc1; });
        } else if (rates.sc2_in_regime) {
          compare("sc_adangd_k_smooth_rate", [&] { return rates.sc2; });
        } else {
          skip("sc_adangd_k_smooth_rate", BoundStatus::out_of_regime,
               "exp((H/beta) T) / 3 < 1");
        }
      }
    }
  } else if (algo == "adagrad") {
    if (evaluable({"adagrad_regret", "adagrad_online_to_batch"})) {
      const double bound = adagrad_regret_bound(s.grad_norms, D);
      const double f_star =
          f.known_optimum ? f.known_optimum->value
                          : std::numeric_limits<double>::quiet_NaN();
      out.push_back(BoundReport::compare(
          "adagrad_regret", bound,
          s.loss_sum - static_cast<double>(T) * f_star, in));
      compare("adagrad_online_to_batch",
              [&] { return bound / static_cast<double>(T); });
    }
  } else if (algo == "gd_sc_decay") {
    // GD with eta_t = 1/(H t) and uniform averaging is SC-AdaNGD_0.
    if (evaluable({"gd_sc_decay_lemma"})) {
      compare("gd_sc_decay_lemma",
              [&] { return sc_adangd_k_bound(s.grad_norms, H, 0.0); });
    }
  } else if (algo == "lazy_sgd" || algo == "minibatch_sgd") {
    const std::size_t expected =
        algo == "lazy_sgd" ? cfg.T : (cfg.T / cfg.algorithm.b) * cfg.algorithm.b;
    BoundReport budget = BoundReport::compare(
        algo + "_oracle_budget", static_cast<double>(expected),
        static_cast<double>(s.oracle_calls), in, 0.0);
    if (s.oracle_calls != expected) {
      budget.satisfied = false;
      budget.status = BoundStatus::violated;
    }
    out.push_back(std::move(budget));
  }
  return out;
}

bool any_violated(const std::vector<BoundReport>& reports) {
  return std::any_of(reports.begin(), reports.end(),
                     [](const BoundReport& r) { return r.failed(); });
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& config) {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
    return std::filesystem::path(env);
  }
  return std::filesystem::path(config.output_path.empty() ? "."
                                                          : config.output_path);
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::size_t> csv_row_indices(std::size_t n_records) {
  std::vector<std::size_t> rows;
  if (n_records <= kDownsampleAbove) {
    rows.resize(n_records);
    for (std::size_t i = 0; i < n_records; ++i) rows[i] = i;
    return rows;
  }
  const std::size_t stride =
      (n_records + kDownsampleTargetRows - 1) / kDownsampleTargetRows;
  for (std::size_t i = 0; i < n_records; i += stride) rows.push_back(i);
  if (rows.back() != n_records - 1) rows.push_back(n_records - 1);
  return rows;
}

void write_trace_csv(const Trace& trace, const std::string& run_id,
                     std::ostream& out) {
  out << "run_id,s,t_oracle_calls,loss,grad_norm_or_estimate,eta,Q,weight,"
         "minibatch_n\n";
  for (std::size_t i : csv_row_indices(trace.records.size())) {
    const TraceRecord& r = trace.records[i];
    out << run_id << ',' << r.iteration << ',' << r.oracle_calls << ','
        << format_real(r.loss) << ',' << format_real(r.grad_norm) << ','
        << format_real(r.eta) << ',' << format_real(r.Q) << ','
        << format_real(r.weight) << ',' << r.minibatch_n << '\n';
  }
}

json result_to_json(const RunResult& result) {
  const RunStatistics& s = result.stats;
  json norms = json::array();
  for (double n : s.grad_norms) norms.push_back(real_to_json(n));
  return json{
      {"run_id", result.config.run_id},
      {"seed", result.config.seed},
      {"config", result.config.raw},
      {"final",
       {{"x_bar", vector_to_json(result.x_bar)},
        {"f_bar", real_to_json(s.f_bar)},
        {"excess", real_to_json(s.excess)},
        {"oracle_calls", s.oracle_calls},
        {"halt_reason", std::string(to_string(s.halt_reason))},
        {"records", s.records},
        {"rescale_exponent", s.rescale_exponent}}},
      {"statistics",
       {{"grad_norms", std::move(norms)},
        {"loss_sum", real_to_json(s.loss_sum)},
        {"oracle_bound_G", optional_to_json(s.oracle_bound_G)},
        {"m0", optional_to_json(s.m0)},
        {"eta0", optional_to_json(s.eta0)},
        {"ae_max_sqrtN_gnorm", optional_to_json(s.ae_max_sqrtN_gnorm)}}},
      {"bound_reports", result.bound_reports}};
}

RunResult result_from_json(const json& j) {
  try {
    RunResult r;
    r.config = parse_config(j.at("config"));
    const json& fin = j.at("final");
    const json& st = j.at("statistics");
    r.x_bar = vector_from_json(fin.at("x_bar"));
    RunStatistics& s = r.stats;
    s.f_bar = real_from_json(fin.at("f_bar"));
    s.excess = real_from_json(fin.at("excess"));
    s.oracle_calls = fin.at("oracle_calls").get<std::size_t>();
    s.halt_reason = halt_from_string(fin.at("halt_reason").get<std::string>());
    s.records = fin.at("records").get<std::size_t>();
    s.rescale_exponent = fin.at("rescale_exponent").get<std::int64_t>();
    for (const auto& n : st.at("grad_norms")) {
      s.grad_norms.push_back(real_from_json(n));
    }
    if (s.grad_norms.size() != s.records) {
      throw ConfigError("result file: grad_norms length differs from records");
    }
    s.loss_sum = real_from_json(st.at("loss_sum"));
    s.oracle_bound_G = optional_from_json(st, "oracle_bound_G");
    s.m0 = optional_from_json(st, "m0");
    s.eta0 = optional_from_json(st, "eta0");
    s.ae_max_sqrtN_gnorm = optional_from_json(st, "ae_max_sqrtN_gnorm");
    if (j.contains("bound_reports")) {
      r.bound_reports = j.at("bound_reports").get<std::vector<BoundReport>>();
    }
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed result file: ") + e.what());
  }
}

RunArtifacts write_run(const RunResult& result,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string& id = result.config.run_id;
  RunArtifacts paths{dir / (id + ".trace.csv"), dir / (id + ".result.json"),
                     dir / (id + ".timing.json")};
  std::ostringstream csv;
  write_trace_csv(result.trace, id, csv);
  write_text(paths.trace_csv, csv.str());
  write_text(paths.result_json, result_to_json(result).dump(2) + "\n");
  write_text(paths.timing_json,
             json{{"run_id", id},
                  {"wall_time_seconds", result.wall_time_seconds}}
                     .dump(2) +
                 "\n");
  return paths;
}

void write_reports(const std::vector<BoundReport>& reports,
                   const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  write_text(path, json(reports).dump(2) + "\n");
}

SweepGrid SweepGrid::from_json(const json& j) {
  try {
    if (!j.is_object()) throw ConfigError("grid must be a JSON object");
    reject_unknown_keys(j, {"vary", "seeds"}, "grid");
    SweepGrid g;
    if (!j.contains("seeds") || !j.at("seeds").is_array()) {
      throw ConfigError("grid needs a 'seeds' list");
    }
    for (const auto& s : j.at("seeds")) {
      const bool ok = s.is_number_unsigned() ||
                      (s.is_number_integer() && s.get<std::int64_t>() >= 0);
      if (!ok) throw ConfigError("seeds must be non-negative integers");
      g.seeds.push_back(s.get<std::uint64_t>());
    }
    if (g.seeds.empty()) throw ConfigError("grid seed list is empty");
    if (j.contains("vary")) {
      if (!j.at("vary").is_object()) throw ConfigError("'vary' must be an object");
      for (const auto& [path, values] : j.at("vary").items()) {
        if (path == "seed" || path == "run_id") {
          throw ConfigError("'" + path + "' cannot be varied");
        }
        if (!values.is_array() || values.empty()) {
          throw ConfigError("vary." + path + " must be a non-empty list");
        }
        g.vary.emplace_back(path, std::vector<json>(values.begin(), values.end()));
      }
    }
    return g;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed grid: ") + e.what());
  }
}

std::size_t SweepGrid::cell_count() const {
  std::size_t n = 1;
  for (const auto& [path, values] : vary) n *= values.size();
  return n;
}

void set_dotted(json& j, const std::string& path, const json& value) {
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw ConfigError("bad dotted path '" + path + "'");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    if (!node->contains(key)) (*node)[key] = json::object();
    node = &(*node)[key];
    if (!node->is_object()) {
      throw ConfigError("dotted path '" + path + "' crosses a non-object");
    }
    start = dot + 1;
  }
}

BoundReport lazy_sgd_mean_excess_report(const std::vector<SweepCell>& runs,
                                        double slack) {
  std::vector<const SweepCell*> ok;
  for (const auto& r : runs) {
    if (r.ok && r.algorithm == "lazy_sgd") ok.push_back(&r);
  }
  if (ok.empty()) {
    return BoundReport::skipped("lazy_sgd_mean_excess",
                                BoundStatus::not_applicable,
                                "no completed LazySGD runs");
  }
  const SweepCell& c = *ok.front();
  CompensatedSum sum;
  for (const auto* r : ok) sum.add(r->excess);
  const double mean = sum.value() / static_cast<double>(ok.size());
  const double logT = std::log(c.T);
  json in{{"runs", ok.size()},
          {"failed_runs", runs.size() - ok.size()},
          {"T", c.T},
          {"G", c.G},
          {"D", c.D},
          {"H", c.H},
          {"p", c.lazy_p},
          {"slack", slack}};
  if (c.lazy_p == 0.5) {
    return BoundReport::compare("lazy_sgd_mean_excess",
                                slack * c.G * c.D * logT / std::sqrt(c.T),
                                mean, in);
  }
  if (c.lazy_p == 1.0 && c.H > 0.0) {
    return BoundReport::compare("lazy_sgd_mean_excess",
                                slack * c.G * c.G * logT * logT / (c.H * c.T),
                                mean, in);
  }
  return BoundReport::skipped("lazy_sgd_mean_excess",
                              BoundStatus::not_applicable,
                              "rate known only for p = 1/2 and p = 1", in);
}

SweepOutcome sweep(const json& template_config, const SweepGrid& grid,
                   const std::filesystem::path& dir) {
  if (grid.seeds.empty()) throw ConfigError("grid seed list is empty");
  std::filesystem::create_directories(dir);
  const std::string prefix =
      template_config.contains("run_id") && template_config["run_id"].is_string()
          ? template_config["run_id"].get<std::string>()
          : std::string("sweep");

  SweepOutcome outcome;
  outcome.dir = dir;
  const std::size_t n_cells = grid.cell_count();
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    json params = json::object();
    std::size_t rest = cell;
    for (const auto& [path, values] : grid.vary) {
      params[path] = values[rest % values.size()];
      rest /= values.size();
    }
    for (std::uint64_t seed : grid.seeds) {
      SweepCell c;
      c.cell = cell;
      c.seed = seed;
      c.params = params;
      c.run_id = prefix + "_c" + std::to_string(cell) + "_s" +
                 std::to_string(seed);
      outcome.cells.push_back(std::move(c));
    }
  }

  auto run_cell = [&](SweepCell& c) {
    try {
      json cfg_json = template_config;
      for (const auto& [path, value] : c.params.items()) {
        set_dotted(cfg_json, path, value);
      }
      cfg_json["seed"] = c.seed;
      cfg_json["run_id"] = c.run_id;
      const ExperimentConfig cfg = parse_config(cfg_json);
      const RunResult r = run_experiment(cfg);
      write_run(r, dir);
      write_reports(r.bound_reports, dir / (c.run_id + ".report.json"));
      const Objective f = build_objective(cfg.objective, cfg.init_radius);
      c.ok = true;
      c.f_bar = r.stats.f_bar;
      c.excess = r.stats.excess;
      c.oracle_calls = r.stats.oracle_calls;
      c.halt_reason = r.stats.halt_reason;
      c.bounds_violated = any_violated(r.bound_reports);
      c.algorithm = cfg.algorithm.name;
      c.objective = cfg.objective.kind;
      c.lazy_p = cfg.algorithm.p;
      c.T = static_cast<double>(cfg.T);
      c.D = f.feasible_set.diameter();
      c.G = r.stats.oracle_bound_G.value_or(f.lipschitz_G.value_or(0.0));
      c.H = f.strong_convexity_H;
    } catch (const std::exception& e) {
      c.ok = false;
      c.error = e.what();
    }
  };

  const std::size_t workers =
      std::max<std::size_t>(1, std::thread::hardware_concurrency());
  for (std::size_t begin = 0; begin < outcome.cells.size(); begin += workers) {
    std::vector<std::future<void>> wave;
    const std::size_t end = std::min(outcome.cells.size(), begin + workers);
    for (std::size_t i = begin; i < end; ++i) {
      wave.push_back(std::async(std::launch::async, run_cell,
                                std::ref(outcome.cells[i])));
    }
    for (auto& w : wave) w.get();
  }

  // Per grid point aggregates.
  json cells = json::array();
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    std::vector<SweepCell> runs;
    for (const auto& c : outcome.cells) {
      if (c.cell == cell) runs.push_back(c);
    }
    CompensatedSum excess;
    std::size_t ok = 0;
    for (const auto& r : runs) {
      if (r.ok) {
        excess.add(r.excess);
        ++ok;
      }
    }
    json entry{{"cell", cell},
               {"params", runs.front().params},
               {"runs", runs.size()},
               {"ok", ok},
               {"mean_excess",
                real_to_json(ok ? excess.value() / static_cast<double>(ok)
                                : std::numeric_limits<double>::quiet_NaN())}};
    const bool lazy = std::any_of(runs.begin(), runs.end(), [](const auto& r) {
      return r.ok && r.algorithm == "lazy_sgd";
    });
    if (lazy) {
      BoundReport rep = lazy_sgd_mean_excess_report(runs);
      rep.inputs["cell"] = cell;
      entry["lazy_sgd_mean_excess"] = rep;
      outcome.aggregate_reports.push_back(std::move(rep));
    }
    cells.push_back(std::move(entry));
  }
  write_text(dir / "aggregate.json",
             json{{"cells", std::move(cells)},
                  {"aggregate_reports", outcome.aggregate_reports}}
                     .dump(2) +
                 "\n");

  std::ostringstream csv;
  csv << "run_id,cell,seed";
  for (const auto& [path, values] : grid.vary) csv << ',' << csv_escape(path);
  csv << ",algorithm,objective,status,f_bar,excess,oracle_calls,halt_reason,"
         "bounds_violated,error\n";
  for (const auto& c : outcome.cells) {
    csv << c.run_id << ',' << c.cell << ',' << c.seed;
    for (const auto& [path, values] : grid.vary) {
      csv << ',' << csv_escape(c.params.at(path).dump());
    }
    csv << ',' << c.algorithm << ',' << c.objective << ','
        << (c.ok ? "ok" : "error") << ','
        << (c.ok ? format_real(c.f_bar) : "") << ','
        << (c.ok ? format_real(c.excess) : "") << ','
        << (c.ok ? std::to_string(c.oracle_calls) : "") << ','
        << (c.ok ? std::string(to_string(c.halt_reason)) : "") << ','
        << (c.ok ? (c.bounds_violated ? "true" : "false") : "") << ','
        << csv_escape(c.error) << '\n';
  }
  write_text(dir / "summary.csv", csv.str());
  return outcome;
}

}  // namespace adangd
