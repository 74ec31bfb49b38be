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

#include "adangd/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adangd/error.hpp"
#include "adangd/numerics.hpp"

namespace adangd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Zero norms are only degenerate when some power is negative, i.e. k != 0.
void require_positive_norms(const std::vector<double>& norms, double k,
                            std::string_view what) {
  for (double n : norms) {
    if (!std::isfinite(n) || n < 0.0) {
      throw ContractViolation(std::string(what) + ": norms must be finite, >= 0");
    }
    if (n == 0.0 && k != 0.0) {
      throw DegenerateInput(std::string(what) + ": zero gradient norm");
    }
  }
}

// n^p with 0^0 = 1 and 0^p = 0 for p > 0.
ScaledReal norm_power(double n, double p) {
  if (p == 0.0) return ScaledReal::from_double(1.0);
  if (n == 0.0) return ScaledReal::from_double(0.0);
  return ScaledReal::pow(n, p);
}

}  // namespace

nlohmann::json real_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double real_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return kNaN;
  throw ConfigError("not a real number: " + s);
}

std::string_view to_string(BoundStatus status) {
  switch (status) {
    case BoundStatus::satisfied:
      return "satisfied";
    case BoundStatus::violated:
      return "violated";
    case BoundStatus::not_applicable:
      return "not_applicable";
    case BoundStatus::out_of_regime:
      return "out_of_regime";
    case BoundStatus::degenerate:
      return "degenerate";
  }
  return "unknown";
}

BoundStatus bound_status_from_string(std::string_view s) {
  for (auto st : {BoundStatus::satisfied, BoundStatus::violated,
                  BoundStatus::not_applicable, BoundStatus::out_of_regime,
                  BoundStatus::degenerate}) {
    if (to_string(st) == s) return st;
  }
  throw ConfigError("unknown bound status: " + std::string(s));
}

BoundReport BoundReport::compare(std::string name, double stated,
                                 double measured, nlohmann::json inputs,
                                 double rel_tol) {
  BoundReport r;
  r.name = std::move(name);
  r.stated = stated;
  r.measured = measured;
  r.tolerance = rel_tol * std::abs(stated);
  if (!std::isfinite(r.tolerance)) r.tolerance = 0.0;
  r.satisfied = !std::isnan(stated) && !std::isnan(measured) &&
                measured <= stated + r.tolerance;
  r.status = r.satisfied ? BoundStatus::satisfied : BoundStatus::violated;
  r.inputs = std::move(inputs);
  return r;
}

BoundReport BoundReport::skipped(std::string name, BoundStatus status,
                                 std::string reason, nlohmann::json inputs) {
  if (status == BoundStatus::satisfied || status == BoundStatus::violated) {
    throw ContractViolation("skipped report needs a non-evaluated status");
  }
  BoundReport r;
  r.name = std::move(name);
  r.stated = kNaN;
  r.measured = kNaN;
  r.status = status;
  r.inputs = std::move(inputs);
  r.inputs["reason"] = std::move(reason);
  return r;
}

void to_json(nlohmann::json& j, const BoundReport& r) {
  j = nlohmann::json{{"bound_name", r.name},
                     {"stated_value", real_to_json(r.stated)},
                     {"measured_value", real_to_json(r.measured)},
                     {"tolerance", real_to_json(r.tolerance)},
                     {"satisfied", r.satisfied},
                     {"status", std::string(to_string(r.status))},
                     {"inputs_digest", r.inputs}};
}

void from_json(const nlohmann::json& j, BoundReport& r) {
  r.name = j.at("bound_name").get<std::string>();
  r.stated = real_from_json(j.at("stated_value"));
  r.measured = real_from_json(j.at("measured_value"));
  r.tolerance = real_from_json(j.at("tolerance"));
  r.satisfied = j.at("satisfied").get<bool>();
  r.status = bound_status_from_string(j.at("status").get<std::string>());
  r.inputs = j.value("inputs_digest", nlohmann::json::object());
}

nlohmann::json norms_digest(const std::vector<double>& norms) {
  nlohmann::json j{{"count", norms.size()}};
  if (!norms.empty()) {
    const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
    j["min"] = real_to_json(*lo);
    j["max"] = real_to_json(*hi);
    j["first"] = real_to_json(norms.front());
    j["last"] = real_to_json(norms.back());
  }
  return j;
}

double adagrad_regret_bound(const std::vector<double>& norms, double D) {
  CompensatedSum sq;
  for (double n : norms) {
    if (!(n >= 0.0)) throw ContractViolation("regret bound: norms must be >= 0");
    sq.add(n * n);
  }
  return std::sqrt(2.0 * D * D * sq.value());
}

double adangd_k_bound(const std::vector<double>& norms, double D, double k) {
  require_positive_norms(norms, k, "adangd_k_bound");
  if (norms.empty()) throw DegenerateInput("adangd_k_bound: no gradients");
  ScaledSum num;
  ScaledSum den;
  for (double n : norms) {
    num.add(norm_power(n, -2.0 * (k - 1.0)));
    den.add(norm_power(n, -k));
  }
  // Both sums carry their own power-of-two shift; combine as ScaledReals.
  const ScaledReal value =
      ScaledReal::from_double(std::sqrt(2.0) * D) * sqrt(num.total()) /
      den.total();
  return value.to_double();
}

double sc_adangd_k_bound(const std::vector<double>& norms, double H,
                         double k) {
  require_positive_norms(norms, k, "sc_adangd_k_bound");
  if (norms.empty()) throw DegenerateInput("sc_adangd_k_bound: no gradients");
  if (!(H > 0.0)) throw ContractViolation("sc_adangd_k_bound: H must be > 0");
  ScaledSum prefix;
  ScaledSum terms;
  for (double n : norms) {
    prefix.add(norm_power(n, -k));
    terms.add(norm_power(n, -2.0 * (k - 1.0)) / prefix.total());
  }
  const ScaledReal value =
      terms.total() / (ScaledReal::from_double(2.0 * H) * prefix.total());
  return value.to_double();
}

double convex_rate_bound(double G, double D, std::size_t T) {
  if (T < 1) throw ContractViolation("convex_rate_bound: T must be >= 1");
  return std::sqrt(2.0) * G * D / std::sqrt(static_cast<double>(T));
}

double strongly_convex_rate_bound(double G, double H, std::size_t T) {
  if (T < 1) throw ContractViolation("strongly_convex_rate_bound: T >= 1");
  const double t = static_cast<double>(T);
  return G * G * (1.0 + std::log(t)) / (2.0 * H * t);
}

SmoothRates smooth_rate_bounds(std::size_t T, double D, double beta) {
  if (T < 1) throw ContractViolation("smooth_rate_bounds: T must be >= 1");
  if (!(beta > 0.0)) throw ContractViolation("smooth_rate_bounds: beta > 0");
  const double b = 4.0 * beta * D * D / static_cast<double>(T);
  return {b, b};
}

ScSmoothRates sc_smooth_rate_bounds(std::size_t T, double G, double H,
                                    double beta) {
  if (!(G > 0.0 && H > 0.0 && beta > 0.0)) {
    throw ContractViolation("sc_smooth_rate_bounds: constants must be > 0");
  }
  const double t = static_cast<double>(T);
  const double gamma = H / beta;
  ScSmoothRates r;
  r.condition_number = gamma;
  if (T == 0) {
    r.sc1 = std::numeric_limits<double>::infinity();
  } else {
    const double l = 1.0 + std::log(t);
    r.sc1 = (beta / H) * G * G * l * l / (H * t * t);
  }
  r.sc2 = (3.0 * G * G / (2.0 * H)) * std::exp(-gamma * t) * (1.0 + gamma * t);
  r.sc2_in_regime = std::exp(gamma * t) / 3.0 >= 1.0;
  return r;
}

BoundReport check_sqrt_sum_lemma(const std::vector<double>& a) {
  CompensatedSum running;
  CompensatedSum lhs;
  for (double v : a) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ContractViolation("sqrt-sum lemma: terms must be finite, >= 0");
    }
    running.add(v);
    if (running.value() > 0.0) lhs.add(v / std::sqrt(running.value()));
  }
  return BoundReport::compare("sqrt_sum_lemma", 2.0 * std::sqrt(running.value()),
                              lhs.value(), {{"n", a.size()}});
}

BoundReport check_log_sum_lemma(const std::vector<double>& a) {
  CompensatedSum running;
  CompensatedSum lhs;
  for (double v : a) {
    if (!(v >= 1.0) || !std::isfinite(v)) {
      throw ContractViolation("log-sum lemma: terms must be finite, >= 1");
    }
    running.add(v);
    lhs.add(v / running.value());
  }
  const double rhs = a.empty() ? 0.0 : 1.0 + std::log(running.value());
  return BoundReport::compare("log_sum_lemma", rhs, lhs.value(),
                              {{"n", a.size()}});
}

BoundReport check_smooth_grad_lemma(const Objective& objective,
                                    const std::vector<Vector>& points) {
  if (!objective.smoothness_beta || !objective.known_optimum) {
    throw ConfigError(objective.name +
                      ": smooth-gradient lemma needs beta and the optimum");
  }
  const double beta = *objective.smoothness_beta;
  const double f_star = objective.known_optimum->value;
  double worst = 0.0;
  for (const auto& x : points) {
    const double g2 = objective.subgradient(x).squaredNorm();
    const double gap = 2.0 * beta * (objective.value(x) - f_star);
    double ratio = 0.0;
    if (gap > 0.0) {
      ratio = g2 / gap;
    } else if (g2 > 0.0) {
      ratio = std::numeric_limits<double>::infinity();
    }
    worst = std::max(worst, ratio);
  }
  return BoundReport::compare(
      "smooth_grad_lemma", 1.0, worst,
      {{"objective", objective.name}, {"beta", beta}, {"points", points.size()}});
}

std::pair<BoundReport, BoundReport> harmonic_vs_arithmetic_check(
    const std::vector<double>& a) {
  if (a.empty()) throw ContractViolation("harmonic check: empty list");
  CompensatedSum sum;
  CompensatedSum inv;
  CompensatedSum sq;
  CompensatedSum inv_sq;
  for (double v : a) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ContractViolation("harmonic check: terms must be finite, > 0");
    }
    sum.add(v);
    inv.add(1.0 / v);
    sq.add(v * v);
    inv_sq.add(1.0 / (v * v));
  }
  const double n = static_cast<double>(a.size());
  const nlohmann::json in{{"n", a.size()}};
  return {BoundReport::compare("harmonic_le_arithmetic", sum.value() / n,
                               n / inv.value(), in),
          BoundReport::compare("harmonic_norm_corollary",
                               std::sqrt(sq.value()) / n,
                               1.0 / std::sqrt(inv_sq.value()), in)};
}

AEBracket ae_bounds(double norm_g, double m0, std::size_t Tmax) {
  if (!(m0 > 0.0)) throw ContractViolation("ae_bounds: m0 must be > 0");
  if (!(norm_g >= 0.0)) throw ContractViolation("ae_bounds: |g| must be >= 0");
  if (Tmax < 1) throw ContractViolation("ae_bounds: Tmax must be >= 1");
  const double cap = static_cast<double>(Tmax);
  if (norm_g == 0.0) return {cap, cap, 8.0 * m0};
  const double base = m0 * m0 / (norm_g * norm_g);
  return {std::min(base, cap), std::min(32.0 * base, cap), 8.0 * m0};
}

}  // namespace adangd
