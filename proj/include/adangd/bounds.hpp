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

// Closed-form convergence bounds and the auxiliary inequalities behind them,
// evaluated on observed gradient norms. Everything here is a pure function.

#ifndef ADANGD_BOUNDS_HPP_
#define ADANGD_BOUNDS_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "adangd/objectives.hpp"

namespace adangd {

inline constexpr double kDefaultRelativeTolerance = 1e-9;

enum class BoundStatus {
  satisfied,
  violated,
  not_applicable,
  out_of_regime,
  degenerate,
};

std::string_view to_string(BoundStatus status);
BoundStatus bound_status_from_string(std::string_view s);

// One "measured <= stated" check. satisfied is true exactly when
// measured <= stated + tolerance and both sides are numbers.
struct BoundReport {
  std::string name;
  double stated = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;
  bool satisfied = false;
  BoundStatus status = BoundStatus::not_applicable;
  nlohmann::json inputs = nlohmann::json::object();

  // tolerance = rel_tol * |stated|.
  static BoundReport compare(std::string name, double stated, double measured,
                             nlohmann::json inputs,
                             double rel_tol = kDefaultRelativeTolerance);
  // A report that was not evaluated; status must not be satisfied/violated.
  static BoundReport skipped(std::string name, BoundStatus status,
                             std::string reason,
                             nlohmann::json inputs = nlohmann::json::object());

  // Violated counts; skipped reports do not.
  bool failed() const { return status == BoundStatus::violated; }
};

// JSON has no inf or nan; these are written as the strings "inf", "-inf"
// and "nan".
nlohmann::json real_to_json(double v);
double real_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const BoundReport& r);
void from_json(const nlohmann::json& j, BoundReport& r);

// Summary of a norm sequence for report digests.
nlohmann::json norms_digest(const std::vector<double>& norms);

// sqrt(2 D^2 sum |g_t|^2).
double adagrad_regret_bound(const std::vector<double>& norms, double D);

// sqrt(2 D^2 sum |g_t|^{-2(k-1)}) / sum |g_t|^{-k}. Throws DegenerateInput on
// a zero norm.
double adangd_k_bound(const std::vector<double>& norms, double D, double k);

// (1 / (2 H S_T)) sum_t |g_t|^{-2(k-1)} / S_t with S_t = sum_{tau<=t}
// |g_tau|^{-k}. Throws DegenerateInput on a zero norm.
double sc_adangd_k_bound(const std::vector<double>& norms, double H, double k);

// Worst-case rates with every norm equal to G.
double convex_rate_bound(double G, double D, std::size_t T);  // sqrt2 GD/sqrtT
double strongly_convex_rate_bound(double G, double H,
                                  std::size_t T);  // G^2 (1+log T)/(2HT)

struct SmoothRates {
  double adangd1;
  double adangd2;
};
// 4 beta D^2 / T for both k = 1 and k = 2.
SmoothRates smooth_rate_bounds(std::size_t T, double D, double beta);

struct ScSmoothRates {
  double sc1;  // (beta/H) G^2 (1 + log T)^2 / (H T^2); +inf at T = 0
  double sc2;  // (3 G^2 / 2H) exp(-(H/beta) T) (1 + (H/beta) T)
  // (1/3) exp((H/beta) T) >= 1, the regime in which sc2 is proved.
  bool sc2_in_regime;
  double condition_number;  // H / beta
};
ScSmoothRates sc_smooth_rate_bounds(std::size_t T, double G, double H,
                                    double beta);

// sum a_i / sqrt(sum_{j<=i} a_j) <= 2 sqrt(sum a_i), a_i >= 0. Terms with a
// zero running sum are skipped.
BoundReport check_sqrt_sum_lemma(const std::vector<double>& a);

// sum a_i / sum_{j<=i} a_j <= 1 + log(sum a_i), a_i >= 1. Throws
// ContractViolation if some a_i < 1.
BoundReport check_log_sum_lemma(const std::vector<double>& a);

// |grad F(x)|^2 <= 2 beta (F(x) - F(x*)) at each point. The report measures
// the largest ratio lhs / rhs against 1. Throws ConfigError when beta or the
// optimum is missing.
BoundReport check_smooth_grad_lemma(const Objective& objective,
                                    const std::vector<Vector>& points);

// first:  harmonic mean <= arithmetic mean
// second: 1 / sqrt(sum 1/a^2) <= sqrt(sum a^2) / n
// Requires a_i > 0.
std::pair<BoundReport, BoundReport> harmonic_vs_arithmetic_check(
    const std::vector<double>& a);

struct AEBracket {
  double N_low;
  double N_high;
  double sqrtN_gnorm_cap;
};
// [min(m0^2/|g|^2, Tmax), min(32 m0^2/|g|^2, Tmax)] and 8 m0. A zero norm
// pins both ends at Tmax.
AEBracket ae_bounds(double norm_g, double m0, std::size_t Tmax);

}  // namespace adangd

#endif  // ADANGD_BOUNDS_HPP_
