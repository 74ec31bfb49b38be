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

// Deterministic full-gradient methods.
//
// AdaNGD_k runs AdaGrad on the normalised gradients g_t / |g_t|^k and returns
// the iterates averaged with weights proportional to |g_t|^-k:
//
//   Q_t   = Q_{t-1} + |g_t|^{-2(k-1)}
//   eta_t = D / sqrt(2 Q_t)
//   x_t+1 = Proj(x_t - eta_t g_t / |g_t|^k)
//
// SC-AdaNGD_k is the strongly-convex counterpart with Q_t = Q_{t-1} +
// |g_t|^-k and eta_t = 1 / (H Q_t). Both consume exactly T gradients: T-1
// steps plus a final gradient at x_T that only contributes its averaging
// weight. k = 0 recovers AdaGrad and GD with eta_t = 1/(H t) respectively.
//
// A gradient with |g_t| <= grad_floor_eps stops the run and the current
// iterate is returned as the output.

#ifndef ADANGD_OFFLINE_HPP_
#define ADANGD_OFFLINE_HPP_

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>

#include "adangd/geometry.hpp"
#include "adangd/numerics.hpp"
#include "adangd/objectives.hpp"
#include "adangd/trace.hpp"

namespace adangd {

inline constexpr double kDefaultGradFloor = 1e-12;

struct AdaNgdConfig {
  double k = 1.0;
  std::size_t iterations = 1;
  Vector x1;
  ConvexSet set;
  double grad_floor_eps = kDefaultGradFloor;
};

struct ScAdaNgdConfig {
  double k = 1.0;
  std::size_t iterations = 1;
  Vector x1;
  ConvexSet set;
  double strong_convexity_H = 1.0;
  double grad_floor_eps = kDefaultGradFloor;
};

// Mutable state of one AdaNGD / SC-AdaNGD run. x is the next query point.
struct OptimizerState {
  std::size_t t = 0;
  Vector x;
  ScaledSum Q;
  double eta = std::numeric_limits<double>::infinity();
  WeightedAverage average;
  ScaledReal last_weight;
  double last_grad_norm = 0.0;

  double Q_value() const { return Q.to_double(); }
  const Vector& running_average() const { return average.mean(); }
  std::int64_t rescale_exponent() const {
    return average.total_weight().rescale_exponent();
  }
};

// x1 is projected onto the set if it is not already feasible.
OptimizerState initial_state(const Vector& x1, const ConvexSet& set);

enum class StepStatus { advanced, gradient_floor };

// One AdaNGD_k iteration with gradient g at state.x: accumulates the
// averaging weight of state.x, updates Q and eta and moves to the projected
// normalised step. On gradient_floor the state is left untouched.
StepStatus adangd_step(OptimizerState& state, const Vector& g,
                       const AdaNgdConfig& cfg);
StepStatus sc_adangd_step(OptimizerState& state, const Vector& g,
                          const ScAdaNgdConfig& cfg);

Trace adangd_run(const Objective& objective, const AdaNgdConfig& cfg);
Trace sc_adangd_run(const Objective& objective, const ScAdaNgdConfig& cfg);

// Online losses: one (value, gradient) evaluation per round.
struct LossEvaluation {
  double value;
  Vector gradient;
};
using OnlineLoss =
    std::function<LossEvaluation(std::size_t round, const Vector& x)>;

// AdaGrad, T full steps with eta_t = D / sqrt(2 Q_t), Q_t = sum |g|^2. A round
// with Q_t = 0 leaves x unchanged (eta is recorded as +inf). The trace output
// is the uniform average of x_1..x_T; f_bar is NaN for online losses.
Trace adagrad_run(const OnlineLoss& losses, std::size_t T, const Vector& x1,
                  const ConvexSet& set);
Trace adagrad_run(const Objective& objective, std::size_t T, const Vector& x1,
                  const ConvexSet& set);

struct StronglyConvexLossEvaluation {
  double value;
  Vector gradient;
  double strong_convexity;  // H_t > 0
};
using StronglyConvexOnlineLoss = std::function<StronglyConvexLossEvaluation(
    std::size_t round, const Vector& x)>;

// SC-AdaGrad: eta_t = 1 / sum_{tau<=t} H_tau, T full steps, uniform average.
Trace sc_adagrad_run(const StronglyConvexOnlineLoss& losses, std::size_t T,
                     const Vector& x1, const ConvexSet& set);

enum class GdMode { const_lr, sc_decay, nesterov_sc };

struct GdBaselineConfig {
  GdMode mode = GdMode::const_lr;
  std::size_t iterations = 1;
  Vector x1;
  ConvexSet set;
  // Override the objective's declared constants.
  std::optional<double> beta;
  std::optional<double> strong_convexity_H;
};

// (sqrt(beta) - sqrt(H)) / (sqrt(beta) + sqrt(H)).
double nesterov_momentum(double beta, double H);

// Projected GD baselines with the same T-gradient budget as AdaNGD.
//   const_lr:    eta = 1/beta, output x_T
//   sc_decay:    eta_t = 1/(H t), output the uniform average of x_1..x_T
//   nesterov_sc: y_t+1 = Proj(x_t - g_t / beta),
//                x_t+1 = Proj(y_t+1 + m (y_t+1 - y_t)), output x_T
// Throws ConfigError when beta (const_lr, nesterov_sc) or H (sc_decay,
// nesterov_sc) is unavailable.
Trace gd_baseline_run(const Objective& objective, const GdBaselineConfig& cfg);

}  // namespace adangd

#endif  // ADANGD_OFFLINE_HPP_
