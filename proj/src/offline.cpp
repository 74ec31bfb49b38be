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

#include "adangd/offline.hpp"

#include <cmath>
#include <string>

#include "adangd/error.hpp"

namespace adangd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_problem(const Objective& objective, const ConvexSet& set,
                   const Vector& x1, std::size_t iterations) {
  if (iterations < 1) throw ContractViolation("iterations must be >= 1");
  if (objective.dim != set.dim()) {
    throw ContractViolation(objective.name +
                            ": objective and set dimensions differ");
  }
  if (x1.size() != set.dim()) {
    throw ContractViolation("x1: dimension mismatch with the feasible set");
  }
  require_finite(x1, "x1");
}

void check_gradient(const OptimizerState& state, const Vector& g) {
  require_same_dim(state.x, g, "gradient");
  require_finite(g, "gradient");
}

// D / sqrt(2 Q)
ScaledReal adagrad_eta(double D, const ScaledReal& Q) {
  return ScaledReal::from_double(D) /
         sqrt(ScaledReal::from_double(2.0) * Q);
}

StepStatus adangd_update(OptimizerState& state, const Vector& g,
                         const AdaNgdConfig& cfg, bool move) {
  check_gradient(state, g);
  const double n = g.norm();
  // k = 0 never divides by |g|, so a zero gradient is a valid input there.
  const bool unnormalized = cfg.k == 0.0;
  if (!unnormalized && !(n > cfg.grad_floor_eps)) {
    return StepStatus::gradient_floor;
  }

  const ScaledReal weight =
      unnormalized ? ScaledReal::from_double(1.0) : ScaledReal::pow(n, -cfg.k);
  state.average.add(state.x, weight);
  state.Q.add(unnormalized ? ScaledReal::from_double(n * n)
                           : ScaledReal::pow(n, -2.0 * (cfg.k - 1.0)));
  const bool q_zero = state.Q.total().is_zero();
  const ScaledReal eta =
      q_zero ? ScaledReal::from_double(1.0)
             : adagrad_eta(cfg.set.diameter(), state.Q.total());
  state.eta = q_zero ? std::numeric_limits<double>::infinity() : eta.to_double();
  state.last_weight = weight;
  state.last_grad_norm = n;
  ++state.t;
  if (move && !q_zero) {
    // eta * g / |g|^k, combined before leaving the scaled representation.
    const double coef = (eta * weight).to_double();
    state.x = cfg.set.project(state.x - coef * g);
  }
  return StepStatus::advanced;
}

StepStatus sc_adangd_update(OptimizerState& state, const Vector& g,
                            const ScAdaNgdConfig& cfg, bool move) {
  check_gradient(state, g);
  if (!(cfg.strong_convexity_H > 0.0)) {
    throw ContractViolation("SC-AdaNGD: strong convexity H must be > 0");
  }
  const double n = g.norm();
  const bool unnormalized = cfg.k == 0.0;
  if (!unnormalized && !(n > cfg.grad_floor_eps)) {
    return StepStatus::gradient_floor;
  }

  const ScaledReal weight =
      unnormalized ? ScaledReal::from_double(1.0) : ScaledReal::pow(n, -cfg.k);
  state.average.add(state.x, weight);
  state.Q.add(weight);
  state.eta = (ScaledReal::from_double(1.0) /
               (ScaledReal::from_double(cfg.strong_convexity_H) *
                state.Q.total()))
                  .to_double();
  state.last_weight = weight;
  state.last_grad_norm = n;
  ++state.t;
  if (move) {
    // eta_t / |g_t|^k = (|g_t|^-k / Q_t) / H, a ratio in (0, 1/H].
    const double coef = state.Q.ratio(weight) / cfg.strong_convexity_H;
    state.x = cfg.set.project(state.x - coef * g);
  }
  return StepStatus::advanced;
}

// Shared driver for the two normalised methods: T gradients, T-1 moves.
template <typename Update>
Trace run_normalized(const Objective& objective, const ConvexSet& set,
                     const Vector& x1, std::size_t T, Update update) {
  check_problem(objective, set, x1, T);
  OptimizerState state = initial_state(x1, set);
  Trace trace;
  trace.records.reserve(T);
  std::vector<ScaledReal> raw_weights;
  raw_weights.reserve(T);

  for (std::size_t t = 1; t <= T; ++t) {
    const Vector g = objective.subgradient(state.x);
    TraceRecord rec;
    rec.iteration = t;
    rec.oracle_calls = t;
    rec.x = state.x;
    rec.loss = objective.value(state.x);
    rec.grad_norm = g.norm();
    trace.oracle_calls = t;

    if (update(state, g, t < T) == StepStatus::gradient_floor) {
      // The current iterate becomes the output; all weight moves onto it.
      rec.eta = state.eta;
      rec.Q = state.Q_value();
      rec.weight = 1.0;
      for (auto& r : trace.records) r.weight = 0.0;
      trace.records.push_back(std::move(rec));
      trace.x_bar = state.x;
      trace.f_bar = objective.value(trace.x_bar);
      trace.halt_reason = HaltReason::gradient_floor;
      trace.rescale_exponent = state.rescale_exponent();
      return trace;
    }
    rec.eta = state.eta;
    rec.Q = state.Q_value();
    trace.records.push_back(std::move(rec));
    raw_weights.push_back(state.last_weight);
  }

  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    trace.records[i].weight = state.average.normalized(raw_weights[i]);
  }
  trace.x_bar = state.running_average();
  trace.f_bar = objective.value(trace.x_bar);
  trace.halt_reason = HaltReason::completed;
  trace.rescale_exponent = state.rescale_exponent();
  return trace;
}

}  // namespace

OptimizerState initial_state(const Vector& x1, const ConvexSet& set) {
  require_finite(x1, "x1");
  OptimizerState state;
  state.x = set.project(x1);
  return state;
}

StepStatus adangd_step(OptimizerState& state, const Vector& g,
                       const AdaNgdConfig& cfg) {
  return adangd_update(state, g, cfg, true);
}

StepStatus sc_adangd_step(OptimizerState& state, const Vector& g,
                          const ScAdaNgdConfig& cfg) {
  return sc_adangd_update(state, g, cfg, true);
}

Trace adangd_run(const Objective& objective, const AdaNgdConfig& cfg) {
  return run_normalized(objective, cfg.set, cfg.x1, cfg.iterations,
                        [&cfg](OptimizerState& s, const Vector& g, bool move) {
                          return adangd_update(s, g, cfg, move);
                        });
}

Trace sc_adangd_run(const Objective& objective, const ScAdaNgdConfig& cfg) {
  if (!(cfg.strong_convexity_H > 0.0)) {
    throw ConfigError("SC-AdaNGD requires strong convexity H > 0");
  }
  return run_normalized(objective, cfg.set, cfg.x1, cfg.iterations,
                        [&cfg](OptimizerState& s, const Vector& g, bool move) {
                          return sc_adangd_update(s, g, cfg, move);
                        });
}

Trace adagrad_run(const OnlineLoss& losses, std::size_t T, const Vector& x1,
                  const ConvexSet& set) {
  if (T < 1) throw ContractViolation("AdaGrad: T must be >= 1");
  if (x1.size() != set.dim()) throw ContractViolation("AdaGrad: x1 dimension");
  require_finite(x1, "x1");

  const double D = set.diameter();
  Vector x = set.project(x1);
  CompensatedSum Q;
  WeightedAverage average;
  Trace trace;
  trace.records.reserve(T);

  for (std::size_t t = 1; t <= T; ++t) {
    const LossEvaluation eval = losses(t, x);
    require_same_dim(x, eval.gradient, "AdaGrad gradient");
    require_finite(eval.gradient, "AdaGrad gradient");
    const double n = eval.gradient.norm();
    Q.add(n * n);
    const double q = Q.value();
    const double eta = q > 0.0 ? D / std::sqrt(2.0 * q) : kInf;

    TraceRecord rec;
    rec.iteration = t;
    rec.oracle_calls = t;
    rec.x = x;
    rec.grad_norm = n;
    rec.loss = eval.value;
    rec.eta = eta;
    rec.Q = q;
    rec.weight = 1.0 / static_cast<double>(T);
    trace.records.push_back(std::move(rec));
    average.add(x, ScaledReal::from_double(1.0));

    if (q > 0.0) x = set.project(x - eta * eval.gradient);
  }
  trace.oracle_calls = T;
  trace.x_bar = average.mean();
  trace.f_bar = std::numeric_limits<double>::quiet_NaN();
  return trace;
}

Trace adagrad_run(const Objective& objective, std::size_t T, const Vector& x1,
                  const ConvexSet& set) {
  check_problem(objective, set, x1, T);
  Trace trace = adagrad_run(
      [&objective](std::size_t, const Vector& x) {
        return LossEvaluation{objective.value(x), objective.subgradient(x)};
      },
      T, x1, set);
  trace.f_bar = objective.value(trace.x_bar);
  return trace;
}

Trace sc_adagrad_run(const StronglyConvexOnlineLoss& losses, std::size_t T,
                     const Vector& x1, const ConvexSet& set) {
  if (T < 1) throw ContractViolation("SC-AdaGrad: T must be >= 1");
  if (x1.size() != set.dim()) {
    throw ContractViolation("SC-AdaGrad: x1 dimension");
  }
  require_finite(x1, "x1");

  Vector x = set.project(x1);
  CompensatedSum total_H;
  WeightedAverage average;
  Trace trace;
  trace.records.reserve(T);

  for (std::size_t t = 1; t <= T; ++t) {
    const StronglyConvexLossEvaluation eval = losses(t, x);
    if (!(eval.strong_convexity > 0.0)) {
      throw ContractViolation("SC-AdaGrad: H_t must be > 0 (round " +
                              std::to_string(t) + ")");
    }
    require_same_dim(x, eval.gradient, "SC-AdaGrad gradient");
    require_finite(eval.gradient, "SC-AdaGrad gradient");
    total_H.add(eval.strong_convexity);
    const double eta = 1.0 / total_H.value();

    TraceRecord rec;
    rec.iteration = t;
    rec.oracle_calls = t;
    rec.x = x;
    rec.grad_norm = eval.gradient.norm();
    rec.loss = eval.value;
    rec.eta = eta;
    rec.Q = total_H.value();
    rec.weight = 1.0 / static_cast<double>(T);
    trace.records.push_back(std::move(rec));
    average.add(x, ScaledReal::from_double(1.0));

    x = set.project(x - eta * eval.gradient);
  }
  trace.oracle_calls = T;
  trace.x_bar = average.mean();
  trace.f_bar = std::numeric_limits<double>::quiet_NaN();
  return trace;
}

double nesterov_momentum(double beta, double H) {
  if (!(beta > 0.0) || !(H > 0.0)) {
    throw ConfigError("Nesterov momentum needs beta > 0 and H > 0");
  }
  const double sb = std::sqrt(beta);
  const double sh = std::sqrt(H);
  return (sb - sh) / (sb + sh);
}

Trace gd_baseline_run(const Objective& objective,
                      const GdBaselineConfig& cfg) {
  check_problem(objective, cfg.set, cfg.x1, cfg.iterations);
  const std::optional<double> beta =
      cfg.beta ? cfg.beta : objective.smoothness_beta;
  const double H = cfg.strong_convexity_H.value_or(
      objective.strong_convexity_H);
  if ((cfg.mode == GdMode::const_lr || cfg.mode == GdMode::nesterov_sc) &&
      !(beta && *beta > 0.0)) {
    throw ConfigError("GD baseline: a smoothness constant beta is required "
                      "for const_lr and nesterov_sc (" + objective.name +
                      " declares none)");
  }
  if ((cfg.mode == GdMode::sc_decay || cfg.mode == GdMode::nesterov_sc) &&
      !(H > 0.0)) {
    throw ConfigError("GD baseline: strong convexity H > 0 is required");
  }

  const std::size_t T = cfg.iterations;
  const ConvexSet& set = cfg.set;
  Vector x = set.project(cfg.x1);
  Vector y_prev = x;
  const double momentum =
      cfg.mode == GdMode::nesterov_sc ? nesterov_momentum(*beta, H) : 0.0;
  WeightedAverage average;
  Trace trace;
  trace.records.reserve(T);

  for (std::size_t t = 1; t <= T; ++t) {
    const Vector g = objective.subgradient(x);
    const double eta = cfg.mode == GdMode::sc_decay
                           ? 1.0 / (H * static_cast<double>(t))
                           : 1.0 / *beta;
    TraceRecord rec;
    rec.iteration = t;
    rec.oracle_calls = t;
    rec.x = x;
    rec.grad_norm = g.norm();
    rec.loss = objective.value(x);
    rec.eta = eta;
    trace.records.push_back(std::move(rec));
    if (cfg.mode == GdMode::sc_decay) {
      average.add(x, ScaledReal::from_double(1.0));
    }
    if (t == T) break;

    if (cfg.mode == GdMode::nesterov_sc) {
      const Vector y = set.project(x - eta * g);
      x = set.project(y + momentum * (y - y_prev));
      y_prev = y;
    } else {
      x = set.project(x - eta * g);
    }
  }

  trace.oracle_calls = T;
  if (cfg.mode == GdMode::sc_decay) {
    for (auto& r : trace.records) r.weight = 1.0 / static_cast<double>(T);
    trace.x_bar = average.mean();
  } else {
    trace.records.back().weight = 1.0;
    trace.x_bar = trace.records.back().x;
  }
  trace.f_bar = objective.value(trace.x_bar);
  return trace;
}

}  // namespace adangd
