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

#include "adangd/stochastic.hpp"

#include <algorithm>
#include <cmath>

#include "adangd/error.hpp"
#include "adangd/numerics.hpp"

namespace adangd {

NoisyGradientOracle::NoisyGradientOracle(Objective objective,
                                         double noise_sigma,
                                         std::uint64_t seed)
    : objective_(std::move(objective)),
      sigma_(noise_sigma),
      seed_(seed),
      rng_(seed) {
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw ConfigError("noise sigma must be finite and >= 0");
  }
  if (!objective_.lipschitz_G) {
    throw ConfigError(objective_.name +
                      ": a noisy oracle needs a declared Lipschitz bound");
  }
  bound_G_ = *objective_.lipschitz_G + sigma_;
}

Vector NoisyGradientOracle::perturb(const Vector& gradient) {
  ++calls_;
  if (sigma_ == 0.0) return gradient;
  Vector u(gradient.size());
  double len = 0.0;
  do {
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = normal_(rng_);
    len = u.norm();
  } while (!(len > 0.0));
  return gradient + (sigma_ / len) * u;
}

Vector NoisyGradientOracle::sample(const Vector& x) {
  return perturb(objective_.subgradient(x));
}

std::function<Vector()> NoisyGradientOracle::sampler_at(const Vector& x) {
  return [this, g = objective_.subgradient(x)]() { return perturb(g); };
}

double default_m0(double G, double delta, std::size_t Tmax) {
  if (!(G > 0.0)) throw ContractViolation("default_m0: G must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ContractViolation("default_m0: delta must lie in (0, 1)");
  }
  if (Tmax < 1) throw ContractViolation("default_m0: Tmax must be >= 1");
  const double levels = 1.0 + std::log2(static_cast<double>(Tmax));
  return 6.0 * G * (1.0 + std::sqrt(std::log(levels / delta)));
}

AEConfig AEConfig::with_default_m0(double G, double delta,
                                   std::size_t sample_budget) {
  return {sample_budget, default_m0(G, delta, sample_budget), delta};
}

AEResult adaptive_estimate(const SampleSource& source, std::size_t budget,
                           double m0, std::vector<Vector>* sample_log) {
  if (budget < 1) throw ContractViolation("AE: sample budget must be >= 1");
  if (!(m0 > 0.0)) throw ContractViolation("AE: m0 must be > 0");

  Vector sum;
  AEResult result;
  std::size_t batch = 1;
  while (result.N < budget) {
    const std::size_t take = std::min(batch, budget - result.N);
    // Draw the whole batch before touching the running mean.
    Vector batch_sum = Vector::Zero(sum.size());
    for (std::size_t j = 0; j < take; ++j) {
      Vector s = source();
      if (batch_sum.size() == 0) batch_sum = Vector::Zero(s.size());
      require_same_dim(batch_sum, s, "AE sample");
      batch_sum += s;
      if (sample_log) sample_log->push_back(std::move(s));
    }
    sum = sum.size() == 0 ? batch_sum : (sum + batch_sum).eval();
    result.N += take;
    result.g_tilde = sum / static_cast<double>(result.N);
    if (result.g_tilde.norm() >
        3.0 * m0 / std::sqrt(static_cast<double>(result.N))) {
      return result;
    }
    batch *= 2;
  }
  return result;
}

double lazy_sgd_convex_eta0(double D, double G) {
  return D / (std::sqrt(2.0) * G);
}

double lazy_sgd_strongly_convex_eta0(double H) { return 1.0 / H; }

Trace lazy_sgd_run(NoisyGradientOracle& oracle, const LazySgdConfig& cfg) {
  const Objective& f = oracle.objective();
  if (cfg.total_budget < 1) {
    throw ContractViolation("LazySGD: total budget must be >= 1");
  }
  if (!(cfg.eta0 > 0.0)) throw ContractViolation("LazySGD: eta0 must be > 0");
  if (!(cfg.p >= 0.0)) throw ContractViolation("LazySGD: p must be >= 0");
  if (!(cfg.m0 > 0.0)) throw ContractViolation("LazySGD: m0 must be > 0");
  if (f.dim != cfg.set.dim() || cfg.x1.size() != cfg.set.dim()) {
    throw ContractViolation("LazySGD: dimension mismatch");
  }
  require_finite(cfg.x1, "x1");

  const std::size_t T = cfg.total_budget;
  Vector x = cfg.set.project(cfg.x1);
  std::size_t t = 0;
  CompensatedSum practical_clock;
  WeightedAverage average;
  std::vector<ScaledReal> raw_weights;
  Trace trace;

  for (std::size_t s = 1; t < T; ++s) {
    const AEResult ae = adaptive_estimate(oracle.sampler_at(x), T - t, cfg.m0);
    t += ae.N;
    const double gnorm = ae.g_tilde.norm();

    TraceRecord rec;
    rec.iteration = s;
    rec.oracle_calls = t;
    rec.x = x;
    rec.grad_norm = gnorm;
    rec.loss = f.value(x);
    rec.minibatch_n = ae.N;

    Vector step;
    ScaledReal weight;
    double clock = 0.0;
    if (cfg.mode == LazySgdMode::theoretical) {
      clock = static_cast<double>(t);
      weight = ScaledReal::from_double(static_cast<double>(ae.N));
      step = static_cast<double>(ae.N) * ae.g_tilde;
    } else {
      if (!(gnorm > cfg.grad_floor_eps)) {
        rec.Q = practical_clock.value();
        rec.eta = trace.records.empty() ? 0.0 : trace.records.back().eta;
        rec.weight = 1.0;
        for (auto& r : trace.records) r.weight = 0.0;
        trace.records.push_back(std::move(rec));
        trace.x_bar = x;
        trace.f_bar = f.value(x);
        trace.halt_reason = HaltReason::gradient_floor;
        trace.oracle_calls = t;
        return trace;
      }
      weight = ScaledReal::pow(gnorm, -2.0);
      practical_clock.add(weight.to_double());
      clock = practical_clock.value();
      step = ae.g_tilde / (gnorm * gnorm);
    }
    const double eta = cfg.eta0 / std::pow(clock, cfg.p);
    rec.eta = eta;
    rec.Q = clock;
    trace.records.push_back(std::move(rec));
    average.add(x, weight);
    raw_weights.push_back(weight);

    x = cfg.set.project(x - eta * step);
  }

  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    trace.records[i].weight =
        cfg.mode == LazySgdMode::theoretical
            ? static_cast<double>(trace.records[i].minibatch_n) /
                  static_cast<double>(T)
            : average.normalized(raw_weights[i]);
  }
  trace.x_bar = average.mean();
  trace.f_bar = f.value(trace.x_bar);
  trace.oracle_calls = t;
  trace.rescale_exponent = average.total_weight().rescale_exponent();
  return trace;
}

double StepSchedule::at(std::size_t t) const {
  return eta0 / std::pow(static_cast<double>(t), p);
}

Trace minibatch_sgd_run(NoisyGradientOracle& oracle,
                        const MinibatchSgdConfig& cfg) {
  const Objective& f = oracle.objective();
  if (cfg.batch_size < 1) throw ContractViolation("minibatch: b must be >= 1");
  if (cfg.iterations < 1) {
    throw ContractViolation("minibatch: iterations must be >= 1");
  }
  if (f.dim != cfg.set.dim() || cfg.x1.size() != cfg.set.dim()) {
    throw ContractViolation("minibatch SGD: dimension mismatch");
  }
  require_finite(cfg.x1, "x1");

  Vector x = cfg.set.project(cfg.x1);
  WeightedAverage average;
  Trace trace;
  trace.records.reserve(cfg.iterations);
  const double b = static_cast<double>(cfg.batch_size);

  for (std::size_t s = 1; s <= cfg.iterations; ++s) {
    const auto draw = oracle.sampler_at(x);
    Vector g = draw();
    for (std::size_t j = 1; j < cfg.batch_size; ++j) g += draw();
    g /= b;
    const double eta = cfg.schedule.at(s);

    TraceRecord rec;
    rec.iteration = s;
    rec.oracle_calls = s * cfg.batch_size;
    rec.x = x;
    rec.grad_norm = g.norm();
    rec.loss = f.value(x);
    rec.eta = eta;
    rec.weight = 1.0 / static_cast<double>(cfg.iterations);
    rec.minibatch_n = cfg.batch_size;
    trace.records.push_back(std::move(rec));
    average.add(x, ScaledReal::from_double(1.0));

    if (s < cfg.iterations) x = cfg.set.project(x - eta * g);
  }
  trace.x_bar = average.mean();
  trace.f_bar = f.value(trace.x_bar);
  trace.oracle_calls = cfg.iterations * cfg.batch_size;
  return trace;
}

}  // namespace adangd
