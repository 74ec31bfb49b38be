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

#ifndef ADANGD_STOCHASTIC_HPP_
#define ADANGD_STOCHASTIC_HPP_

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "adangd/objectives.hpp"
#include "adangd/offline.hpp"
#include "adangd/trace.hpp"

namespace adangd {

// Bounded unbiased gradient oracle: sample = grad f(x) + sigma * u with u
// uniform on the unit sphere, so |sample| <= G + sigma almost surely.
// Owns its RNG; concurrent runs need distinct instances.
class NoisyGradientOracle {
 public:
  // Throws ConfigError if the objective declares no Lipschitz bound.
  NoisyGradientOracle(Objective objective, double noise_sigma,
                      std::uint64_t seed);

  Vector sample(const Vector& x);
  // i.i.d. samples at a fixed x; the exact gradient is computed once.
  std::function<Vector()> sampler_at(const Vector& x);

  double bound_G() const { return bound_G_; }
  double noise_sigma() const { return sigma_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t call_count() const { return calls_; }
  const Objective& objective() const { return objective_; }

 private:
  Vector perturb(const Vector& gradient);

  Objective objective_;
  double sigma_;
  std::uint64_t seed_;
  double bound_G_;
  std::size_t calls_ = 0;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

using SampleSource = std::function<Vector()>;

struct AEResult {
  Vector g_tilde;   // mean of the N consumed samples
  std::size_t N = 0;
};

struct AEConfig {
  std::size_t sample_budget = 1;
  double m0 = 1.0;
  double delta = 0.05;

  static AEConfig with_default_m0(double G, double delta,
                                  std::size_t sample_budget);
};

// m0 = 6 G (1 + sqrt(log((1 + log2 Tmax) / delta))).
double default_m0(double G, double delta, std::size_t Tmax);

// Adaptive Estimate. Draws batches of 1, 2, 4, ... samples (the last one
// capped by the remaining budget) and returns as soon as the running mean
// over all samples satisfies |g~_N| > 3 m0 / sqrt(N), or when the budget is
// spent. If sample_log is given every consumed sample is appended to it.
AEResult adaptive_estimate(const SampleSource& source, std::size_t budget,
                           double m0,
                           std::vector<Vector>* sample_log = nullptr);
inline AEResult adaptive_estimate(const SampleSource& source,
                                  const AEConfig& cfg) {
  return adaptive_estimate(source, cfg.sample_budget, cfg.m0);
}

enum class LazySgdMode {
  theoretical,  // step n_s g~_s, clock t = sum n_i, weights n_s / T
  practical,    // step g~_s / |g~_s|^2, clock and weights use 1 / |g~_s|^2
};

struct LazySgdConfig {
  std::size_t total_budget = 1;
  Vector x1;
  ConvexSet set;
  double eta0 = 1.0;
  double p = 0.5;
  LazySgdMode mode = LazySgdMode::theoretical;
  double m0 = 1.0;
  double grad_floor_eps = kDefaultGradFloor;  // practical mode only
};

// eta0 = D / (sqrt(2) G), the convex setting (use with p = 1/2).
double lazy_sgd_convex_eta0(double D, double G);
// eta0 = 1 / H, the strongly-convex setting (use with p = 1).
double lazy_sgd_strongly_convex_eta0(double H);

// LazySGD: while t < T, call AE at x_s with the remaining budget T - t,
// advance t by n_s and step x_s+1 = Proj(x_s - eta_s ghat_s) with
// eta_s = eta0 / clock^p. The sample count always drives the budget, so
// sum_s n_s == T on every run.
Trace lazy_sgd_run(NoisyGradientOracle& oracle, const LazySgdConfig& cfg);

struct StepSchedule {
  double eta0 = 1.0;
  double p = 1.0;
  double at(std::size_t t) const;
};

struct MinibatchSgdConfig {
  std::size_t batch_size = 1;
  std::size_t iterations = 1;
  Vector x1;
  ConvexSet set;
  StepSchedule schedule;
};

// Projected SGD on b-averaged samples, uniform average of x_1..x_S; exactly
// b * S oracle calls.
Trace minibatch_sgd_run(NoisyGradientOracle& oracle,
                        const MinibatchSgdConfig& cfg);

}  // namespace adangd

#endif  // ADANGD_STOCHASTIC_HPP_
