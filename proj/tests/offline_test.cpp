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

#include <cfloat>
#include <cmath>
#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "adangd/error.hpp"
#include "adangd/offline.hpp"
#include "oracles.hpp"

namespace adangd {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Vector random_unit(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(d);
  for (int i = 0; i < d; ++i) x[i] = normal(rng);
  return x / x.norm();
}

// Objective on Ball(0, r) that serves a fixed list of gradients in order,
// regardless of the query point.
Objective scripted(std::vector<Vector> grads, double r) {
  auto calls = std::make_shared<std::size_t>(0);
  const auto d = grads.front().size();
  return Objective{
      .name = "scripted",
      .dim = d,
      .value_fn = [](const Vector&) { return 0.0; },
      .subgradient_fn =
          [calls, grads](const Vector&) {
            return grads[std::min(grads.size() - 1, (*calls)++)];
          },
      .feasible_set = ConvexSet::ball(Vector::Zero(d), r),
      .lipschitz_G = std::nullopt,
      .strong_convexity_H = 0.0,
      .smoothness_beta = std::nullopt,
      .known_optimum = std::nullopt};
}

Objective linear(const Vector& a, double r) {
  return Objective{.name = "linear",
                   .dim = a.size(),
                   .value_fn = [a](const Vector& x) { return a.dot(x); },
                   .subgradient_fn = [a](const Vector&) { return a; },
                   .feasible_set = ConvexSet::ball(Vector::Zero(a.size()), r),
                   .lipschitz_G = a.norm(),
                   .strong_convexity_H = 0.0,
                   .smoothness_beta = std::nullopt,
                   .known_optimum = std::nullopt};
}

// --- single steps ---------------------------------------------------------

TEST(AdaNgdStep, FirstStepK1) {
  const AdaNgdConfig cfg{.k = 1.0,
                         .iterations = 10,
                         .x1 = Vector::Zero(2),
                         .set = ConvexSet::ball(Vector::Zero(2), 1.0)};
  OptimizerState s = initial_state(cfg.x1, cfg.set);
  ASSERT_EQ(adangd_step(s, vec({3, 4}), cfg), StepStatus::advanced);
  EXPECT_DOUBLE_EQ(s.Q_value(), 1.0);
  EXPECT_NEAR(s.eta, std::sqrt(2.0), 1e-15);
  // -sqrt2 (0.6, 0.8) has norm sqrt2 > 1 and is projected back.
  EXPECT_NEAR(s.x[0], -0.6, 1e-15);
  EXPECT_NEAR(s.x[1], -0.8, 1e-15);
  EXPECT_EQ(s.t, 1u);
}

TEST(AdaNgdStep, FirstStepK2) {
  const AdaNgdConfig cfg{.k = 2.0,
                         .iterations = 10,
                         .x1 = Vector::Zero(2),
                         .set = ConvexSet::ball(Vector::Zero(2), 1.0)};
  OptimizerState s = initial_state(cfg.x1, cfg.set);
  adangd_step(s, vec({3, 4}), cfg);
  EXPECT_NEAR(s.Q_value(), 0.04, 1e-17);
  EXPECT_NEAR(s.eta, 2.0 / std::sqrt(0.08), 1e-13);
  // step eta * (0.12, 0.16) = (3, 4) / sqrt2 (norm 3.54), projected to norm 1
  EXPECT_NEAR(s.x[0], -0.6, 1e-15);
}

TEST(AdaNgdStep, FloorLeavesStateUntouched) {
  const AdaNgdConfig cfg{.k = 1.0,
                         .iterations = 10,
                         .x1 = vec({0.5, 0.0}),
                         .set = ConvexSet::ball(Vector::Zero(2), 1.0)};
  OptimizerState s = initial_state(cfg.x1, cfg.set);
  EXPECT_EQ(adangd_step(s, vec({1e-13, 0}), cfg), StepStatus::gradient_floor);
  EXPECT_EQ(s.t, 0u);
  EXPECT_EQ(s.x, cfg.x1);
  EXPECT_TRUE(s.Q.empty());
}

TEST(ScAdaNgdStep, UnitStepForK2) {
  const ScAdaNgdConfig cfg{.k = 2.0,
                           .iterations = 10,
                           .x1 = vec({5.0, 0.0}),
                           .set = ConvexSet::ball(Vector::Zero(2), 10.0),
                           .strong_convexity_H = 1.0};
  OptimizerState s = initial_state(cfg.x1, cfg.set);
  sc_adangd_step(s, vec({2.0, 0.0}), cfg);
  EXPECT_DOUBLE_EQ(s.Q_value(), 0.25);
  EXPECT_DOUBLE_EQ(s.eta, 4.0);
  EXPECT_DOUBLE_EQ(s.x[0], 3.0);
}

TEST(ScAdaNgd, RejectsNonPositiveH) {
  const auto f = make_quadratic_R(3);
  EXPECT_THROW(sc_adangd_run(f, {.k = 1.0,
                                 .iterations = 5,
                                 .x1 = Vector::Ones(3),
                                 .set = f.feasible_set,
                                 .strong_convexity_H = 0.0}),
               ConfigError);
}

// --- AdaGrad --------------------------------------------------------------

TEST(AdaGrad, FirstStepFormula) {
  const auto set = ConvexSet::ball(Vector::Zero(2), 1.0);  // D = 2
  const OnlineLoss losses = [](std::size_t, const Vector& x) {
    return LossEvaluation{x[0], vec({1.0, 0.0})};
  };
  const Trace tr = adagrad_run(losses, 2, Vector::Zero(2), set);
  EXPECT_DOUBLE_EQ(tr.records[0].Q, 1.0);
  EXPECT_NEAR(tr.records[0].eta, std::sqrt(2.0), 1e-15);
  EXPECT_EQ(tr.records[1].x, vec({-1.0, 0.0}));
  EXPECT_TRUE(std::isnan(tr.f_bar));
}

TEST(AdaGrad, ZeroGradientsKeepX1) {
  const auto set = ConvexSet::ball(Vector::Zero(3), 1.0);
  const OnlineLoss losses = [](std::size_t, const Vector&) {
    return LossEvaluation{0.0, Vector::Zero(3)};
  };
  const Vector x1 = vec({0.1, -0.2, 0.3});
  const Trace tr = adagrad_run(losses, 20, x1, set);
  for (const auto& r : tr.records) EXPECT_EQ(r.x, x1);
  EXPECT_EQ(tr.x_bar, x1);
}

// Random linear losses on the unit ball: regret against the closed-form best
// fixed point stays below sqrt(2 D^2 sum |g|^2).
TEST(AdaGrad, RegretBoundOnLinearLosses) {
  const int d = 5;
  const auto set = ConvexSet::ball(Vector::Zero(d), 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Vector> gs;
    const Vector drift = random_unit(d, seed + 100);
    for (int t = 0; t < 200; ++t) {
      Vector g(d);
      for (int i = 0; i < d; ++i) g[i] = normal(rng);
      gs.push_back(g + 0.3 * drift);
    }
    const OnlineLoss losses = [&gs](std::size_t t, const Vector& x) {
      return LossEvaluation{gs[t - 1].dot(x), gs[t - 1]};
    };
    const Trace tr = adagrad_run(losses, gs.size(), Vector::Zero(d), set);
    std::vector<Vector> xs;
    long double sq = 0;
    for (const auto& r : tr.records) xs.push_back(r.x);
    for (const auto& g : gs) sq += g.squaredNorm();
    const long double regret = oracle::linear_regret(gs, xs, 1.0L);
    EXPECT_LE(regret, std::sqrt(2.0L * 4.0L * sq)) << "seed " << seed;
  }
}

// --- SC-AdaGrad -----------------------------------------------------------

TEST(ScAdaGrad, FirstStepExample) {
  const auto set = ConvexSet::ball(Vector::Zero(2), 10.0);
  const StronglyConvexOnlineLoss losses = [](std::size_t, const Vector&) {
    return StronglyConvexLossEvaluation{0.0, vec({1.0, 0.0}), 2.0};
  };
  const Trace tr = sc_adagrad_run(losses, 2, vec({1.0, 1.0}), set);
  EXPECT_DOUBLE_EQ(tr.records[0].eta, 0.5);
  EXPECT_EQ(tr.records[1].x, vec({0.5, 1.0}));
}

TEST(ScAdaGrad, ConstantHGivesOneOverHt) {
  const auto set = ConvexSet::ball(Vector::Zero(1), 10.0);
  const StronglyConvexOnlineLoss losses = [](std::size_t, const Vector& x) {
    return StronglyConvexLossEvaluation{x[0] * x[0], 2.0 * x, 2.0};
  };
  const Trace tr = sc_adagrad_run(losses, 50, vec({3.0}), set);
  for (std::size_t t = 1; t <= 50; ++t) {
    EXPECT_NEAR(tr.records[t - 1].eta, 1.0 / (2.0 * t), 1e-15);
  }
}

TEST(ScAdaGrad, RejectsNonPositiveH) {
  const auto set = ConvexSet::ball(Vector::Zero(1), 1.0);
  const StronglyConvexOnlineLoss losses = [](std::size_t t, const Vector& x) {
    return StronglyConvexLossEvaluation{0.0, x, t == 3 ? 0.0 : 1.0};
  };
  EXPECT_THROW(sc_adagrad_run(losses, 5, vec({0.5}), set), ContractViolation);
}

// f_t(x) = (H_t / 2) |x - c_t|^2 with H_t in [0.5, 2]. The sum is an
// isotropic quadratic, so the best fixed point over the ball is the
// projection of sum H_t c_t / sum H_t.
TEST(ScAdaGrad, RegretBoundAgainstBestFixedPoint) {
  const int d = 3;
  const double r = 2.0;
  const auto set = ConvexSet::ball(Vector::Zero(d), r);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uh(0.5, 2.0);
    std::normal_distribution<double> normal(0.0, 1.5);
    std::vector<double> hs;
    std::vector<Vector> cs;
    for (int t = 0; t < 100; ++t) {
      hs.push_back(uh(rng));
      Vector c(d);
      for (int i = 0; i < d; ++i) c[i] = normal(rng);
      cs.push_back(c);
    }
    auto loss = [&](std::size_t t, const Vector& x) {
      return 0.5 * hs[t] * (x - cs[t]).squaredNorm();
    };
    const StronglyConvexOnlineLoss losses = [&](std::size_t t, const Vector& x) {
      return StronglyConvexLossEvaluation{loss(t - 1, x),
                                          hs[t - 1] * (x - cs[t - 1]),
                                          hs[t - 1]};
    };
    const Trace tr = sc_adagrad_run(losses, 100, Vector::Zero(d), set);

    Vector num = Vector::Zero(d);
    double den = 0.0;
    for (int t = 0; t < 100; ++t) {
      num += hs[t] * cs[t];
      den += hs[t];
    }
    Vector best = num / den;
    if (best.norm() > r) best *= r / best.norm();
    long double regret = 0, bound = 0;
    for (std::size_t t = 0; t < 100; ++t) {
      regret += loss(t, tr.records[t].x) - loss(t, best);
      bound += 0.5L * tr.records[t].eta * tr.records[t].grad_norm *
               tr.records[t].grad_norm;
    }
    // Quadratic losses with interior iterates meet the bound with equality.
    EXPECT_LE(regret, bound * (1 + 1e-12)) << "seed " << seed;

    // the closed form is not beaten by random feasible points
    std::normal_distribution<double> n1(0.0, 1.0);
    long double best_total = 0;
    for (std::size_t t = 0; t < 100; ++t) best_total += loss(t, best);
    for (int j = 0; j < 200; ++j) {
      Vector z(d);
      for (int i = 0; i < d; ++i) z[i] = best[i] + 0.1 * n1(rng);
      z = set.project(z);
      long double total = 0;
      for (std::size_t t = 0; t < 100; ++t) total += loss(t, z);
      ASSERT_GE(total, best_total - 1e-9);
    }
  }
}

// --- GD baselines ---------------------------------------------------------

TEST(GdBaseline, ConstantStepOnR) {
  const auto f = make_quadratic_R(10);
  const Vector x1 = random_unit(10, 1);
  const Trace tr = gd_baseline_run(
      f, {.mode = GdMode::const_lr, .iterations = 2, .x1 = x1,
          .set = f.feasible_set});
  const Vector expected = x1 - f.subgradient(x1) / 10.0;
  EXPECT_LT((tr.records[1].x - expected).norm(), 1e-15);
  EXPECT_EQ(tr.x_bar, tr.records[1].x);
}

TEST(GdBaseline, DecayStepIsOneOverH) {
  const auto f = make_quadratic_R(4);
  const Vector x1 = random_unit(4, 2);
  const Trace tr = gd_baseline_run(
      f, {.mode = GdMode::sc_decay, .iterations = 3, .x1 = x1,
          .set = f.feasible_set});
  const Vector expected = f.feasible_set.project(x1 - f.subgradient(x1));
  EXPECT_LT((tr.records[1].x - expected).norm(), 1e-15);
  const Vector mean =
      (tr.records[0].x + tr.records[1].x + tr.records[2].x) / 3.0;
  EXPECT_LT((tr.x_bar - mean).norm(), 1e-15);
}

TEST(GdBaseline, NesterovMomentum) {
  EXPECT_NEAR(nesterov_momentum(20.0, 2.0),
              (std::sqrt(20.0) - std::sqrt(2.0)) /
                  (std::sqrt(20.0) + std::sqrt(2.0)),
              1e-15);
  EXPECT_NEAR(nesterov_momentum(20.0, 2.0), 0.5195, 1e-4);
  const auto z = make_2d_Z();
  const Trace tr = gd_baseline_run(
      z, {.mode = GdMode::nesterov_sc, .iterations = 200,
          .x1 = vec({1.0, 1.0}), .set = z.feasible_set});
  EXPECT_LT(tr.f_bar, 1e-20);
}

TEST(GdBaseline, MissingConstantsAreConfigErrors) {
  const auto f = make_nonsmooth_F(5);
  const GdBaselineConfig cfg{.mode = GdMode::const_lr, .iterations = 5,
                             .x1 = Vector::Zero(5), .set = f.feasible_set};
  EXPECT_THROW(gd_baseline_run(f, cfg), ConfigError);
  GdBaselineConfig with_beta = cfg;
  with_beta.beta = 100.0;
  EXPECT_NO_THROW(gd_baseline_run(f, with_beta));
  GdBaselineConfig nest = with_beta;
  nest.mode = GdMode::nesterov_sc;
  nest.strong_convexity_H = 0.0;
  EXPECT_THROW(gd_baseline_run(f, nest), ConfigError);
}

// --- runs -----------------------------------------------------------------

TEST(AdaNgdRun, WeightsFollowInverseNormPowers) {
  const auto f = scripted({vec({1.0, 0.0}), vec({0.0, 2.0})}, 10.0);
  const Trace tr = adangd_run(
      f, {.k = 2.0, .iterations = 2, .x1 = Vector::Zero(2),
          .set = f.feasible_set});
  ASSERT_EQ(tr.records.size(), 2u);
  EXPECT_NEAR(tr.records[0].weight, 0.8, 1e-15);
  EXPECT_NEAR(tr.records[1].weight, 0.2, 1e-15);
}

TEST(AdaNgdRun, EqualNormsGiveUniformMean) {
  const auto f = linear(vec({0.3, -0.4}), 5.0);
  const Trace tr = adangd_run(
      f, {.k = 1.0, .iterations = 7, .x1 = vec({1.0, 1.0}),
          .set = f.feasible_set});
  Vector mean = Vector::Zero(2);
  for (const auto& r : tr.records) mean += r.x / 7.0;
  EXPECT_LT((tr.x_bar - mean).norm(), 1e-14);
  EXPECT_EQ(tr.oracle_calls, 7u);
}

TEST(AdaNgdRun, GradientFloorReturnsCurrentIterate) {
  const auto f = make_quadratic_R(5);
  const Trace tr = adangd_run(
      f, {.k = 1.0, .iterations = 50, .x1 = Vector::Zero(5),
          .set = f.feasible_set});
  EXPECT_EQ(tr.halt_reason, HaltReason::gradient_floor);
  ASSERT_EQ(tr.records.size(), 1u);
  EXPECT_EQ(tr.x_bar, Vector::Zero(5));
  EXPECT_EQ(tr.records[0].weight, 1.0);
  EXPECT_EQ(tr.f_bar, 0.0);
}

TEST(AdaNgdRun, KZeroIgnoresTheFloor) {
  // Nothing is normalised for k = 0, so zero gradients are ordinary input.
  const auto f = make_quadratic_R(5);
  const Trace a = adangd_run(
      f, {.k = 0.0, .iterations = 20, .x1 = Vector::Zero(5),
          .set = f.feasible_set});
  EXPECT_EQ(a.halt_reason, HaltReason::completed);
  EXPECT_EQ(a.records.size(), 20u);
  EXPECT_EQ(a.x_bar, Vector::Zero(5));
  EXPECT_TRUE(std::isinf(a.records.back().eta));
  const Trace b = sc_adangd_run(
      f, {.k = 0.0, .iterations = 20, .x1 = Vector::Zero(5),
          .set = f.feasible_set, .strong_convexity_H = 1.0});
  EXPECT_EQ(b.halt_reason, HaltReason::completed);
  EXPECT_DOUBLE_EQ(b.records.back().eta, 1.0 / 20);
  EXPECT_NEAR(b.weight_sum(), 1.0, 1e-15);
}

TEST(AdaNgdRun, MatchesLongDoubleReference) {
  // Short enough that no run on R reaches the gradient floor. For k = 2 the
  // steps g / |g|^2 amplify rounding, so whole trajectories are compared only
  // for k < 2 and k = 2 is checked one step at a time below.
  const auto f = make_quadratic_R(10);
  const Vector x1 = random_unit(10, 4);
  for (double k : {0.0, 1.0, 1.1}) {
    const Trace tr = adangd_run(
        f, {.k = k, .iterations = 40, .x1 = x1, .set = f.feasible_set});
    const auto ref = oracle::reference_normalized(
        [&f](const Vector& x) { return f.subgradient(x); }, x1, 2.0L, k, 40,
        false);
    ASSERT_EQ(tr.halt_reason, HaltReason::completed) << "k=" << k;
    for (std::size_t t = 0; t < 40; t += 7) {
      EXPECT_LE((tr.records[t].x - ref.iterates[t]).norm(),
                1e-9 * ref.iterates[t].norm())
          << "k=" << k << " t=" << t;
    }
    EXPECT_LE((tr.x_bar - ref.average).norm(), 1e-9 * ref.average.norm())
        << "k=" << k;
  }
}

TEST(AdaNgdRun, EachStepMatchesLongDoubleUpdate) {
  const auto f = make_quadratic_R(10);
  const Vector x1 = random_unit(10, 4);
  for (double k : {1.0, 2.0}) {
    const Trace tr = adangd_run(
        f, {.k = k, .iterations = 40, .x1 = x1, .set = f.feasible_set});
    ASSERT_EQ(tr.halt_reason, HaltReason::completed) << "k=" << k;
    long double Q = 0;
    for (std::size_t t = 0; t + 1 < tr.records.size(); ++t) {
      const Vector& x = tr.records[t].x;
      const Vector g = f.subgradient(x);
      const long double n = tr.records[t].grad_norm;
      Q += std::pow(n, -2 * ((long double)k - 1));
      const long double coef = 4.0L / std::sqrt(2 * Q) * std::pow(n, -(long double)k);
      std::vector<long double> y = oracle::from_vec(x);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= coef * g[i];
      const Vector expected = oracle::to_vec(oracle::project_ball(y, 2.0L));
      const double scale = std::max(x.norm(), (double)(coef * n));
      EXPECT_LE((tr.records[t + 1].x - expected).norm(), 1e-12 * scale)
          << "k=" << k << " t=" << t;
    }
  }
}

TEST(ScAdaNgdRun, MatchesLongDoubleReference) {
  const auto f = make_nonsmooth_F(8);
  const Vector x1 = random_unit(8, 5);
  for (double k : {0.0, 1.0, 1.1, 2.0}) {
    const Trace tr = sc_adangd_run(
        f, {.k = k, .iterations = 200, .x1 = x1, .set = f.feasible_set,
            .strong_convexity_H = 1.0});
    const auto ref = oracle::reference_normalized(
        [&f](const Vector& x) { return f.subgradient(x); }, x1, 1.0L, k, 200,
        true, 1.0L);
    EXPECT_LE((tr.x_bar - ref.average).norm(),
              1e-9 * std::max(1.0, ref.average.norm()))
        << "k=" << k;
  }
}

// k = 0 reduces AdaNGD to AdaGrad and SC-AdaNGD to GD with eta = 1/(H t).
TEST(KZeroReduction, AdaNgdIsAdaGrad) {
  const auto f = make_quadratic_R(10);
  const Vector x1 = random_unit(10, 6);
  const Trace a = adangd_run(
      f, {.k = 0.0, .iterations = 100, .x1 = x1, .set = f.feasible_set});
  const Trace b = adagrad_run(f, 100, x1, f.feasible_set);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t t = 0; t < a.records.size(); ++t) {
    EXPECT_LE((a.records[t].x - b.records[t].x).norm(),
              1e-12 * b.records[t].x.norm());
    EXPECT_NEAR(a.records[t].eta, b.records[t].eta, 1e-12 * b.records[t].eta);
    EXPECT_NEAR(a.records[t].Q, b.records[t].Q, 1e-12 * b.records[t].Q);
  }
  EXPECT_LE((a.x_bar - b.x_bar).norm(), 1e-12 * b.x_bar.norm());
}

TEST(KZeroReduction, ScAdaNgdIsDecayingGd) {
  // On R the 1/t steps zero coordinate i exactly at t = i; both methods
  // must keep going past that point.
  const auto f = make_quadratic_R(10);
  const Vector x1 = random_unit(10, 7);
  const Trace a = sc_adangd_run(
      f, {.k = 0.0, .iterations = 100, .x1 = x1, .set = f.feasible_set,
          .strong_convexity_H = 1.0});
  const Trace b = gd_baseline_run(
      f, {.mode = GdMode::sc_decay, .iterations = 100, .x1 = x1,
          .set = f.feasible_set});
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t t = 0; t < a.records.size(); ++t) {
    EXPECT_LE((a.records[t].x - b.records[t].x).norm(),
              1e-12 * b.records[t].x.norm());
    EXPECT_NEAR(a.records[t].eta, 1.0 / (t + 1.0), 1e-15);
  }
  EXPECT_LE((a.x_bar - b.x_bar).norm(), 1e-12 * b.x_bar.norm());
}

// Invariants on every (objective, algorithm) combination.
struct RunCase {
  std::string label;
  Objective f;
  std::function<Trace(const Objective&, const Vector&)> run;
  std::function<double(const Trace&, const Objective&)> lemma;  // or null
};

long double offline_bound_ref(const Trace& tr, double D, double k) {
  long double num = 0, den = 0;
  for (const auto& r : tr.records) {
    num += std::pow((long double)r.grad_norm, -2 * ((long double)k - 1));
    den += std::pow((long double)r.grad_norm, -(long double)k);
  }
  return std::sqrt(2 * (long double)D * D * num) / den;
}

long double sc_offline_bound_ref(const Trace& tr, double H, double k) {
  std::vector<long double> norms;
  for (const auto& r : tr.records) norms.push_back(r.grad_norm);
  return oracle::sc_bound_prefixes(norms, H, k).back();
}

TEST(RunProperty, InvariantsHoldOnEveryRun) {
  std::vector<Objective> objectives = {make_quadratic_R(20),
                                       make_nonsmooth_F(20), make_2d_Z()};
  for (const auto& f : objectives) {
    const Vector x1 = random_unit(static_cast<int>(f.dim), 8);
    const double D = f.feasible_set.diameter();
    const double H = f.strong_convexity_H;
    for (double k : {0.0, 1.0, 1.1, 2.0}) {
      for (bool sc : {false, true}) {
        const Trace tr =
            sc ? sc_adangd_run(f, {.k = k, .iterations = 500, .x1 = x1,
                                   .set = f.feasible_set,
                                   .strong_convexity_H = H})
               : adangd_run(f, {.k = k, .iterations = 500, .x1 = x1,
                                .set = f.feasible_set});
        const std::string label = f.name + (sc ? " sc" : " ") +
                                  " k=" + std::to_string(k);
        ASSERT_LE(tr.records.size(), 500u) << label;
        EXPECT_NEAR(tr.weight_sum(), 1.0, 1e-12) << label;
        long double jensen = 0;
        for (std::size_t t = 0; t < tr.records.size(); ++t) {
          const auto& r = tr.records[t];
          ASSERT_TRUE(f.feasible_set.contains(r.x, 1e-12)) << label;
          ASSERT_GE(r.weight, 0.0);
          if (t > 0) {
            ASSERT_LE(r.eta, tr.records[t - 1].eta) << label;
          }
          if (t > 0) {
            ASSERT_GE(r.Q, tr.records[t - 1].Q) << label;
          }
          jensen += r.weight * r.loss;
        }
        ASSERT_TRUE(f.feasible_set.contains(tr.x_bar, 1e-12)) << label;
        EXPECT_LE(tr.f_bar, jensen + 1e-9) << label;
        if (tr.halt_reason == HaltReason::completed) {
          const long double bound = sc ? sc_offline_bound_ref(tr, H, k) : offline_bound_ref(tr, D, k);
          EXPECT_LE(f.excess(tr.x_bar), bound * (1 + 1e-9) + 1e-300)
              << label;
        }
      }
    }
  }
}

// With the floor effectively disabled the weights 1/|g|^k leave the double
// range on R; the run must stay finite and keep normalised weights. Past
// about 3800 iterations the gradient underflows to exactly zero.
TEST(OverflowRegime, SmoothStronglyConvexWithoutFloor) {
  const auto f = make_quadratic_R(20);
  const Vector x1 = random_unit(20, 9);
  const Trace tr = sc_adangd_run(
      f, {.k = 2.0, .iterations = 3000, .x1 = x1, .set = f.feasible_set,
          .strong_convexity_H = 1.0, .grad_floor_eps = DBL_MIN});
  EXPECT_EQ(tr.halt_reason, HaltReason::completed);
  EXPECT_GT(tr.rescale_exponent, 0);
  EXPECT_TRUE(tr.x_bar.allFinite());
  EXPECT_NEAR(tr.weight_sum(), 1.0, 1e-12);
  EXPECT_LT(tr.f_bar, 1e-100);
}

TEST(Validation, DimensionMismatch) {
  const auto f = make_quadratic_R(3);
  EXPECT_THROW(adangd_run(f, {.k = 1.0, .iterations = 5, .x1 = Vector::Ones(2),
                              .set = f.feasible_set}),
               ContractViolation);
  EXPECT_THROW(adangd_run(f, {.k = 1.0, .iterations = 0, .x1 = Vector::Ones(3),
                              .set = f.feasible_set}),
               ContractViolation);
}

TEST(Validation, InfeasibleStartIsProjected) {
  const auto f = make_quadratic_R(3, 1.0);
  const Trace tr = adangd_run(
      f, {.k = 1.0, .iterations = 3, .x1 = Vector::Constant(3, 5.0),
          .set = f.feasible_set});
  EXPECT_NEAR(tr.records[0].x.norm(), 1.0, 1e-15);
}

}  // namespace
}  // namespace adangd
