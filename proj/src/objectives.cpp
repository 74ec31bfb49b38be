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

#include "adangd/objectives.hpp"

#include <cmath>

#include "adangd/error.hpp"

namespace adangd {

namespace {

void check_point(const Objective& f, const Vector& x) {
  if (x.size() != f.dim) {
    throw ContractViolation(f.name + ": dimension mismatch");
  }
  require_finite(x, f.name);
}

Vector weights_1_to_d(int d) {
  return Vector::LinSpaced(d, 1.0, static_cast<double>(d));
}

}  // namespace

double Objective::value(const Vector& x) const {
  check_point(*this, x);
  return value_fn(x);
}

Vector Objective::subgradient(const Vector& x) const {
  check_point(*this, x);
  return subgradient_fn(x);
}

double Objective::excess(const Vector& x) const {
  if (!known_optimum) throw ConfigError(name + ": no known optimum");
  return value(x) - known_optimum->value;
}

bool Objective::optimum_is_feasible() const {
  return known_optimum && feasible_set.contains(known_optimum->x);
}

Objective make_quadratic_R(int d, double ball_radius) {
  if (d < 1) throw ContractViolation("R: dimension must be >= 1");
  const Vector w = weights_1_to_d(d);
  Objective f{
      .name = "R",
      .dim = d,
      .value_fn = [w](const Vector& x) {
        return 0.5 * w.dot(x.cwiseAbs2());
      },
      .subgradient_fn = [w](const Vector& x) -> Vector {
        return w.cwiseProduct(x);
      },
      .feasible_set = ConvexSet::ball(Vector::Zero(d), ball_radius),
      .lipschitz_G = d * ball_radius,
      .strong_convexity_H = 1.0,
      .smoothness_beta = static_cast<double>(d),
      .known_optimum = KnownOptimum{Vector::Zero(d), 0.0},
  };
  return f;
}

Objective make_nonsmooth_F(int d) {
  if (d < 1) throw ContractViolation("F: dimension must be >= 1");
  const Vector w = weights_1_to_d(d);
  Objective f{
      .name = "F",
      .dim = d,
      .value_fn = [w](const Vector& x) {
        return 0.5 * w.dot(x.cwiseAbs2()) + x.lpNorm<1>();
      },
      .subgradient_fn = [w](const Vector& x) -> Vector {
        const Vector sign = x.unaryExpr(
            [](double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); });
        return w.cwiseProduct(x) + sign;
      },
      .feasible_set = ConvexSet::ball(Vector::Zero(d), 1.0),
      .lipschitz_G = d + std::sqrt(static_cast<double>(d)),
      .strong_convexity_H = 1.0,
      .smoothness_beta = std::nullopt,
      .known_optimum = KnownOptimum{Vector::Zero(d), 0.0},
  };
  return f;
}

Objective make_2d_Z(double ball_radius) {
  const Vector w = (Vector(2) << 2.0, 20.0).finished();
  Objective f{
      .name = "Z",
      .dim = 2,
      .value_fn = [](const Vector& x) {
        return x[0] * x[0] + 10.0 * x[1] * x[1];
      },
      .subgradient_fn = [w](const Vector& x) -> Vector {
        return w.cwiseProduct(x);
      },
      .feasible_set = ConvexSet::ball(Vector::Zero(2), ball_radius),
      .lipschitz_G = 20.0 * ball_radius,
      .strong_convexity_H = 2.0,
      .smoothness_beta = 20.0,
      .known_optimum = KnownOptimum{Vector::Zero(2), 0.0},
  };
  return f;
}

}  // namespace adangd
