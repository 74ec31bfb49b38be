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

#ifndef ADANGD_OBJECTIVES_HPP_
#define ADANGD_OBJECTIVES_HPP_

#include <functional>
#include <optional>
#include <string>

#include "adangd/geometry.hpp"

namespace adangd {

struct KnownOptimum {
  Vector x;
  double value;
};

// A convex objective together with the constants the convergence theory
// needs. Missing constants are std::nullopt; a missing smoothness constant
// means the objective is treated as non-smooth.
struct Objective {
  using ValueFn = std::function<double(const Vector&)>;
  using SubgradientFn = std::function<Vector(const Vector&)>;

  std::string name;
  Eigen::Index dim = 0;
  ValueFn value_fn;
  SubgradientFn subgradient_fn;
  ConvexSet feasible_set;
  std::optional<double> lipschitz_G;     // sup |g| over the feasible set
  double strong_convexity_H = 0.0;
  std::optional<double> smoothness_beta;
  std::optional<KnownOptimum> known_optimum;

  // Both validate the dimension and finiteness of x.
  double value(const Vector& x) const;
  Vector subgradient(const Vector& x) const;

  bool is_smooth() const { return smoothness_beta.has_value(); }
  // f(x) - f*, requires a known optimum.
  double excess(const Vector& x) const;
  // True when the known minimiser exists and lies in the feasible set.
  bool optimum_is_feasible() const;
};

// R(x) = 1/2 sum_i i x_i^2 over the ball of the given radius centred at 0.
// H = 1, beta = d, G = d * radius.
Objective make_quadratic_R(int d, double ball_radius = 2.0);

// F(x) = 1/2 sum_i i x_i^2 + |x|_1 over the unit ball. The l1 subgradient
// uses sign(0) = 0. H = 1, non-smooth, G = d + sqrt(d).
Objective make_nonsmooth_F(int d);

// Z(x) = x_1^2 + 10 x_2^2 over the ball of the given radius centred at 0.
// H = 2, beta = 20, G = 20 * radius.
Objective make_2d_Z(double ball_radius = 10.0);

}  // namespace adangd

#endif  // ADANGD_OBJECTIVES_HPP_
