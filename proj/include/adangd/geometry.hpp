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

#ifndef ADANGD_GEOMETRY_HPP_
#define ADANGD_GEOMETRY_HPP_

#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Core>

namespace adangd {

// Dense point or gradient. Every public entry point rejects non-finite
// entries and dimension mismatches.
using Vector = Eigen::VectorXd;

// Throws ContractViolation if any entry is NaN or infinite.
void require_finite(const Vector& v, std::string_view what);
// Throws ContractViolation if the sizes differ.
void require_same_dim(const Vector& a, const Vector& b, std::string_view what);

// Euclidean norm.
double norm(const Vector& v);

struct Ball {
  Vector center;
  double radius;
};

struct Box {
  Vector lower;
  Vector upper;
};

// A closed convex feasible region with an exact O(d) Euclidean projection.
//
// Two shapes are supported: Euclidean balls and axis-aligned boxes. The
// diameter is computed once on construction (2r for a ball, |upper - lower|
// for a box). project() is idempotent bit-for-bit: a projected point is
// always reported as feasible by contains() with zero tolerance.
class ConvexSet {
 public:
  static ConvexSet ball(Vector center, double radius);
  static ConvexSet box(Vector lower, Vector upper);

  Eigen::Index dim() const;
  double diameter() const { return diameter_; }

  Vector project(const Vector& y) const;

  // Amount by which x violates the constraint; 0 for feasible points.
  double residual(const Vector& x) const;
  bool contains(const Vector& x, double tol = 0.0) const {
    return residual(x) <= tol;
  }

  const std::variant<Ball, Box>& shape() const { return shape_; }
  std::string describe() const;

 private:
  explicit ConvexSet(std::variant<Ball, Box> shape);

  std::variant<Ball, Box> shape_;
  double diameter_;
};

inline Vector project(const ConvexSet& set, const Vector& y) {
  return set.project(y);
}
inline double diameter(const ConvexSet& set) { return set.diameter(); }

// Stand-in for an unconstrained problem: a ball centred at x1 whose radius is
// twice the distance to the known minimiser, so the minimiser is interior.
// Falls back to radius 1 when x1 already is the minimiser.
ConvexSet unconstrained_surrogate(const Vector& x1, const Vector& x_star);

}  // namespace adangd

#endif  // ADANGD_GEOMETRY_HPP_
