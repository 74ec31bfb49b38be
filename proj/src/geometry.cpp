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

#include "adangd/geometry.hpp"

#include <cmath>
#include <sstream>

#include "adangd/error.hpp"

namespace adangd {

void require_finite(const Vector& v, std::string_view what) {
  if (!v.allFinite()) {
    throw ContractViolation(std::string(what) + ": non-finite entry");
  }
}

void require_same_dim(const Vector& a, const Vector& b,
                      std::string_view what) {
  if (a.size() != b.size()) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a.size() << " vs " << b.size()
       << ")";
    throw ContractViolation(os.str());
  }
}

double norm(const Vector& v) { return v.norm(); }

ConvexSet::ConvexSet(std::variant<Ball, Box> shape) : shape_(std::move(shape)) {
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    diameter_ = 2.0 * b->radius;
  } else {
    const auto& box = std::get<Box>(shape_);
    diameter_ = (box.upper - box.lower).norm();
  }
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  if (center.size() == 0) throw ContractViolation("ball: empty center");
  require_finite(center, "ball center");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ContractViolation("ball: radius must be positive and finite");
  }
  return ConvexSet(Ball{std::move(center), radius});
}

ConvexSet ConvexSet::box(Vector lower, Vector upper) {
  if (lower.size() == 0) throw ContractViolation("box: empty bounds");
  require_same_dim(lower, upper, "box");
  require_finite(lower, "box lower");
  require_finite(upper, "box upper");
  if ((upper.array() < lower.array()).any()) {
    throw ContractViolation("box: lower bound exceeds upper bound");
  }
  if ((upper - lower).norm() <= 0.0) {
    throw ContractViolation("box: degenerate (zero diameter)");
  }
  return ConvexSet(Box{std::move(lower), std::move(upper)});
}

Eigen::Index ConvexSet::dim() const {
  return std::visit([](const auto& s) -> Eigen::Index {
    if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Ball>) {
      return s.center.size();
    } else {
      return s.lower.size();
    }
  }, shape_);
}

Vector ConvexSet::project(const Vector& y) const {
  if (y.size() != dim()) {
    throw ContractViolation("project: dimension mismatch");
  }
  require_finite(y, "project");
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    const Vector offset = y - b->center;
    const double dist = offset.norm();
    if (dist <= b->radius) return y;
    // Radial scaling; shrink the factor by ulps until the rounded result is
    // inside, which makes the projection a fixed point of itself.
    double scale = b->radius / dist;
    Vector p = b->center + scale * offset;
    while ((p - b->center).norm() > b->radius) {
      scale = std::nextafter(scale, 0.0);
      p = b->center + scale * offset;
    }
    return p;
  }
  const auto& box = std::get<Box>(shape_);
  return y.cwiseMax(box.lower).cwiseMin(box.upper);
}

double ConvexSet::residual(const Vector& x) const {
  if (x.size() != dim()) {
    throw ContractViolation("residual: dimension mismatch");
  }
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    return std::max(0.0, (x - b->center).norm() - b->radius);
  }
  const auto& box = std::get<Box>(shape_);
  const double below = (box.lower - x).cwiseMax(0.0).maxCoeff();
  const double above = (x - box.upper).cwiseMax(0.0).maxCoeff();
  return std::max(below, above);
}

std::string ConvexSet::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    os << "ball(dim=" << b->center.size() << ", |center|=" << b->center.norm()
       << ", radius=" << b->radius << ")";
  } else {
    os << "box(dim=" << dim() << ", diameter=" << diameter_ << ")";
  }
  return os.str();
}

ConvexSet unconstrained_surrogate(const Vector& x1, const Vector& x_star) {
  require_same_dim(x1, x_star, "unconstrained_surrogate");
  const double dist = (x1 - x_star).norm();
  return ConvexSet::ball(x1, dist > 0.0 ? 2.0 * dist : 1.0);
}

}  // namespace adangd
