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

// Accumulators for sums whose terms span many orders of magnitude.
//
// Normalised-gradient methods accumulate quantities like sum_t |g_t|^-k. In
// the smooth strongly-convex regime |g_t| shrinks geometrically, so the
// individual terms can leave the double range long before the iterates stop
// improving. ScaledReal carries an explicit binary exponent and ScaledSum
// keeps its running total at or below 2^512 by shifting a shared exponent,
// so ratios such as w_t / W_t stay exact to a few ulps.

#ifndef ADANGD_NUMERICS_HPP_
#define ADANGD_NUMERICS_HPP_

#include <cstdint>

#include "adangd/geometry.hpp"

namespace adangd {

// Neumaier-compensated summation.
class CompensatedSum {
 public:
  void add(double term);
  double value() const { return sum_ + compensation_; }
  void scale(double factor);  // exact when factor is a power of two

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// mantissa * 2^exponent.
struct ScaledReal {
  double mantissa = 0.0;
  std::int64_t exponent = 0;

  static ScaledReal from_double(double v);
  // base^power for base > 0, without intermediate overflow.
  static ScaledReal pow(double base, double power);

  double to_double() const;  // may overflow to inf / underflow to 0
  double log2() const;
  bool is_zero() const { return mantissa == 0.0; }
};

ScaledReal operator*(const ScaledReal& a, const ScaledReal& b);
ScaledReal operator/(const ScaledReal& a, const ScaledReal& b);
ScaledReal sqrt(const ScaledReal& a);

// Compensated sum of positive ScaledReal terms sharing one exponent. The
// exponent starts at 0 and only moves in multiples of 512.
class ScaledSum {
 public:
  static constexpr int kRescaleBits = 512;

  void add(const ScaledReal& term);
  void add(double term) { add(ScaledReal::from_double(term)); }

  ScaledReal total() const;
  double to_double() const { return total().to_double(); }
  // term / total, computed without leaving the double range.
  double ratio(const ScaledReal& term) const;
  bool empty() const { return count_ == 0; }
  std::int64_t rescale_exponent() const { return exponent_; }

 private:
  void shift_down();

  CompensatedSum sum_;
  std::int64_t exponent_ = 0;
  std::size_t count_ = 0;
};

// Running weighted mean  xbar_s = xbar_{s-1} + (w_s / W_s)(x_s - xbar_{s-1}).
// Invariant under uniform rescaling of the weights.
class WeightedAverage {
 public:
  WeightedAverage() = default;

  void add(const Vector& x, const ScaledReal& weight);

  const Vector& mean() const { return mean_; }
  const ScaledSum& total_weight() const { return total_; }
  double normalized(const ScaledReal& weight) const {
    return total_.ratio(weight);
  }
  bool empty() const { return total_.empty(); }

 private:
  ScaledSum total_;
  Vector mean_;
};

}  // namespace adangd

#endif  // ADANGD_NUMERICS_HPP_
