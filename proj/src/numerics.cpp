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

#include "adangd/numerics.hpp"

#include <cmath>

#include "adangd/error.hpp"

namespace adangd {

void CompensatedSum::add(double term) {
  const double t = sum_ + term;
  if (std::abs(sum_) >= std::abs(term)) {
    compensation_ += (sum_ - t) + term;
  } else {
    compensation_ += (term - t) + sum_;
  }
  sum_ = t;
}

void CompensatedSum::scale(double factor) {
  sum_ *= factor;
  compensation_ *= factor;
}

ScaledReal ScaledReal::from_double(double v) {
  if (!std::isfinite(v)) throw ContractViolation("ScaledReal: non-finite");
  int e = 0;
  const double m = std::frexp(v, &e);
  return {m, e};
}

ScaledReal ScaledReal::pow(double base, double power) {
  if (!(base > 0.0) || !std::isfinite(base)) {
    throw ContractViolation("ScaledReal::pow: base must be positive");
  }
  int e = 0;
  const double m = std::frexp(base, &e);  // base = m * 2^e, m in [0.5, 1)
  // base^p = m^p * 2^(p e); split p e into an integer and a fraction so
  // that integral powers stay exact.
  const double pe = power * static_cast<double>(e);
  const double whole = std::floor(pe);
  const double frac = pe - whole;
  const double m_log2 = power * std::log2(m);
  ScaledReal r{0.0, 0};
  if (std::abs(m_log2) < 900.0) {
    r = {std::pow(m, power) * std::exp2(frac), static_cast<std::int64_t>(whole)};
  } else {
    // m^p alone would leave the double range; fold it into the exponent.
    const double total = pe + m_log2;
    const double w = std::floor(total);
    r = {std::exp2(total - w), static_cast<std::int64_t>(w)};
  }
  int renorm = 0;
  r.mantissa = std::frexp(r.mantissa, &renorm);
  r.exponent += renorm;
  return r;
}

double ScaledReal::to_double() const {
  if (exponent > 4096) return mantissa == 0.0 ? 0.0 : HUGE_VAL;
  if (exponent < -4096) return 0.0;
  return std::ldexp(mantissa, static_cast<int>(exponent));
}

double ScaledReal::log2() const {
  return std::log2(mantissa) + static_cast<double>(exponent);
}

namespace {
ScaledReal normalize(double m, std::int64_t e) {
  if (m == 0.0) return {0.0, 0};
  int shift = 0;
  const double mm = std::frexp(m, &shift);
  return {mm, e + shift};
}
}  // namespace

ScaledReal operator*(const ScaledReal& a, const ScaledReal& b) {
  return normalize(a.mantissa * b.mantissa, a.exponent + b.exponent);
}

ScaledReal operator/(const ScaledReal& a, const ScaledReal& b) {
  if (b.mantissa == 0.0) throw DegenerateInput("ScaledReal: division by zero");
  return normalize(a.mantissa / b.mantissa, a.exponent - b.exponent);
}

ScaledReal sqrt(const ScaledReal& a) {
  if (a.mantissa < 0.0) throw DegenerateInput("ScaledReal: sqrt of negative");
  if (a.exponent % 2 == 0) {
    return normalize(std::sqrt(a.mantissa), a.exponent / 2);
  }
  // odd exponent: move one factor of two into the mantissa
  const std::int64_t e = a.exponent - 1;
  return normalize(std::sqrt(2.0 * a.mantissa), e / 2);
}

void ScaledSum::shift_down() {
  sum_.scale(std::ldexp(1.0, -kRescaleBits));
  exponent_ += kRescaleBits;
}

void ScaledSum::add(const ScaledReal& term) {
  if (term.mantissa < 0.0) {
    throw ContractViolation("ScaledSum: negative term");
  }
  ++count_;
  if (term.mantissa == 0.0) return;
  while (term.exponent - exponent_ > kRescaleBits) shift_down();
  sum_.add(std::ldexp(term.mantissa,
                      static_cast<int>(std::max<std::int64_t>(
                          term.exponent - exponent_, -2000))));
  while (sum_.value() > std::ldexp(1.0, kRescaleBits)) shift_down();
}

ScaledReal ScaledSum::total() const {
  const ScaledReal t = ScaledReal::from_double(sum_.value());
  return t.mantissa == 0.0 ? t : ScaledReal{t.mantissa, t.exponent + exponent_};
}

double ScaledSum::ratio(const ScaledReal& term) const {
  const ScaledReal t = total();
  if (t.mantissa == 0.0) throw DegenerateInput("ScaledSum: empty total");
  return (term / t).to_double();
}

void WeightedAverage::add(const Vector& x, const ScaledReal& weight) {
  if (total_.empty()) {
    total_.add(weight);
    mean_ = x;
    return;
  }
  require_same_dim(mean_, x, "WeightedAverage");
  total_.add(weight);
  const double step = total_.ratio(weight);
  if (step >= 1.0) {
    mean_ = x;
  } else if (step > 0.0) {
    mean_ += step * (x - mean_);
  }
}

}  // namespace adangd
