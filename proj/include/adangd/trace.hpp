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

#ifndef ADANGD_TRACE_HPP_
#define ADANGD_TRACE_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

#include "adangd/geometry.hpp"

namespace adangd {

enum class HaltReason { completed, gradient_floor };

std::string_view to_string(HaltReason reason);

// One query point of a run.
struct TraceRecord {
  std::size_t iteration = 0;     // t (offline) or s (LazySGD), 1-based
  std::size_t oracle_calls = 0;  // cumulative gradient-oracle calls
  Vector x;
  double grad_norm = 0.0;        // |g_t|, or |g~_s| for stochastic runs
  double loss = 0.0;             // f(x_t)
  double eta = 0.0;              // step size used from this point
  double Q = 0.0;                // accumulator / step-size clock
  double weight = 0.0;           // normalised averaging weight at termination
  std::size_t minibatch_n = 1;
};

struct Trace {
  std::vector<TraceRecord> records;
  Vector x_bar;
  double f_bar = 0.0;
  HaltReason halt_reason = HaltReason::completed;
  std::size_t oracle_calls = 0;
  // Power-of-two exponent of the final weight normaliser (see ScaledSum).
  std::int64_t rescale_exponent = 0;

  std::vector<double> grad_norms() const;
  double weight_sum() const;
};

}  // namespace adangd

#endif  // ADANGD_TRACE_HPP_
