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

#include "adangd/trace.hpp"

#include "adangd/numerics.hpp"

namespace adangd {

std::string_view to_string(HaltReason reason) {
  switch (reason) {
    case HaltReason::completed:
      return "completed";
    case HaltReason::gradient_floor:
      return "gradient_floor";
  }
  return "unknown";
}

std::vector<double> Trace::grad_norms() const {
  std::vector<double> norms;
  norms.reserve(records.size());
  for (const auto& r : records) norms.push_back(r.grad_norm);
  return norms;
}

double Trace::weight_sum() const {
  CompensatedSum s;
  for (const auto& r : records) s.add(r.weight);
  return s.value();
}

}  // namespace adangd
