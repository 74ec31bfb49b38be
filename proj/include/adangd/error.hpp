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

#ifndef ADANGD_ERROR_HPP_
#define ADANGD_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace adangd {

// A caller broke a documented precondition (dimension mismatch, NaN input,
// non-positive budget, ...).
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what)
      : std::invalid_argument(what) {}
};

// An experiment or algorithm configuration is inconsistent, e.g. a
// constant-step GD baseline on an objective without a smoothness constant.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A bound formula was evaluated on inputs where it is undefined
// (zero gradient norm, lemma hypothesis violated).
class DegenerateInput : public std::domain_error {
 public:
  explicit DegenerateInput(const std::string& what)
      : std::domain_error(what) {}
};

}  // namespace adangd

#endif  // ADANGD_ERROR_HPP_
