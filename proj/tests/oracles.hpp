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

// Reference computations for tests. These are written from the defining
// formulas with plain long double loops and share no code with the library.

#ifndef ADANGD_TESTS_ORACLES_HPP_
#define ADANGD_TESTS_ORACLES_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace oracle {

using Vec = Eigen::VectorXd;

inline Vec fd_gradient(const std::function<double(const Vec&)>& f,
                       const Vec& x, double h = 1e-6) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec a = x, b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

// Euclidean projection onto Ball(0, r), long double arithmetic.
inline std::vector<long double> project_ball(std::vector<long double> y,
                                             long double r) {
  long double n2 = 0;
  for (auto v : y) n2 += v * v;
  const long double n = std::sqrt(n2);
  if (n > r) {
    for (auto& v : y) v *= r / n;
  }
  return y;
}

inline Vec to_vec(const std::vector<long double>& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = static_cast<double>(v[i]);
  }
  return out;
}

inline std::vector<long double> from_vec(const Vec& v) {
  std::vector<long double> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[static_cast<std::size_t>(i)] = v[i];
  }
  return out;
}

struct NormalizedRun {
  std::vector<Vec> iterates;
  std::vector<double> norms;
  Vec average;
};

// AdaNGD_k (sc = false) or SC-AdaNGD_k (sc = true) over Ball(0, r) for
// gradients that stay well inside the double range.
inline NormalizedRun reference_normalized(
    const std::function<Vec(const Vec&)>& grad, const Vec& x1, long double r,
    long double k, std::size_t T, bool sc, long double H = 1) {
  NormalizedRun out;
  std::vector<long double> x = project_ball(from_vec(x1), r);
  const long double D = 2 * r;
  long double Q = 0, W = 0;
  std::vector<long double> acc(x.size(), 0);
  for (std::size_t t = 1; t <= T; ++t) {
    const Vec g = grad(to_vec(x));
    long double n2 = 0;
    for (Eigen::Index i = 0; i < g.size(); ++i) n2 += (long double)g[i] * g[i];
    const long double n = std::sqrt(n2);
    const long double w = std::pow(n, -k);
    out.iterates.push_back(to_vec(x));
    out.norms.push_back(static_cast<double>(n));
    W += w;
    for (std::size_t i = 0; i < x.size(); ++i) acc[i] += w * x[i];
    long double eta;
    if (sc) {
      Q += w;
      eta = 1 / (H * Q);
    } else {
      Q += std::pow(n, -2 * (k - 1));
      eta = D / std::sqrt(2 * Q);
    }
    if (t < T) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] -= eta * w * (long double)g[static_cast<Eigen::Index>(i)];
      }
      x = project_ball(x, r);
    }
  }
  for (auto& v : acc) v /= W;
  out.average = to_vec(acc);
  return out;
}

// Regret of a played sequence on linear losses <g_t, x> over Ball(0, r):
// the best fixed point is -r sum g / |sum g|.
inline long double linear_regret(const std::vector<Vec>& gs,
                                 const std::vector<Vec>& xs, long double r) {
  long double played = 0;
  Vec sum = Vec::Zero(gs.front().size());
  for (std::size_t t = 0; t < gs.size(); ++t) {
    played += (long double)gs[t].dot(xs[t]);
    sum += gs[t];
  }
  return played + r * (long double)sum.norm();
}

// Harmonic number H_T.
inline long double harmonic(std::size_t T) {
  long double h = 0;
  for (std::size_t t = 1; t <= T; ++t) h += 1.0L / t;
  return h;
}

// Prefix evaluations of the SC-AdaNGD_k double sum for every T = 1..n at
// once: bound[T-1] = (1 / (2 H S_T)) sum_{t<=T} a_t / S_t.
inline std::vector<long double> sc_bound_prefixes(
    const std::vector<long double>& norms, long double H, long double k) {
  std::vector<long double> out;
  long double S = 0, terms = 0;
  for (auto n : norms) {
    S += std::pow(n, -k);
    terms += std::pow(n, -2 * (k - 1)) / S;
    out.push_back(terms / (2 * H * S));
  }
  return out;
}

// Cumulative sample counts visited by the doubling schedule when the
// stopping rule never fires: 1, 3, 7, ... capped at budget.
inline std::vector<std::size_t> doubling_checkpoints(std::size_t budget) {
  std::vector<std::size_t> n;
  std::size_t total = 0, batch = 1;
  while (total < budget) {
    total += std::min(batch, budget - total);
    n.push_back(total);
    batch *= 2;
  }
  return n;
}

}  // namespace oracle

#endif  // ADANGD_TESTS_ORACLES_HPP_
