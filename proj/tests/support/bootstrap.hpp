// Copyright 2026 The qmemsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMEMSIM_TESTS_BOOTSTRAP_HPP
#define QMEMSIM_TESTS_BOOTSTRAP_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qmemsim/analysis.hpp"

namespace qmemsim::testing {

struct BootstrapResult {
  double half_width;  // (q84 - q16) / 2
  double stddev;
};

// Resamples the one- and two-photon counts as independent Poisson variables
// at fixed herald number and recomputes the concurrence directly from its
// definition (no library call), so it is independent of the propagation code.
inline BootstrapResult bootstrap_concurrence(const PijCounts& k, double v, int draws,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::poisson_distribution<long long> d01(static_cast<double>(k.n01));
  std::poisson_distribution<long long> d10(static_cast<double>(k.n10));
  std::poisson_distribution<long long> d11(static_cast<double>(k.n11));
  const double n = static_cast<double>(k.n_heralds);
  std::vector<double> c(static_cast<std::size_t>(draws));
  double sum = 0.0;
  double sum_sq = 0.0;
  for (auto& ci : c) {
    const double p01 = d01(rng) / n;
    const double p10 = d10(rng) / n;
    const double p11 = d11(rng) / n;
    const double p00 = 1.0 - p01 - p10 - p11;
    const double dd = v * (p01 + p10) / 2.0;
    ci = std::max(2.0 * dd - 2.0 * std::sqrt(p00 * p11), 0.0) / (p00 + p01 + p10 + p11);
    sum += ci;
    sum_sq += ci * ci;
  }
  std::sort(c.begin(), c.end());
  auto q = [&](double f) { return c[static_cast<std::size_t>(f * (c.size() - 1))]; };
  const double mean = sum / draws;
  return {0.5 * (q(0.8413) - q(0.1587)), std::sqrt(sum_sq / draws - mean * mean)};
}

}  // namespace qmemsim::testing

#endif  // QMEMSIM_TESTS_BOOTSTRAP_HPP
