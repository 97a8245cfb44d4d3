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

#ifndef QMEMSIM_REFERENCE_HPP
#define QMEMSIM_REFERENCE_HPP

#include <cmath>

#include "qmemsim/analysis.hpp"

namespace qmemsim::reference {

/// Reference p_ij columns before (input) and after (output) storage.
struct Column {
  PathProbabilities pij;
  PathProbabilities sigma;
  double visibility;
  double visibility_sigma;
  double concurrence;
  double concurrence_sigma;
};

inline constexpr Column kInput{{0.991, 4.95e-3, 4.57e-3, 2.58e-6},
                               {0.001, 0.12e-3, 0.12e-3, 1.80e-6},
                               0.96, 0.03, 5.9e-3, 1.2e-3};
inline constexpr Column kOutput{{0.992, 4.18e-3, 3.87e-3, 1.35e-6},
                                {0.001, 0.09e-3, 0.09e-3, 0.95e-6},
                                0.87, 0.04, 4.7e-3, 0.9e-3};

inline constexpr double kCorrectedOutputVisibility = 0.94;
inline constexpr double kCorrectedOutputConcurrence = 5.3e-3;
inline constexpr double kSuppressionIn = 0.11;
inline constexpr double kSuppressionOut = 0.08;
inline constexpr double kEta = 0.85;
inline constexpr double kLambda = 0.80;
inline constexpr double kLambdaCorrected = 0.88;
inline constexpr double kMemoryEfficiency = 0.87;
inline constexpr double kMemoryEfficiencySigma = 0.05;

inline constexpr double kHeraldedPhotonRate = 25.0;
inline constexpr double kEntanglementRate = 18.0;
inline constexpr double kDetectionRate = 1.7;

/// Integer counts consistent with a column, with p11 fixed by `n11` events
/// (the p11 error implies about two).
inline PijCounts counts_for(const Column& c, long long n11 = 2) {
  PijCounts k;
  k.n_heralds = std::llround(static_cast<double>(n11) / c.pij.p11);
  const double n = static_cast<double>(k.n_heralds);
  k.n11 = n11;
  k.n01 = std::llround(c.pij.p01 * n);
  k.n10 = std::llround(c.pij.p10 * n);
  k.n00 = k.n_heralds - k.n01 - k.n10 - k.n11;
  return k;
}

/// Heralds per column implied by the one-photon errors, (p / sigma)^2 / p.
inline double heralds_from_single_errors(const Column& c) {
  const double a = c.pij.p10 / (c.sigma.p10 * c.sigma.p10);
  const double b = c.pij.p01 / (c.sigma.p01 * c.sigma.p01);
  return 0.5 * (a + b);
}

}  // namespace qmemsim::reference

#endif  // QMEMSIM_REFERENCE_HPP
