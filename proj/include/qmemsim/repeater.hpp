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

#ifndef QMEMSIM_REPEATER_HPP
#define QMEMSIM_REPEATER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace qmemsim {

/// Swap success from memory and detector efficiency.
using SwapModel = std::function<double(double memory_efficiency, double detector_efficiency)>;

/// (eta_m eta_d)^2 / 2: both memories read out, linear-optics Bell measurement.
double default_swap_success(double memory_efficiency, double detector_efficiency);

inline constexpr double kFiberLightSpeedKmPerS = 2e5;

struct RepeaterParams {
  double total_length_km = 600.0;
  int link_count = 8;
  double attenuation_length_km = 22.0;
  double memory_efficiency = 0.9;
  double detector_efficiency = 1.0;
  double source_probability = 0.01;
  /// Unset: one fiber round trip over a link, L0 / c.
  std::optional<double> attempt_period;
  SwapModel swap_model = default_swap_success;

  void validate() const;
  double link_length_km() const { return total_length_km / link_count; }
  double link_success() const;
  double period() const;
  int levels() const;
  double swap_success() const;
};

struct RepeaterResult {
  double mean_time = 0.0;
  double std_error = 0.0;
  double analytic_time = 0.0;  ///< period / p0 * (3 / (2 s))^levels
  int runs = 0;
};

/// Nested chain: links retry with geometric attempt counts, each level waits
/// for both halves and swaps; a failed swap regenerates both halves.
RepeaterResult repeater_distribution_time(const RepeaterParams& params, int runs,
                                          std::uint64_t seed, int workers = 1);

/// Config section for the memory-efficiency sweep.
struct RepeaterConfig {
  double total_length_km = 600.0;
  int link_count = 8;
  double attenuation_length_km = 22.0;
  double detector_efficiency = 1.0;
  double source_probability = 0.01;
  std::optional<double> attempt_period;
  std::vector<double> memory_efficiencies{0.6, 0.7, 0.8, 0.9};

  RepeaterParams params(double memory_efficiency) const;
};

}  // namespace qmemsim

#endif  // QMEMSIM_REPEATER_HPP
