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

#include "qmemsim/repeater.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace qmemsim {

double default_swap_success(double memory_efficiency, double detector_efficiency) {
  const double eta = memory_efficiency * detector_efficiency;
  return eta * eta / 2.0;
}

void RepeaterParams::validate() const {
  if (link_count < 1 || !std::has_single_bit(static_cast<unsigned>(link_count))) {
    throw std::invalid_argument("link_count must be a power of two");
  }
  if (!(total_length_km > 0.0) || !(attenuation_length_km > 0.0)) {
    throw std::invalid_argument("lengths must be positive");
  }
  auto prob = [](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " outside [0,1]");
  };
  prob(memory_efficiency, "memory_efficiency");
  prob(detector_efficiency, "detector_efficiency");
  prob(source_probability, "source_probability");
  if (!(source_probability > 0.0)) throw std::invalid_argument("source_probability must be positive");
  if (attempt_period && !(*attempt_period > 0.0)) throw std::invalid_argument("attempt_period must be positive");
  if (!swap_model) throw std::invalid_argument("swap model missing");
  if (link_count > 1) {
    const double s = swap_success();
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("swap success outside (0,1]");
  }
}

double RepeaterParams::link_success() const {
  return source_probability * std::exp(-link_length_km() / attenuation_length_km);
}

double RepeaterParams::period() const {
  return attempt_period ? *attempt_period : link_length_km() / kFiberLightSpeedKmPerS;
}

int RepeaterParams::levels() const { return std::countr_zero(static_cast<unsigned>(link_count)); }

double RepeaterParams::swap_success() const { return swap_model(memory_efficiency, detector_efficiency); }

namespace {

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct ChainSampler {
  double p0;
  double s;
  double period;
  std::mt19937_64& rng;

  double link() {
    if (p0 >= 1.0) return period;
    const double u = 1.0 - uniform(rng);  // (0, 1]
    return std::max(1.0, std::ceil(std::log(u) / std::log1p(-p0))) * period;
  }

  double level(int k) {
    if (k == 0) return link();
    double total = 0.0;
    for (;;) {
      total += std::max(level(k - 1), level(k - 1));
      if (uniform(rng) < s) return total;
    }
  }
};

constexpr int kRunsPerChunk = 256;

}  // namespace

RepeaterResult repeater_distribution_time(const RepeaterParams& params, int runs,
                                          std::uint64_t seed, int workers) {
  params.validate();
  if (runs < 1) throw std::invalid_argument("runs must be positive");
  const double p0 = params.link_success();
  const double s = params.link_count > 1 ? params.swap_success() : 1.0;
  const int levels = params.levels();
  // Sample in units of one period so the result scales exactly with it.
  const int chunks = (runs + kRunsPerChunk - 1) / kRunsPerChunk;
  std::vector<double> sum(static_cast<std::size_t>(chunks), 0.0);
  std::vector<double> sum_sq(static_cast<std::size_t>(chunks), 0.0);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int c = next++; c < chunks; c = next++) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        0x52455045u, static_cast<std::uint32_t>(c)};
      std::mt19937_64 rng(seq);
      ChainSampler sampler{p0, s, 1.0, rng};
      const int end = std::min(runs, (c + 1) * kRunsPerChunk);
      for (int r = c * kRunsPerChunk; r < end; ++r) {
        const double t = sampler.level(levels);
        sum[static_cast<std::size_t>(c)] += t;
        sum_sq[static_cast<std::size_t>(c)] += t * t;
      }
    }
  };
  const int n_workers = std::clamp(workers, 1, chunks);
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(work);
    work();
  }
  double total = 0.0;
  double total_sq = 0.0;
  for (int c = 0; c < chunks; ++c) {
    total += sum[static_cast<std::size_t>(c)];
    total_sq += sum_sq[static_cast<std::size_t>(c)];
  }
  const double n = runs;
  const double mean = total / n;
  const double var = runs > 1 ? std::max(0.0, (total_sq - n * mean * mean) / (n - 1.0)) : 0.0;
  const double period = params.period();
  RepeaterResult out;
  out.runs = runs;
  out.mean_time = mean * period;
  out.std_error = std::sqrt(var / n) * period;
  out.analytic_time = period / p0 * std::pow(1.5 / s, levels);
  return out;
}

RepeaterParams RepeaterConfig::params(double memory_efficiency) const {
  RepeaterParams p;
  p.total_length_km = total_length_km;
  p.link_count = link_count;
  p.attenuation_length_km = attenuation_length_km;
  p.memory_efficiency = memory_efficiency;
  p.detector_efficiency = detector_efficiency;
  p.source_probability = source_probability;
  p.attempt_period = attempt_period;
  return p;
}

}  // namespace qmemsim
