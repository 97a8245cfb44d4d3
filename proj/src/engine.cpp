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

#include "qmemsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "qmemsim/interferometer.hpp"

namespace qmemsim {

namespace {

void check_prob(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " outside [0,1]");
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::uint32_t stream_id(TrialMode mode, Stage stage, std::size_t point) {
  return (static_cast<std::uint32_t>(mode) << 24) | (static_cast<std::uint32_t>(stage) << 20) |
         static_cast<std::uint32_t>(point);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(mot_rate > 0.0)) throw std::invalid_argument("mot_rate must be positive");
  if (trials_per_cycle <= 0) throw std::invalid_argument("trials_per_cycle must be positive");
  if (!(generation_phase > 0.0)) throw std::invalid_argument("generation_phase must be positive");
  if (duty_factor() > 1.0) throw std::invalid_argument("generation_phase * mot_rate exceeds 1");
  check_prob(p1_target, "p1_target");
  check_prob(delay_line_transmission, "delay_line_transmission");
  check_prob(propagation_transmission, "propagation_transmission");
  check_prob(filter_transmission, "filter_transmission");
  check_prob(detector_efficiency, "detector_efficiency");
  check_prob(detector_dark_prob, "detector_dark_prob");
  check_prob(split_transmittance, "split_transmittance");
  check_prob(reference_path_correction, "reference_path_correction");
  check_prob(interferometer_visibility, "interferometer_visibility");
  check_prob(memory_visibility, "memory_visibility");
  check_prob(target_raw_visibility, "target_raw_visibility");
  if (background_mean && !(*background_mean >= 0.0)) {
    throw std::invalid_argument("background_mean must be nonnegative");
  }
  if (!(storage_time >= 0.0)) throw std::invalid_argument("storage_time must be nonnegative");
  if (!(pulse_fwhm > 0.0)) throw std::invalid_argument("pulse_fwhm must be positive");
  if (run.fringe_points < 4) throw std::invalid_argument("fringe_points must be at least 4");
  if (run.pij_trials_input < 0 || run.pij_trials_output < 0 || run.fringe_trials_per_point < 0 ||
      run.hbt_trials < 0 || run.repeater_runs < 1) {
    throw std::invalid_argument("run sizes must be nonnegative");
  }
  if (workers < 0) throw std::invalid_argument("workers must be nonnegative");
  source.validate();
  MemoryParams m = memory;
  m.storage_time = storage_time;
  m.validate();
  repeater.params(0.9).validate();
}

const char* to_string(TrialMode m) {
  switch (m) {
    case TrialMode::Pij: return "pij";
    case TrialMode::Fringe: return "fringe";
    case TrialMode::Hbt: return "hbt";
  }
  return "?";
}

const char* to_string(Stage s) { return s == Stage::Input ? "input" : "output"; }

Setup prepare(const ExperimentConfig& config) {
  config.validate();
  MemoryParams mem = config.memory;
  mem.storage_time = config.storage_time;
  const PulseEnvelope pulse = gaussian_pulse(config.pulse_fwhm, 2.5 * config.pulse_fwhm,
                                             config.pulse_fwhm * config.solver.dt_fraction,
                                             5.0 * config.pulse_fwhm);
  mem.control = matched_schedule(mem, pulse);
  return prepare(config, solve_maxwell_bloch(pulse, mem, config.solver));
}

Setup prepare(const ExperimentConfig& config, const StorageResult& storage) {
  config.validate();
  Setup s;
  s.config = config;
  s.config.memory.storage_time = config.storage_time;
  s.config.source.chi = calibrate_chi(config.p1_target, config.source);
  s.photon = herald_field2(s.config.source);
  s.pulse = gaussian_pulse(config.pulse_fwhm, 2.5 * config.pulse_fwhm,
                           config.pulse_fwhm * config.solver.dt_fraction, 5.0 * config.pulse_fwhm);
  s.storage = storage;
  s.memory_transmission =
      storage.efficiency * lifetime_factor(config.storage_time, config.memory.lifetime_tau);
  s.detector = ClickDetector{config.detector_efficiency, config.detector_dark_prob};
  s.background_mean = config.background_mean
                          ? *config.background_mean
                          : calibrate_background(s, config.target_raw_visibility);
  s.config.memory.background_mean = s.background_mean;
  return s;
}

MultiModeState path_state(const Setup& setup, Stage stage, std::optional<double> background) {
  const ExperimentConfig& c = setup.config;
  MultiModeState photon = apply_loss(setup.photon.state, 0, c.delay_line_transmission);
  MultiModeState paths = split_entangle(photon, c.split_transmittance);
  paths = apply_dephasing(paths, kPathA, c.interferometer_visibility);
  if (stage == Stage::Output) {
    ChannelChain mem{Loss{setup.memory_transmission}};
    const double bg = background.value_or(setup.background_mean);
    if (bg > 0.0) mem.emplace_back(BackgroundInjection{bg});
    paths = store_both(paths, mem, mem);
    paths = apply_dephasing(paths, kPathA, c.memory_visibility);
  } else if (c.reference_path_correction != 1.0) {
    const ChannelChain ref{Loss{c.reference_path_correction}};
    paths = store_both(paths, ref, ref);
  }
  const ChannelChain tail{Loss{c.propagation_transmission}, Loss{c.filter_transmission}};
  return store_both(paths, tail, tail);
}

MultiModeState hbt_input(const Setup& setup, Stage stage) {
  const ExperimentConfig& c = setup.config;
  MultiModeState f = apply_loss(setup.photon.state, 0, c.delay_line_transmission);
  if (stage == Stage::Output) {
    f = apply_loss(f, 0, setup.memory_transmission);
    if (setup.background_mean > 0.0) f = apply_background(f, 0, setup.background_mean);
  } else {
    f = apply_loss(f, 0, c.reference_path_correction);
  }
  f = apply_loss(f, 0, c.propagation_transmission);
  return apply_loss(f, 0, c.filter_transmission);
}

OutcomeModel analytic_outcomes(const Setup& setup, TrialMode mode, Stage stage, double phase) {
  OutcomeModel m;
  m.p_herald = setup.photon.p1;
  const std::array<int, 2> modes{0, 1};
  const std::array<ClickDetector, 2> dets{setup.detector, setup.detector};
  MultiModeState s(2, setup.photon.state.n_max());
  switch (mode) {
    case TrialMode::Pij:
      s = path_state(setup, stage);
      break;
    case TrialMode::Fringe:
      s = apply_phase(path_state(setup, stage), kPathA, phase);
      s = apply_beamsplitter(s, kPathA, kPathB, 0.5, kRecombinerPhase);
      break;
    case TrialMode::Hbt:
      s = tensor(hbt_input(setup, stage), MultiModeState(1, setup.photon.state.n_max()));
      s = apply_beamsplitter(s, 0, 1, 0.5, 0.0);
      break;
  }
  const auto p = click_pattern_probabilities(s, std::span<const int>(modes),
                                             std::span<const ClickDetector>(dets));
  double total = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    m.pattern[k] = std::max(0.0, p[k]);
    total += m.pattern[k];
  }
  for (double& v : m.pattern) v /= total;
  return m;
}

double raw_output_visibility(const Setup& setup, double background_mean) {
  const MultiModeState s = path_state(setup, Stage::Output, background_mean);
  const FringeData f = scan_fringes(s, fringe_phases(setup.config.run.fringe_points),
                                    setup.detector, setup.detector);
  return fit_visibility(f).visibility;
}

double calibrate_background(const Setup& setup, double target) {
  const double v0 = raw_output_visibility(setup, 0.0);
  if (!(target < v0)) {
    if (target <= v0 + 1e-12) return 0.0;
    throw std::domain_error("target raw visibility " + std::to_string(target) +
                            " exceeds background-free visibility " + std::to_string(v0));
  }
  double lo = 0.0;
  double hi = 1e-3;
  while (raw_output_visibility(setup, hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1.0) throw std::domain_error("background calibration did not bracket the target");
  }
  for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (raw_output_visibility(setup, mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

PijCounts CountsTable::pij_counts() const {
  return PijCounts{n_heralds, n_coinc_00, n_coinc_01, n_coinc_10, n_coinc_11};
}

FringeData CountsTable::fringe_data() const {
  FringeData f;
  long long min_heralds = -1;
  for (const FringePointCounts& p : fringe) {
    if (p.n_heralds <= 0) throw std::invalid_argument("fringe point without heralds");
    const double n = static_cast<double>(p.n_heralds);
    f.phases.push_back(p.phase);
    f.p_d1.push_back(p.n_d1 / n);
    f.p_d2.push_back(p.n_d2 / n);
    f.p_coinc.push_back(p.n_coinc / n);
    min_heralds = min_heralds < 0 ? p.n_heralds : std::min(min_heralds, p.n_heralds);
  }
  f.trials_per_point = std::max(0LL, min_heralds);
  return f;
}

namespace {

struct PatternCounts {
  long long heralds = 0;
  std::array<long long, 4> pattern{};
};

PatternCounts sample(const OutcomeModel& model, long long n_trials, std::uint64_t seed,
                     std::uint32_t stream, int workers) {
  const long long chunks = (n_trials + kChunkTrials - 1) / kChunkTrials;
  std::vector<PatternCounts> per_chunk(static_cast<std::size_t>(chunks));
  const double c0 = model.pattern[0];
  const double c1 = c0 + model.pattern[1];
  const double c2 = c1 + model.pattern[2];
  std::atomic<long long> next{0};
  auto work = [&] {
    for (long long c = next++; c < chunks; c = next++) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        stream, static_cast<std::uint32_t>(c)};
      std::mt19937_64 rng(seq);
      PatternCounts pc;
      const long long end = std::min(n_trials, (c + 1) * kChunkTrials);
      for (long long t = c * kChunkTrials; t < end; ++t) {
        if (static_cast<double>(rng() >> 11) * 0x1.0p-53 >= model.p_herald) continue;
        ++pc.heralds;
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        ++pc.pattern[u < c0 ? 0 : u < c1 ? 1 : u < c2 ? 2 : 3];
      }
      per_chunk[static_cast<std::size_t>(c)] = pc;
    }
  };
  const int n_workers = static_cast<int>(std::clamp<long long>(resolve_workers(workers), 1, std::max(1LL, chunks)));
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(work);
    work();
  }
  PatternCounts total;
  for (const PatternCounts& pc : per_chunk) {
    total.heralds += pc.heralds;
    for (std::size_t k = 0; k < 4; ++k) total.pattern[k] += pc.pattern[k];
  }
  return total;
}

}  // namespace

CountsTable run_trials(const Setup& setup, long long n_trials, TrialMode mode, Stage stage,
                       std::span<const double> phases) {
  if (n_trials < 0) throw std::invalid_argument("n_trials must be nonnegative");
  const std::uint64_t seed = setup.config.seed;
  const int workers = setup.config.workers;
  CountsTable table;
  table.mode = mode;
  table.stage = stage;
  auto accumulate = [&table](const PatternCounts& pc, long long trials) {
    table.n_trials += trials;
    table.n_heralds += pc.heralds;
    table.n_coinc_00 += pc.pattern[0];
    table.n_coinc_10 += pc.pattern[1];
    table.n_coinc_01 += pc.pattern[2];
    table.n_coinc_11 += pc.pattern[3];
    table.n_singles_d2 += pc.pattern[1] + pc.pattern[3];
    table.n_singles_d3 += pc.pattern[2] + pc.pattern[3];
    table.n_triples += pc.pattern[3];
  };
  if (mode == TrialMode::Fringe) {
    if (phases.empty()) throw std::invalid_argument("fringe mode needs a phase grid");
    for (std::size_t k = 0; k < phases.size(); ++k) {
      const OutcomeModel model = analytic_outcomes(setup, mode, stage, phases[k]);
      const PatternCounts pc = n_trials > 0 ? sample(model, n_trials, seed, stream_id(mode, stage, k), workers)
                                            : PatternCounts{};
      accumulate(pc, n_trials);
      table.fringe.push_back(FringePointCounts{phases[k], n_trials, pc.heralds,
                                               pc.pattern[1] + pc.pattern[3],
                                               pc.pattern[2] + pc.pattern[3], pc.pattern[3]});
    }
    return table;
  }
  if (n_trials == 0) return table;
  const OutcomeModel model = analytic_outcomes(setup, mode, stage);
  accumulate(sample(model, n_trials, seed, stream_id(mode, stage, 0), workers), n_trials);
  return table;
}

CountsTable run_trials(const ExperimentConfig& config, long long n_trials, TrialMode mode,
                       Stage stage, std::span<const double> phases) {
  return run_trials(prepare(config), n_trials, mode, stage, phases);
}

PijEstimate counts_to_probs(const CountsTable& table) {
  if (table.n_heralds <= 0) throw std::invalid_argument("zero heralds");
  return pij_with_errors(table.pij_counts());
}

RateReport rates_report(const ExperimentConfig& config, const CountsTable& table) {
  RateReport r;
  r.duty_factor = config.duty_factor();
  r.generation_seconds =
      static_cast<double>(table.n_trials) / config.trials_per_cycle * config.generation_phase;
  if (r.generation_seconds > 0.0) {
    r.herald_rate = table.n_heralds / r.generation_seconds;
    r.detection_rate = (table.n_singles_d2 + table.n_singles_d3 - table.n_triples) / r.generation_seconds;
  }
  r.heralded_photon_rate = r.herald_rate * config.source.heralding_efficiency;
  r.entanglement_rate = r.heralded_photon_rate * config.delay_line_transmission;
  r.overall_herald_rate = r.herald_rate * r.duty_factor;
  r.overall_heralded_photon_rate = r.heralded_photon_rate * r.duty_factor;
  r.overall_entanglement_rate = r.entanglement_rate * r.duty_factor;
  r.overall_detection_rate = r.detection_rate * r.duty_factor;
  return r;
}

}  // namespace qmemsim
