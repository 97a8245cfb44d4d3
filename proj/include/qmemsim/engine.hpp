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

#ifndef QMEMSIM_ENGINE_HPP
#define QMEMSIM_ENGINE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmemsim/analysis.hpp"
#include "qmemsim/eit.hpp"
#include "qmemsim/fock.hpp"
#include "qmemsim/interferometer.hpp"
#include "qmemsim/repeater.hpp"
#include "qmemsim/source.hpp"

namespace qmemsim {

/// Monte Carlo sample sizes used by the command-line runs.
struct RunSizes {
  long long pij_trials_input = 320'000'000;
  long long pij_trials_output = 480'000'000;
  long long fringe_trials_per_point = 20'000'000;
  long long hbt_trials = 200'000'000;
  int fringe_points = 16;
  int repeater_runs = 4000;
};

struct ExperimentConfig {
  double mot_rate = 20.0;
  int trials_per_cycle = 250;
  double generation_phase = 1e-3;
  double p1_target = 1e-3;  ///< chi is calibrated to this herald probability
  SourceParams source{0.0, ClickDetector{0.5, 1e-6}, 0.0660, 0.10, kDefaultNMax};
  MemoryParams memory;
  /// Control-leakage background per memory; unset means calibrate it so the
  /// output fringe has raw visibility target_raw_visibility.
  std::optional<double> background_mean;
  double target_raw_visibility = 0.87;
  double delay_line_transmission = 0.72;
  double propagation_transmission = 0.8335;
  double filter_transmission = 0.30;
  double detector_efficiency = 0.50;
  double detector_dark_prob = 1e-6;
  double split_transmittance = 0.48;       ///< fraction into path a
  /// Reference-path loss relative to the memory path, applied to input-stage states only.
  double reference_path_correction = 1.0;
  double interferometer_visibility = 0.96;  ///< passive interferometer phase stability
  double memory_visibility = 0.94 / 0.96;   ///< extra phase noise between the two memories
  double storage_time = 1e-6;
  double pulse_fwhm = 300e-9;
  std::vector<double> od_grid{50, 100, 150, 200, 250, 300, 350, 400, 450, 500};
  SolverOptions solver;
  RunSizes run;
  RepeaterConfig repeater;
  std::uint64_t seed = 1;
  int workers = 0;  ///< 0 = hardware concurrency

  void validate() const;
  double duty_factor() const { return generation_phase * mot_rate; }
};

enum class TrialMode { Pij, Fringe, Hbt };
enum class Stage { Input, Output };

const char* to_string(TrialMode m);
const char* to_string(Stage s);

/// Calibrated pipeline derived from a config.
struct Setup {
  ExperimentConfig config;
  HeraldedPhoton photon;
  PulseEnvelope pulse;
  StorageResult storage;
  double memory_transmission = 0.0;  ///< storage efficiency x lifetime factor
  double background_mean = 0.0;
  ClickDetector detector;
};

/// Calibrates chi, solves the memory and (if unset) the background level.
Setup prepare(const ExperimentConfig& config);

/// Same, with the memory solve supplied (skips the Maxwell-Bloch run).
Setup prepare(const ExperimentConfig& config, const StorageResult& storage);

/// Two path modes just before the detectors.
MultiModeState path_state(const Setup& setup, Stage stage, std::optional<double> background = {});

/// Single Field-2 mode just before the HBT splitter.
MultiModeState hbt_input(const Setup& setup, Stage stage);

/// Heralded outcome distribution; pattern[mask] has bit 0 for the first
/// detector (d2, path a or recombiner output 1) and bit 1 for the second (d3).
struct OutcomeModel {
  double p_herald = 0.0;
  std::array<double, 4> pattern{};
};

OutcomeModel analytic_outcomes(const Setup& setup, TrialMode mode, Stage stage, double phase = 0.0);

/// Raw output fringe visibility at a given background level (exact probabilities).
double raw_output_visibility(const Setup& setup, double background_mean);

/// Background mean per memory giving raw output visibility `target`.
double calibrate_background(const Setup& setup, double target);

struct FringePointCounts {
  double phase = 0.0;
  long long n_trials = 0;
  long long n_heralds = 0;
  long long n_d1 = 0;
  long long n_d2 = 0;
  long long n_coinc = 0;
  bool operator==(const FringePointCounts&) const = default;
};

struct CountsTable {
  TrialMode mode = TrialMode::Pij;
  Stage stage = Stage::Input;
  long long n_trials = 0;
  long long n_heralds = 0;
  long long n_singles_d2 = 0;  ///< herald and d2
  long long n_singles_d3 = 0;  ///< herald and d3
  long long n_coinc_00 = 0;
  long long n_coinc_01 = 0;
  long long n_coinc_10 = 0;
  long long n_coinc_11 = 0;
  long long n_triples = 0;  ///< herald, d2 and d3
  std::vector<FringePointCounts> fringe;

  bool operator==(const CountsTable&) const = default;
  PijCounts pij_counts() const;
  FringeData fringe_data() const;
};

inline constexpr const char* kRngName = "mt19937_64/seed_seq(seed_lo,seed_hi,stream,chunk)/2^20-trial chunks";
inline constexpr long long kChunkTrials = 1LL << 20;

/// Per trial: herald with probability p_herald, then one draw from the
/// heralded pattern distribution. Results depend only on (setup, seed,
/// n_trials, mode, stage, phases), not on the worker count.
CountsTable run_trials(const Setup& setup, long long n_trials, TrialMode mode, Stage stage,
                       std::span<const double> phases = {});

CountsTable run_trials(const ExperimentConfig& config, long long n_trials, TrialMode mode,
                       Stage stage, std::span<const double> phases = {});

/// p_ij with Poisson sigmas. Throws std::invalid_argument on zero heralds.
PijEstimate counts_to_probs(const CountsTable& table);

struct RateReport {
  double duty_factor = 0.0;
  double generation_seconds = 0.0;  ///< time spent in the generation phase
  double herald_rate = 0.0;         ///< Field-1 clicks per generation-phase second
  double heralded_photon_rate = 0.0;
  double entanglement_rate = 0.0;
  double detection_rate = 0.0;  ///< heralded trials with at least one click
  double overall_herald_rate = 0.0;
  double overall_heralded_photon_rate = 0.0;
  double overall_entanglement_rate = 0.0;
  double overall_detection_rate = 0.0;
};

RateReport rates_report(const ExperimentConfig& config, const CountsTable& table);

}  // namespace qmemsim

#endif  // QMEMSIM_ENGINE_HPP
