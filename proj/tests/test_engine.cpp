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

#include <cmath>

#include <gtest/gtest.h>

#include "qmemsim/engine.hpp"
#include "qmemsim/interferometer.hpp"
#include "qmemsim/reference.hpp"

namespace qmemsim {
namespace {

const Setup& setup() {
  static const Setup s = prepare(ExperimentConfig{});
  return s;
}

Setup with_workers(int w, std::uint64_t seed = 1) {
  qmemsim::Setup s = setup();
  s.config.workers = w;
  s.config.seed = seed;
  return s;
}

// |N - n p| <= 4 sqrt(n p (1 - p))
void expect_binomial(long long count, long long n, double p, const char* what) {
  const double mean = n * p;
  const double sd = std::sqrt(n * p * (1.0 - p));
  EXPECT_LE(std::abs(count - mean), 4.0 * sd + 1e-9) << what << ": " << count << " vs " << mean;
}

void expect_matches_model(const CountsTable& t, const OutcomeModel& m) {
  const long long n = t.n_trials;
  expect_binomial(t.n_heralds, n, m.p_herald, "heralds");
  expect_binomial(t.n_coinc_00, n, m.p_herald * m.pattern[0], "00");
  expect_binomial(t.n_coinc_10, n, m.p_herald * m.pattern[1], "10");
  expect_binomial(t.n_coinc_01, n, m.p_herald * m.pattern[2], "01");
  expect_binomial(t.n_coinc_11, n, m.p_herald * m.pattern[3], "11");
  expect_binomial(t.n_singles_d2, n, m.p_herald * (m.pattern[1] + m.pattern[3]), "d2");
  expect_binomial(t.n_singles_d3, n, m.p_herald * (m.pattern[2] + m.pattern[3]), "d3");
}

TEST(Engine, CalibratedSetup) {
  const qmemsim::Setup& s = setup();
  EXPECT_NEAR(s.photon.p1, 1e-3, 1e-9);
  EXPECT_NEAR(s.config.source.chi, 0.1715, 1e-3);
  EXPECT_GT(s.background_mean, 0.0);
  EXPECT_NEAR(raw_output_visibility(s, s.background_mean), 0.87, 1e-6);
  EXPECT_NEAR(s.memory_transmission, s.storage.efficiency * lifetime_factor(1e-6, 15e-6), 1e-15);
}

TEST(Engine, InputColumnCalibration) {
  const PathProbabilities p = measure_pij(path_state(setup(), Stage::Input), setup().detector, setup().detector);
  EXPECT_NEAR(p.p01, reference::kInput.pij.p01, 0.05e-3);
  EXPECT_NEAR(p.p10, reference::kInput.pij.p10, 0.05e-3);
}

TEST(Engine, ReferencePathCorrectionOnlyTouchesInput) {
  qmemsim::Setup s = setup();
  s.config.reference_path_correction = 0.5;
  const auto& d = s.detector;
  const PathProbabilities in0 = measure_pij(path_state(setup(), Stage::Input), d, d);
  const PathProbabilities in1 = measure_pij(path_state(s, Stage::Input), d, d);
  EXPECT_NEAR(in1.single() / in0.single(), 0.5, 2e-3);  // dark counts shift it slightly
  const PathProbabilities out0 = measure_pij(path_state(setup(), Stage::Output), d, d);
  const PathProbabilities out1 = measure_pij(path_state(s, Stage::Output), d, d);
  EXPECT_DOUBLE_EQ(out1.p01, out0.p01);
  EXPECT_LT(mean_photon_number(hbt_input(s, Stage::Input), 0),
            0.51 * mean_photon_number(hbt_input(setup(), Stage::Input), 0));
}

TEST(Engine, ZeroTrialsGiveEmptyTable) {
  const CountsTable t = run_trials(setup(), 0, TrialMode::Pij, Stage::Input);
  EXPECT_EQ(t, CountsTable{});
}

TEST(Engine, DeterministicAndWorkerIndependent) {
  const long long n = 3 * kChunkTrials + 12345;
  const CountsTable a = run_trials(with_workers(1), n, TrialMode::Pij, Stage::Output);
  const CountsTable b = run_trials(with_workers(1), n, TrialMode::Pij, Stage::Output);
  const CountsTable c = run_trials(with_workers(4), n, TrialMode::Pij, Stage::Output);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  const CountsTable d = run_trials(with_workers(1, 2), n, TrialMode::Pij, Stage::Output);
  EXPECT_NE(a, d);
}

TEST(Engine, PijFrequenciesMatchAnalytic) {
  for (Stage st : {Stage::Input, Stage::Output}) {
    const CountsTable t = run_trials(with_workers(4), 1'000'000, TrialMode::Pij, st);
    expect_matches_model(t, analytic_outcomes(setup(), TrialMode::Pij, st));
  }
}

TEST(Engine, HeraldedSamplingMatchesAnalytic) {
  // Raise p1 so the heralded pattern probabilities are tested with real statistics.
  ExperimentConfig c;
  c.p1_target = 5e-3;
  c.background_mean = setup().background_mean;
  qmemsim::Setup s = prepare(c, setup().storage);
  s.config.workers = 4;
  const CountsTable t = run_trials(s, 20'000'000, TrialMode::Hbt, Stage::Output);
  expect_matches_model(t, analytic_outcomes(s, TrialMode::Hbt, Stage::Output));
  EXPECT_EQ(t.n_triples, t.n_coinc_11);
}

TEST(Engine, FringeModeCountsPerPhase) {
  const std::vector<double> phases = fringe_phases(8);
  const CountsTable t = run_trials(with_workers(4), 1'000'000, TrialMode::Fringe, Stage::Input, phases);
  ASSERT_EQ(t.fringe.size(), phases.size());
  EXPECT_EQ(t.n_trials, 8'000'000);
  for (std::size_t k = 0; k < phases.size(); ++k) {
    const OutcomeModel m = analytic_outcomes(setup(), TrialMode::Fringe, Stage::Input, phases[k]);
    expect_binomial(t.fringe[k].n_d1, 1'000'000, m.p_herald * (m.pattern[1] + m.pattern[3]), "d1");
    EXPECT_LE(t.fringe[k].n_coinc, t.fringe[k].n_d1);
  }
  EXPECT_THROW(run_trials(setup(), 10, TrialMode::Fringe, Stage::Input), std::invalid_argument);
}

TEST(Engine, CountInvariants) {
  const CountsTable t = run_trials(with_workers(2), 2'000'000, TrialMode::Pij, Stage::Output);
  EXPECT_EQ(t.n_coinc_00 + t.n_coinc_01 + t.n_coinc_10 + t.n_coinc_11, t.n_heralds);
  EXPECT_LE(t.n_singles_d2, t.n_heralds);
  EXPECT_LE(t.n_heralds, t.n_trials);
  EXPECT_EQ(t.n_triples, t.n_coinc_11);
}

TEST(Engine, CountsToProbs) {
  CountsTable t;
  t.n_trials = 10'000'000;
  t.n_heralds = 10'000;
  t.n_coinc_10 = 46;
  t.n_coinc_00 = 10'000 - 46;
  const PijEstimate e = counts_to_probs(t);
  EXPECT_NEAR(e.p10.value, 4.6e-3, 1e-15);
  EXPECT_NEAR(*e.p10.plus, 0.68e-3, 0.005e-3);
  EXPECT_EQ(e.p11.value, 0.0);
  EXPECT_GT(*e.p11.plus, 0.0);
  EXPECT_THROW(counts_to_probs(CountsTable{}), std::invalid_argument);
}

TEST(Engine, RateArithmetic) {
  ExperimentConfig c;
  CountsTable t;
  t.n_trials = 250'000;  // one second of generation phase
  t.n_heralds = 250;
  t.n_singles_d2 = 1;
  t.n_singles_d3 = 1;
  const RateReport r = rates_report(c, t);
  EXPECT_DOUBLE_EQ(r.duty_factor, 0.02);
  EXPECT_DOUBLE_EQ(r.generation_seconds, 1.0);
  EXPECT_DOUBLE_EQ(r.herald_rate, 250.0);
  EXPECT_DOUBLE_EQ(r.heralded_photon_rate, 25.0);
  EXPECT_DOUBLE_EQ(r.entanglement_rate, 18.0);
  EXPECT_DOUBLE_EQ(r.detection_rate, 2.0);
  EXPECT_DOUBLE_EQ(r.overall_herald_rate, r.herald_rate * 0.02);
  EXPECT_DOUBLE_EQ(r.overall_entanglement_rate, r.entanglement_rate * 0.02);
  EXPECT_DOUBLE_EQ(r.overall_detection_rate, r.detection_rate * 0.02);
  EXPECT_NEAR(r.overall_entanglement_rate, 0.36, 1e-12);
}

TEST(Engine, ConfigValidation) {
  ExperimentConfig c;
  c.trials_per_cycle = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = ExperimentConfig{};
  c.filter_transmission = 1.3;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = ExperimentConfig{};
  c.background_mean = -1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_NO_THROW(ExperimentConfig{}.validate());
}

TEST(Engine, UnreachableVisibilityTarget) {
  ExperimentConfig c;
  c.target_raw_visibility = 0.99;
  EXPECT_THROW(prepare(c, setup().storage), std::domain_error);
}

}  // namespace
}  // namespace qmemsim
