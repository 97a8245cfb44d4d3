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

#ifndef QMEMSIM_INTERFEROMETER_HPP
#define QMEMSIM_INTERFEROMETER_HPP

#include <vector>

#include "qmemsim/analysis.hpp"
#include "qmemsim/fock.hpp"
#include "qmemsim/source.hpp"

namespace qmemsim {

/// Path modes after the entangling split: mode 0 is path a, mode 1 is path b.
inline constexpr int kPathA = 0;
inline constexpr int kPathB = 1;

/// Recombiner phase giving p_d1 = (1 + sin phi) / 2 for the state split_entangle
/// makes from a single photon.
inline constexpr double kRecombinerPhase = -1.5707963267948966;

/// Splits a single-mode photon state into two path modes; `transmittance` is
/// the fraction sent into path a.
MultiModeState split_entangle(const MultiModeState& photon, double transmittance = 0.5);
MultiModeState split_entangle(const HeraldedPhoton& photon, double transmittance = 0.5);

/// Applies independent per-path chains (typically two memory channels).
MultiModeState store_both(const MultiModeState& paths, const ChannelChain& chain_a,
                          const ChannelChain& chain_b);

/// Click probabilities behind the phase-shifted 50:50 recombiner.
struct PbsClicks {
  double p_d1 = 0.0;
  double p_d2 = 0.0;
  double p_coinc = 0.0;
  double p_none = 0.0;
};

/// Rotates the path basis by relative phase phi and detects both outputs
/// (d1 on the output fed by path a).
PbsClicks detect_pbs(const MultiModeState& paths, double phi, const ClickDetector& d1,
                     const ClickDetector& d2);

/// Direct path-basis measurement (the p_ij configuration).
PathProbabilities measure_pij(const MultiModeState& paths, const ClickDetector& det_a,
                              const ClickDetector& det_b);

/// Probabilities or per-herald click fractions at each phase point.
struct FringeData {
  std::vector<double> phases;
  std::vector<double> p_d1;
  std::vector<double> p_d2;
  std::vector<double> p_coinc;
  long long trials_per_point = 0;  ///< heralds per point; 0 for exact probabilities
};

FringeData scan_fringes(const MultiModeState& paths, const std::vector<double>& phases,
                        const ClickDetector& d1, const ClickDetector& d2);

/// Evenly spaced phases on [0, 2 pi).
std::vector<double> fringe_phases(int points);

/// y = A (1 + V sin(phi + phi0)).
struct VisibilityFit {
  double visibility = 0.0;
  double sigma_visibility = 0.0;
  double phase_offset = 0.0;
  double mean_level = 0.0;
  double rms_residual = 0.0;
  bool clamped = false;  ///< fitted V exceeded 1
};

enum class FringeOutput { D1, D2 };

/// Linear least squares in (1, sin phi, cos phi); Poisson weights when
/// trials_per_point > 0. Throws std::invalid_argument for fewer than four
/// points or a phase span not exceeding pi, std::runtime_error when the fit
/// degenerates.
VisibilityFit fit_visibility(const FringeData& data, FringeOutput output = FringeOutput::D1);

}  // namespace qmemsim

#endif  // QMEMSIM_INTERFEROMETER_HPP
