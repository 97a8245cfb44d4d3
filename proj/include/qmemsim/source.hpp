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

#ifndef QMEMSIM_SOURCE_HPP
#define QMEMSIM_SOURCE_HPP

#include "qmemsim/fock.hpp"
#include "qmemsim/ratio.hpp"

namespace qmemsim {

/// Write/read source: Field 1 heralds, Field 2 carries the single photon.
struct SourceParams {
  double chi = 0.0;  ///< squeezing amplitude, restricted to [0, 0.5]
  ClickDetector herald_detector{0.5, 1e-6};
  double field1_transmission = 1.0;
  double heralding_efficiency = 0.10;  ///< Field-2 extraction, read-out included
  int n_max = kDefaultNMax;

  void validate() const;
};

/// Field-2 state conditioned on a Field-1 click.
struct HeraldedPhoton {
  double p1 = 0.0;
  MultiModeState state{1, kDefaultNMax};
  Ratio w_source;  ///< HBT suppression with ideal detectors
};

/// Two-mode squeezed vacuum, amplitudes proportional to chi^n on |n,n>,
/// renormalized after truncation at n_max.
MultiModeState tmsv_state(double chi, int n_max);

/// Weight of the untruncated TMSV above n_max, i.e. chi^(2 (n_max + 1)).
double tmsv_truncation_deficit(double chi, int n_max);

HeraldedPhoton herald_field2(const SourceParams& params);

/// p1 p123 / (p12 p13) with the heralded state split by `splitter` (acting on
/// the photon mode, partner = an ancilla vacuum mode) onto det2 and det3.
Ratio hbt_suppression(const HeraldedPhoton& photon, const BeamSplitter& splitter,
                      const ClickDetector& det2, const ClickDetector& det3);

/// Same measurement on an arbitrary single-mode state.
Ratio hbt_suppression(const MultiModeState& single_mode, const BeamSplitter& splitter,
                      const ClickDetector& det2, const ClickDetector& det3);

/// chi such that herald_field2 gives p1_target (bisection, herald p1 is
/// monotone in chi). Throws std::domain_error if the target is unreachable.
double calibrate_chi(double p1_target, const SourceParams& params);

/// Field-1 transmission such that the source suppression equals w_target at
/// p1_target, with chi re-calibrated at every step.
double calibrate_field1_transmission(double w_target, double p1_target, SourceParams params);

}  // namespace qmemsim

#endif  // QMEMSIM_SOURCE_HPP
