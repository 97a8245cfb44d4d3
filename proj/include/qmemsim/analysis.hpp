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

#ifndef QMEMSIM_ANALYSIS_HPP
#define QMEMSIM_ANALYSIS_HPP

#include <optional>

#include <Eigen/Dense>

#include "qmemsim/ratio.hpp"

namespace qmemsim {

/// Click-pattern probabilities in the path basis: p_ij has i photons
/// ("click") in mode a and j in mode b.
struct PathProbabilities {
  double p00 = 0.0;
  double p01 = 0.0;
  double p10 = 0.0;
  double p11 = 0.0;

  double total() const { return p00 + p01 + p10 + p11; }
  double single() const { return p01 + p10; }
};

/// Density matrix restricted to at most one photon per mode, with all
/// coherences between different total photon numbers set to zero.
struct ReducedDM {
  double p00 = 0.0;
  double p01 = 0.0;
  double p10 = 0.0;
  double p11 = 0.0;
  double d = 0.0;  ///< |<0_a 1_b| rho |1_a 0_b>|, unnormalized

  double P() const { return p00 + p01 + p10 + p11; }
  /// d <= sqrt(p01 p10); reported, not enforced.
  bool physical() const;
  /// Normalized 4x4 matrix in the basis |00>, |01>, |10>, |11>.
  Eigen::Matrix4cd matrix() const;
};

/// d = V (p01 + p10) / 2.
ReducedDM reduced_density_matrix(const PathProbabilities& pij, double visibility);

/// max(2d - 2 sqrt(p00 p11), 0) / P.
double concurrence(const ReducedDM& dm);

/// p11 / (p10 p01).
Ratio suppression_from_pij(const ReducedDM& dm);

struct TransferMetrics {
  double eta = 0.0;  ///< (p10 + p01)_out / (p10 + p01)_in
  Ratio lambda;      ///< C_out / C_in
};

TransferMetrics transfer_metrics(const ReducedDM& dm_in, const ReducedDM& dm_out);

/// Value with an optional, possibly asymmetric, one-sigma interval. The
/// interval is absent when no counts back the value.
struct Estimate {
  double value = 0.0;
  std::optional<double> minus;
  std::optional<double> plus;

  static Estimate exact(double v) { return Estimate{v, std::nullopt, std::nullopt}; }
  static Estimate symmetric(double v, double s) { return Estimate{v, s, s}; }
  bool has_error() const { return minus.has_value() && plus.has_value(); }
  double sigma() const { return has_error() ? 0.5 * (*minus + *plus) : 0.0; }
};

/// Raw counts of one p_ij measurement.
struct PijCounts {
  long long n_heralds = 0;
  long long n00 = 0;
  long long n01 = 0;
  long long n10 = 0;
  long long n11 = 0;

  PathProbabilities probabilities() const;
};

/// Poisson 1-sigma upper limit on the mean for zero observed events.
inline constexpr double kZeroCountUpper = 1.841;

struct PijEstimate {
  Estimate p00, p01, p10, p11;
};

/// sqrt(N) / N_heralds per probability; zero counts give one-sided intervals.
PijEstimate pij_with_errors(const PijCounts& counts);

struct EntanglementReport {
  PijEstimate pij;
  Estimate visibility;
  Estimate d;
  Estimate concurrence;
  Estimate suppression;  ///< value 0 with no interval when undefined
  bool suppression_defined = true;
  bool physical = true;
  std::optional<Estimate> eta;
  std::optional<Estimate> lambda;
};

/// First-order Poisson propagation for one measurement column. The
/// visibility uncertainty, if present, is propagated alongside.
EntanglementReport poisson_errors(const PijCounts& counts, const Estimate& visibility);

/// Both columns plus eta and lambda. lambda carries the quadrature error with
/// the upper side clipped at lambda = 1.
struct PairedReport {
  EntanglementReport in;
  EntanglementReport out;
  Estimate eta;
  std::optional<Estimate> lambda;
};
PairedReport paired_report(const PijCounts& in, const Estimate& v_in, const PijCounts& out,
                           const Estimate& v_out);

/// Ratio estimate with quadrature error, upper side clipped at `cap`.
Estimate ratio_estimate(const Estimate& num, const Estimate& den, double cap);

struct CorrectedVisibility {
  double visibility = 0.0;
  bool clamped = false;
};

/// V_raw (S + B) / S for a phase-independent background, clamped to [0, 1].
CorrectedVisibility background_correct_visibility(double v_raw, double signal_rate,
                                                  double background_rate);

/// Background-to-signal ratio B / S turning v_true into v_raw.
double background_ratio_for(double v_raw, double v_true);

}  // namespace qmemsim

#endif  // QMEMSIM_ANALYSIS_HPP
