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

#ifndef QMEMSIM_EIT_HPP
#define QMEMSIM_EIT_HPP

#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qmemsim/fock.hpp"

namespace qmemsim {

/// Cs D1 natural linewidth Gamma (rad/s), Gamma / 2pi = 4.5 MHz.
inline constexpr double kGammaD1 = 2.0 * std::numbers::pi * 4.5e6;

enum class PulseShape { Gaussian, Sampled };

/// Real field envelope on a uniform grid starting at t = 0.
///
/// Gaussian envelopes are evaluated in closed form (intensity FWHM =
/// duration_fwhm, unit energy); sampled envelopes interpolate `samples`.
struct PulseEnvelope {
  PulseShape shape = PulseShape::Gaussian;
  double duration_fwhm = 300e-9;
  double t_peak = 750e-9;
  double dt = 300e-9 / 400;
  double t_start = 0.0;
  Eigen::VectorXd samples;

  double amplitude(double t) const;
  /// sum |samples|^2 dt (trapezoid).
  double energy() const;
};

/// Unit-energy Gaussian sampled on [0, t_end] with step dt.
PulseEnvelope gaussian_pulse(double duration_fwhm, double t_peak, double dt, double t_end);

/// Control Rabi frequency: on at rabi_peak, raised-cosine ramp to zero centred
/// at switch_off_time, back on with a ramp centred at switch_on_time.
struct ControlSchedule {
  double rabi_peak = 0.0;
  double switch_off_time = 0.0;
  double switch_on_time = 0.0;
  double ramp_duration = 50e-9;

  double rabi(double t) const;
  void validate() const;
};

struct MemoryParams {
  double od = 500.0;  ///< resonant intensity optical depth, transmission exp(-od)
  double gamma = kGammaD1 / 2.0;
  double gamma0 = 1e-3 * kGammaD1;
  ControlSchedule control;
  double storage_time = 1e-6;
  double lifetime_tau = 15e-6;
  double background_mean = 0.0;
  /// Extra ground-state decoherence od_penalty * od^2 * gamma (off by default).
  double od_penalty = 0.0;

  void validate() const;
};

struct SolverOptions {
  int z_points = 200;
  double dt_fraction = 1.0 / 400.0;  ///< dt = duration_fwhm * dt_fraction
  int max_refinements = 4;
  double tolerance = 1e-3;
  bool refine = true;
  bool storage_enabled = true;
  bool require_convergence = true;
};

struct SolverDiagnostics {
  int z_points = 0;
  long time_steps = 0;
  int refinements = 0;
  double refinement_delta = 0.0;
  bool converged = false;
};

struct StorageResult {
  double efficiency = 0.0;
  double leakage_fraction = 0.0;
  double dissipated_fraction = 0.0;  ///< lost to 2 gamma |P|^2 and 2 gamma0 |S|^2
  double residual_fraction = 0.0;    ///< still in the medium at the end of the window
  PulseEnvelope retrieved;           ///< output field, unnormalized
  SolverDiagnostics diagnostics;

  double energy_balance() const {
    return efficiency + leakage_fraction + dissipated_fraction + residual_fraction;
  }
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coupling depth d of the Lambda-model equations; amplitude decays as
/// exp(-d z) without control, so d = od / 2.
inline double coupling_depth(double od) { return od / 2.0; }

/// Slow-light delay d gamma / Omega^2 of the transparency window.
double group_delay(const MemoryParams& params, double rabi);

/// Rabi frequency giving a slow-light delay of delay_factor * duration_fwhm.
double control_for_delay(const MemoryParams& params, const PulseEnvelope& pulse,
                         double delay_factor = 2.0);
double control_for_target_delay(const MemoryParams& params, double target_delay);

/// Delay-matched schedule: switch-off when the pulse peak reaches mid-medium,
/// switch-on storage_time later.
ControlSchedule matched_schedule(const MemoryParams& params, const PulseEnvelope& pulse,
                                 double delay_factor = 2.0);

/// Co-moving-frame Lambda-system Maxwell-Bloch equations on z in [0, 1]:
///
///   dE/dz = i sqrt(d) P
///   dP/dt = -gamma P + i sqrt(d) gamma E + i Omega(t) S
///   dS/dt = -gamma0 S + i Omega*(t) P
///
/// integrated with Crank-Nicolson in time and the trapezoid rule in z. The
/// implicit system is block lower-triangular in z, so each step is a forward
/// sweep of 2x2 solves. With options.refine the grid is halved until the
/// efficiency moves by less than options.tolerance.
StorageResult solve_maxwell_bloch(const PulseEnvelope& pulse, const MemoryParams& params,
                                  const SolverOptions& options = {});

/// Peak delay of the transmitted pulse with the control held on.
double measure_delay(const PulseEnvelope& pulse, const MemoryParams& params,
                     const SolverOptions& options = {});

struct EfficiencyPoint {
  double od;
  StorageResult result;
};

/// One delay-matched solve per optical depth.
std::vector<EfficiencyPoint> efficiency_vs_od(const std::vector<double>& od_list,
                                              const MemoryParams& params,
                                              const PulseEnvelope& pulse,
                                              SolverOptions options = {});

/// exp(-(t / tau)^2).
double lifetime_factor(double storage_time, double tau);

/// Loss of efficiency * lifetime_factor, followed by control-leakage background.
ChannelChain memory_channel(const StorageResult& result, const MemoryParams& params);

}  // namespace qmemsim

#endif  // QMEMSIM_EIT_HPP
