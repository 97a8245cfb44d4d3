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

#include "qmemsim/eit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace qmemsim {

namespace {

using cd = std::complex<double>;

constexpr double kMaxRabiOverGamma = 1e3;

double raised_cosine_down(double x) {  // x in [0, 1]: 1 -> 0
  return 0.5 * (1.0 + std::cos(std::numbers::pi * x));
}

struct GridRun {
  StorageResult result;
  double out_peak_time = 0.0;
};

double window_end(const PulseEnvelope& pulse, const MemoryParams& params, bool storage) {
  const double tau = group_delay(params, params.control.rabi_peak);
  if (storage) {
    return params.control.switch_on_time + params.control.ramp_duration + tau +
           4.0 * pulse.duration_fwhm;
  }
  return pulse.t_peak + tau + 5.0 * pulse.duration_fwhm;
}

GridRun run_grid(const PulseEnvelope& pulse, const MemoryParams& params, int nz, double dt,
                 bool storage) {
  const double d = coupling_depth(params.od);
  const double sqrt_d = std::sqrt(d);
  const double gamma = params.gamma;
  const double gamma0 = params.gamma0 + params.od_penalty * params.od * params.od * gamma;
  const double dz = 1.0 / (nz - 1);
  const double t_end = window_end(pulse, params, storage);
  const long steps = static_cast<long>(std::ceil(t_end / dt));
  const double t_split = storage ? params.control.switch_on_time - 0.5 * params.control.ramp_duration
                                 : std::numeric_limits<double>::infinity();

  auto rabi = [&](double t) { return storage ? params.control.rabi(t) : params.control.rabi_peak; };

  const cd g(0.0, sqrt_d * gamma);      // i sqrt(d) gamma
  const cd c(0.0, sqrt_d * dz / 2.0);   // trapezoid weight of i sqrt(d) over one cell
  const cd half_h(dt / 2.0, 0.0);
  const cd i1(0.0, 1.0);

  Eigen::VectorXcd P = Eigen::VectorXcd::Zero(nz);
  Eigen::VectorXcd S = Eigen::VectorXcd::Zero(nz);
  Eigen::VectorXcd E = Eigen::VectorXcd::Constant(nz, cd(pulse.amplitude(0.0), 0.0));
  Eigen::VectorXcd Pn(nz), Sn(nz), En(nz);

  auto dissipation = [&](const Eigen::VectorXcd& p, const Eigen::VectorXcd& s) {
    double acc = 0.0;
    for (int j = 0; j < nz; ++j) {
      const double w = (j == 0 || j == nz - 1) ? 0.5 * dz : dz;
      acc += w * (2.0 * std::norm(p(j)) + 2.0 * gamma0 / gamma * std::norm(s(j)));
    }
    return acc;
  };

  double in_energy = 0.0;
  double leak = 0.0;
  double retrieved = 0.0;
  double dissipated = 0.0;
  double prev_in = std::norm(E(0));
  double prev_out = std::norm(E(nz - 1));
  double prev_diss = 0.0;
  double peak_val = prev_out;
  long peak_idx = 0;
  std::vector<double> out_intensity;
  out_intensity.reserve(static_cast<std::size_t>(steps) + 1);
  out_intensity.push_back(prev_out);
  std::vector<double> out_amp;
  double retrieved_t0 = 0.0;
  double omega_old = rabi(0.0);

  for (long n = 0; n < steps; ++n) {
    const double t_new = (n + 1) * dt;
    const double omega = rabi(t_new);
    const cd a11 = 1.0 + half_h * gamma;
    const cd a12 = -half_h * i1 * omega;
    const cd a21 = -half_h * i1 * omega;
    const cd a22 = 1.0 + half_h * gamma0;

    cd e_known(pulse.amplitude(t_new), 0.0);
    for (int j = 0; j < nz; ++j) {
      const cd rhs_p = P(j) + half_h * (-gamma * P(j) + g * E(j) + i1 * omega_old * S(j));
      const cd rhs_s = S(j) + half_h * (-gamma0 * S(j) + i1 * omega_old * P(j));
      const cd cj = (j == 0) ? cd(0.0) : c;
      if (j > 0) e_known = En(j - 1) + c * Pn(j - 1);
      const cd b11 = a11 - half_h * g * cj;
      const cd b1 = rhs_p + half_h * g * e_known;
      const cd det = b11 * a22 - a12 * a21;
      Pn(j) = (b1 * a22 - a12 * rhs_s) / det;
      Sn(j) = (b11 * rhs_s - a21 * b1) / det;
      En(j) = e_known + cj * Pn(j);
    }
    P.swap(Pn);
    S.swap(Sn);
    E.swap(En);
    omega_old = omega;

    const double cur_in = std::norm(E(0));
    const double cur_out = std::norm(E(nz - 1));
    const double cur_diss = dissipation(P, S);
    in_energy += 0.5 * dt * (prev_in + cur_in);
    const double slab = 0.5 * dt * (prev_out + cur_out);
    if (t_new - 0.5 * dt < t_split) {
      leak += slab;
    } else {
      retrieved += slab;
      if (out_amp.empty()) {
        retrieved_t0 = t_new - dt;
        out_amp.push_back(std::sqrt(prev_out));
      }
      out_amp.push_back(std::sqrt(cur_out));
    }
    dissipated += 0.5 * dt * (prev_diss + cur_diss);
    prev_in = cur_in;
    prev_out = cur_out;
    prev_diss = cur_diss;
    out_intensity.push_back(cur_out);
    if (cur_out > peak_val) {
      peak_val = cur_out;
      peak_idx = n + 1;
    }
  }

  double residual = 0.0;
  for (int j = 0; j < nz; ++j) {
    const double w = (j == 0 || j == nz - 1) ? 0.5 * dz : dz;
    residual += w * (std::norm(P(j)) + std::norm(S(j))) / gamma;
  }

  GridRun run;
  auto& r = run.result;
  r.efficiency = retrieved / in_energy;
  r.leakage_fraction = leak / in_energy;
  r.dissipated_fraction = dissipated / in_energy;
  r.residual_fraction = residual / in_energy;
  r.retrieved.shape = PulseShape::Sampled;
  r.retrieved.duration_fwhm = pulse.duration_fwhm;
  r.retrieved.dt = dt;
  r.retrieved.t_start = retrieved_t0;
  r.retrieved.samples = Eigen::Map<const Eigen::VectorXd>(out_amp.data(),
                                                          static_cast<Eigen::Index>(out_amp.size()));
  r.retrieved.samples /= std::sqrt(in_energy);
  r.diagnostics.z_points = nz;
  r.diagnostics.time_steps = steps;

  // Parabolic refinement of the output intensity peak.
  double t_peak = peak_idx * dt;
  if (peak_idx > 0 && peak_idx + 1 < static_cast<long>(out_intensity.size())) {
    const double ym = out_intensity[peak_idx - 1];
    const double y0 = out_intensity[peak_idx];
    const double yp = out_intensity[peak_idx + 1];
    const double den = ym - 2.0 * y0 + yp;
    if (den != 0.0) t_peak += 0.5 * dt * (ym - yp) / den;
  }
  run.out_peak_time = t_peak;
  return run;
}

void check_pulse_against_schedule(const PulseEnvelope& pulse, const MemoryParams& params) {
  if (pulse.duration_fwhm <= 0.0) throw std::invalid_argument("pulse duration must be positive");
  if (params.control.switch_off_time <= pulse.t_peak) {
    throw std::invalid_argument("control switches off before the pulse peak arrives");
  }
}

}  // namespace

double PulseEnvelope::amplitude(double t) const {
  if (shape == PulseShape::Gaussian) {
    // Unit-energy amplitude whose intensity has FWHM duration_fwhm.
    const double k = 4.0 * std::numbers::ln2 / (duration_fwhm * duration_fwhm);
    const double norm = std::sqrt(std::numbers::pi / k);
    const double x = t - t_peak;
    return std::exp(-0.5 * k * x * x) / std::sqrt(norm);
  }
  if (samples.size() == 0) return 0.0;
  const double u = (t - t_start) / dt;
  if (u < 0.0 || u > static_cast<double>(samples.size() - 1)) return 0.0;
  const auto i = static_cast<Eigen::Index>(std::floor(u));
  if (i + 1 >= samples.size()) return samples(samples.size() - 1);
  const double f = u - static_cast<double>(i);
  return (1.0 - f) * samples(i) + f * samples(i + 1);
}

double PulseEnvelope::energy() const {
  if (samples.size() < 2) return 0.0;
  const Eigen::VectorXd sq = samples.array().square();
  return dt * (sq.sum() - 0.5 * (sq(0) + sq(sq.size() - 1)));
}

PulseEnvelope gaussian_pulse(double duration_fwhm, double t_peak, double dt, double t_end) {
  if (duration_fwhm <= 0.0 || dt <= 0.0 || t_end <= 0.0) {
    throw std::invalid_argument("gaussian_pulse needs positive duration, step and window");
  }
  PulseEnvelope p;
  p.shape = PulseShape::Gaussian;
  p.duration_fwhm = duration_fwhm;
  p.t_peak = t_peak;
  p.dt = dt;
  const auto n = static_cast<Eigen::Index>(std::floor(t_end / dt)) + 1;
  p.samples.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) p.samples(i) = p.amplitude(static_cast<double>(i) * dt);
  return p;
}

double ControlSchedule::rabi(double t) const {
  const double r = ramp_duration;
  const double off0 = switch_off_time - 0.5 * r;
  const double on0 = switch_on_time - 0.5 * r;
  if (t <= off0) return rabi_peak;
  if (t < off0 + r) return rabi_peak * raised_cosine_down((t - off0) / r);
  if (t <= on0) return 0.0;
  if (t < on0 + r) return rabi_peak * (1.0 - raised_cosine_down((t - on0) / r));
  return rabi_peak;
}

void ControlSchedule::validate() const {
  if (!(rabi_peak >= 0.0)) throw std::invalid_argument("rabi_peak must be >= 0");
  if (!(ramp_duration > 0.0)) throw std::invalid_argument("ramp_duration must be > 0");
  if (!(switch_on_time > switch_off_time)) {
    throw std::invalid_argument("switch_on_time must follow switch_off_time");
  }
  if (switch_on_time - switch_off_time < ramp_duration) {
    throw std::invalid_argument("control ramps overlap");
  }
}

void MemoryParams::validate() const {
  if (!(od >= 0.0)) throw std::invalid_argument("od must be >= 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  if (!(gamma0 >= 0.0)) throw std::invalid_argument("gamma0 must be >= 0");
  if (!(storage_time >= 0.0)) throw std::invalid_argument("storage_time must be >= 0");
  if (!(lifetime_tau > 0.0)) throw std::invalid_argument("lifetime_tau must be > 0");
  if (!(background_mean >= 0.0)) throw std::invalid_argument("background_mean must be >= 0");
  if (!(od_penalty >= 0.0)) throw std::invalid_argument("od_penalty must be >= 0");
}

double group_delay(const MemoryParams& params, double rabi) {
  if (rabi <= 0.0) return 0.0;
  return coupling_depth(params.od) * params.gamma / (rabi * rabi);
}

double control_for_target_delay(const MemoryParams& params, double target_delay) {
  if (!(params.od > 0.0)) throw std::invalid_argument("delay matching needs od > 0");
  if (!(target_delay > 0.0)) {
    throw std::invalid_argument("target delay must be positive (zero needs unbounded Rabi)");
  }
  const double rabi = std::sqrt(coupling_depth(params.od) * params.gamma / target_delay);
  if (rabi > kMaxRabiOverGamma * params.gamma) {
    throw std::domain_error("required Rabi frequency exceeds " +
                            std::to_string(kMaxRabiOverGamma) + " gamma");
  }
  return rabi;
}

double control_for_delay(const MemoryParams& params, const PulseEnvelope& pulse,
                         double delay_factor) {
  return control_for_target_delay(params, delay_factor * pulse.duration_fwhm);
}

ControlSchedule matched_schedule(const MemoryParams& params, const PulseEnvelope& pulse,
                                 double delay_factor) {
  ControlSchedule s = params.control;
  if (!(s.ramp_duration > 0.0)) s.ramp_duration = 50e-9;
  s.rabi_peak = control_for_delay(params, pulse, delay_factor);
  const double tau = group_delay(params, s.rabi_peak);
  s.switch_off_time = pulse.t_peak + 0.5 * tau;
  s.switch_on_time = s.switch_off_time + params.storage_time;
  return s;
}

StorageResult solve_maxwell_bloch(const PulseEnvelope& pulse, const MemoryParams& params,
                                  const SolverOptions& options) {
  params.validate();
  if (options.z_points < 3) throw std::invalid_argument("need at least 3 z points");
  if (options.storage_enabled) {
    params.control.validate();
    check_pulse_against_schedule(pulse, params);
  }
  int nz = options.z_points;
  double dt = pulse.duration_fwhm * options.dt_fraction;
  GridRun coarse = run_grid(pulse, params, nz, dt, options.storage_enabled);
  if (!options.refine) return coarse.result;

  for (int level = 1; level <= options.max_refinements; ++level) {
    nz = 2 * (nz - 1) + 1;
    dt /= 2.0;
    GridRun fine = run_grid(pulse, params, nz, dt, options.storage_enabled);
    const double delta = std::abs(fine.result.efficiency - coarse.result.efficiency);
    fine.result.diagnostics.refinements = level;
    fine.result.diagnostics.refinement_delta = delta;
    coarse = std::move(fine);
    if (delta < options.tolerance) {
      coarse.result.diagnostics.converged = true;
      return coarse.result;
    }
  }
  if (options.require_convergence) {
    throw ConvergenceError("grid refinement did not reach efficiency tolerance " +
                           std::to_string(options.tolerance) + " (last change " +
                           std::to_string(coarse.result.diagnostics.refinement_delta) + ")");
  }
  return coarse.result;
}

double measure_delay(const PulseEnvelope& pulse, const MemoryParams& params,
                     const SolverOptions& options) {
  params.validate();
  const double dt = pulse.duration_fwhm * options.dt_fraction;
  const GridRun run = run_grid(pulse, params, options.z_points, dt, false);
  return run.out_peak_time - pulse.t_peak;
}

std::vector<EfficiencyPoint> efficiency_vs_od(const std::vector<double>& od_list,
                                              const MemoryParams& params,
                                              const PulseEnvelope& pulse,
                                              SolverOptions options) {
  if (od_list.empty()) throw std::invalid_argument("empty od list");
  options.require_convergence = false;
  std::vector<EfficiencyPoint> curve;
  curve.reserve(od_list.size());
  for (double od : od_list) {
    MemoryParams p = params;
    p.od = od;
    p.control = matched_schedule(p, pulse);
    curve.push_back({od, solve_maxwell_bloch(pulse, p, options)});
  }
  return curve;
}

double lifetime_factor(double storage_time, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("lifetime tau must be > 0");
  const double x = storage_time / tau;
  return std::exp(-x * x);
}

ChannelChain memory_channel(const StorageResult& result, const MemoryParams& params) {
  const double t = std::clamp(result.efficiency, 0.0, 1.0) *
                   lifetime_factor(params.storage_time, params.lifetime_tau);
  ChannelChain chain{Loss{t}};
  if (params.background_mean > 0.0) chain.push_back(BackgroundInjection{params.background_mean});
  return chain;
}

}  // namespace qmemsim
