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

#include "qmemsim/interferometer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace qmemsim {

MultiModeState split_entangle(const MultiModeState& photon, double transmittance) {
  if (photon.mode_count() != 1) throw std::invalid_argument("split_entangle needs a single mode");
  if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
    throw std::invalid_argument("split transmittance outside [0,1]");
  }
  const MultiModeState two = tensor(photon, MultiModeState(1, photon.n_max()));
  return apply_beamsplitter(two, kPathA, kPathB, transmittance, 0.0);
}

MultiModeState split_entangle(const HeraldedPhoton& photon, double transmittance) {
  return split_entangle(photon.state, transmittance);
}

MultiModeState store_both(const MultiModeState& paths, const ChannelChain& chain_a,
                          const ChannelChain& chain_b) {
  if (paths.mode_count() != 2) throw std::invalid_argument("store_both needs two path modes");
  return apply(apply(paths, kPathA, chain_a), kPathB, chain_b);
}

PbsClicks detect_pbs(const MultiModeState& paths, double phi, const ClickDetector& d1,
                     const ClickDetector& d2) {
  if (paths.mode_count() != 2) throw std::invalid_argument("detect_pbs needs two path modes");
  d1.validate();
  d2.validate();
  const MultiModeState shifted = apply_phase(paths, kPathA, phi);
  const MultiModeState mixed = apply_beamsplitter(shifted, kPathA, kPathB, 0.5, kRecombinerPhase);
  const std::array<int, 2> modes{kPathA, kPathB};
  const std::array<ClickDetector, 2> dets{d1, d2};
  const auto p = click_pattern_probabilities(mixed, std::span<const int>(modes),
                                             std::span<const ClickDetector>(dets));
  return PbsClicks{p[1] + p[3], p[2] + p[3], p[3], p[0]};
}

PathProbabilities measure_pij(const MultiModeState& paths, const ClickDetector& det_a,
                              const ClickDetector& det_b) {
  if (paths.mode_count() != 2) throw std::invalid_argument("measure_pij needs two path modes");
  det_a.validate();
  det_b.validate();
  const std::array<int, 2> modes{kPathA, kPathB};
  const std::array<ClickDetector, 2> dets{det_a, det_b};
  const auto p = click_pattern_probabilities(paths, std::span<const int>(modes),
                                             std::span<const ClickDetector>(dets));
  // bit 0 = click in a
  return PathProbabilities{p[0], p[2], p[1], p[3]};
}

FringeData scan_fringes(const MultiModeState& paths, const std::vector<double>& phases,
                        const ClickDetector& d1, const ClickDetector& d2) {
  FringeData data;
  data.phases = phases;
  for (double phi : phases) {
    const PbsClicks c = detect_pbs(paths, phi, d1, d2);
    data.p_d1.push_back(c.p_d1);
    data.p_d2.push_back(c.p_d2);
    data.p_coinc.push_back(c.p_coinc);
  }
  return data;
}

std::vector<double> fringe_phases(int points) {
  if (points < 1) throw std::invalid_argument("need at least one phase point");
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) out[static_cast<std::size_t>(k)] = 2.0 * std::numbers::pi * k / points;
  return out;
}

VisibilityFit fit_visibility(const FringeData& data, FringeOutput output) {
  const std::vector<double>& y = output == FringeOutput::D1 ? data.p_d1 : data.p_d2;
  const std::size_t n = data.phases.size();
  if (y.size() != n) throw std::invalid_argument("fringe data length mismatch");
  if (n < 4) throw std::invalid_argument("underdetermined fit: fewer than four phase points");
  const auto [lo, hi] = std::minmax_element(data.phases.begin(), data.phases.end());
  if (!(*hi - *lo > std::numbers::pi)) {
    throw std::invalid_argument("underdetermined fit: phase span does not exceed pi");
  }

  const bool weighted = data.trials_per_point > 0;
  const double trials = static_cast<double>(data.trials_per_point);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd b(static_cast<Eigen::Index>(n));
  Eigen::VectorXd w = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    x(r, 0) = 1.0;
    x(r, 1) = std::sin(data.phases[i]);
    x(r, 2) = std::cos(data.phases[i]);
    b(r) = y[i];
    if (weighted) {
      // Binomial variance, floored at one count so empty points keep finite weight.
      const double var = std::max(y[i] * (1.0 - y[i]), 1.0 / trials) / trials;
      w(r) = 1.0 / var;
    }
  }
  const Eigen::MatrixXd normal = x.transpose() * w.asDiagonal() * x;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      std::abs(normal.determinant()) < 1e-12 * std::pow(normal.norm(), 3)) {
    throw std::runtime_error("singular fringe design matrix");
  }
  const Eigen::Vector3d c = ldlt.solve(x.transpose() * w.asDiagonal() * b);
  const Eigen::VectorXd resid = b - x * c;
  Eigen::Matrix3d cov = ldlt.solve(Eigen::Matrix3d::Identity());
  if (!weighted) cov *= resid.squaredNorm() / static_cast<double>(n - 3);

  if (!(c(0) > 0.0)) throw std::runtime_error("fit did not converge: non-positive mean level");
  const double amp = std::hypot(c(1), c(2));
  VisibilityFit fit;
  fit.mean_level = c(0);
  fit.phase_offset = std::atan2(c(2), c(1));
  fit.rms_residual = std::sqrt(resid.squaredNorm() / static_cast<double>(n));
  const double v = amp / c(0);
  Eigen::Vector3d grad;
  if (amp > 0.0) {
    grad << -v / c(0), c(1) / (c(0) * amp), c(2) / (c(0) * amp);
    fit.sigma_visibility = std::sqrt(std::max(0.0, grad.dot(cov * grad)));
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov.bottomRightCorner<2, 2>());
    fit.sigma_visibility = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff())) / c(0);
  }
  fit.visibility = std::min(v, 1.0);
  fit.clamped = v > 1.0;
  return fit;
}

}  // namespace qmemsim
