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

#include "qmemsim/source.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qmemsim {

namespace {

constexpr double kChiMax = 0.5;

void check_unit(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " outside [0,1]");
}

}  // namespace

void SourceParams::validate() const {
  if (!(chi >= 0.0 && chi <= kChiMax)) throw std::invalid_argument("chi outside [0, 0.5]");
  herald_detector.validate();
  check_unit(field1_transmission, "field1_transmission");
  check_unit(heralding_efficiency, "heralding_efficiency");
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
}

MultiModeState tmsv_state(double chi, int n_max) {
  if (!(chi >= 0.0 && chi < 1.0)) throw std::invalid_argument("chi outside [0, 1)");
  MultiModeState vac(2, n_max);
  MultiModeState::Vector ket = MultiModeState::Vector::Zero(vac.dim());
  for (int n = 0; n <= n_max; ++n) ket(vac.index_of({n, n})) = std::pow(chi, n);
  return MultiModeState::pure(2, n_max, ket);
}

double tmsv_truncation_deficit(double chi, int n_max) { return std::pow(chi, 2 * (n_max + 1)); }

HeraldedPhoton herald_field2(const SourceParams& params) {
  params.validate();
  auto pair = apply_loss(tmsv_state(params.chi, params.n_max), 0, params.field1_transmission);
  const auto herald = click_probabilities(pair, 0, params.herald_detector);

  HeraldedPhoton out;
  out.p1 = herald.p_click;
  out.state = herald.post_click ? partial_trace(*herald.post_click, 0)
                                : MultiModeState(1, params.n_max);
  out.state = apply_loss(out.state, 0, params.heralding_efficiency);
  out.w_source = hbt_suppression(out.state, BeamSplitter{1, 0.5, 0.0}, ClickDetector{},
                                 ClickDetector{});
  if (!herald.post_click) out.w_source = Ratio::undefined("herald probability is zero");
  return out;
}

Ratio hbt_suppression(const MultiModeState& single_mode, const BeamSplitter& splitter,
                      const ClickDetector& det2, const ClickDetector& det3) {
  if (single_mode.mode_count() != 1) throw std::invalid_argument("HBT input must be one mode");
  if (splitter.partner != 1) throw std::invalid_argument("HBT splitter partner must be mode 1");
  const auto split =
      apply(tensor(single_mode, MultiModeState(1, single_mode.n_max())), 0, Channel{splitter});
  const int modes[] = {0, 1};
  const ClickDetector dets[] = {det2, det3};
  const auto p = click_pattern_probabilities(split, std::span<const int>(modes),
                                             std::span<const ClickDetector>(dets));
  const double p2 = p[1] + p[3];
  const double p3 = p[2] + p[3];
  if (p2 == 0.0 || p3 == 0.0) {
    return Ratio::undefined("no single-detector clicks (p12 or p13 is zero)");
  }
  return Ratio{p[3] / (p2 * p3), {}};
}

Ratio hbt_suppression(const HeraldedPhoton& photon, const BeamSplitter& splitter,
                      const ClickDetector& det2, const ClickDetector& det3) {
  return hbt_suppression(photon.state, splitter, det2, det3);
}

double calibrate_chi(double p1_target, const SourceParams& params) {
  check_unit(p1_target, "p1_target");
  auto p1_at = [&](double chi) {
    SourceParams p = params;
    p.chi = chi;
    return herald_field2(p).p1;
  };
  double lo = 0.0;
  double hi = kChiMax;
  const double floor = p1_at(lo);
  if (p1_target == floor) return 0.0;
  if (p1_target < floor) throw std::domain_error("p1 target below the dark-count floor");
  if (p1_at(hi) < p1_target) throw std::domain_error("p1 target unreachable for chi <= 0.5");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (p1_at(mid) < p1_target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double calibrate_field1_transmission(double w_target, double p1_target, SourceParams params) {
  // The source suppression falls as the herald path gets more efficient.
  // A herald path too lossy to reach p1_target counts as infinite suppression.
  auto w_at = [&](double t1) {
    params.field1_transmission = t1;
    try {
      params.chi = calibrate_chi(p1_target, params);
    } catch (const std::domain_error&) {
      return std::numeric_limits<double>::infinity();
    }
    return herald_field2(params).w_source.get();
  };
  double lo = 1e-4;
  double hi = 1.0;
  if (w_at(hi) > w_target || w_at(lo) < w_target) {
    throw std::domain_error("suppression target unreachable at this p1");
  }
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (w_at(mid) > w_target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qmemsim
