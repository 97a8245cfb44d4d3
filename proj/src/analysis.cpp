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

#include "qmemsim/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qmemsim {

namespace {

void check_nonnegative(const PathProbabilities& p) {
  if (p.p00 < 0.0 || p.p01 < 0.0 || p.p10 < 0.0 || p.p11 < 0.0) {
    throw std::invalid_argument("negative p_ij");
  }
}

double concurrence_of(const std::array<double, 4>& p, double v) {
  // p = {p00, p01, p10, p11}
  const double total = p[0] + p[1] + p[2] + p[3];
  if (total <= 0.0) return 0.0;
  return std::max(v * (p[1] + p[2]) - 2.0 * std::sqrt(p[0] * p[3]), 0.0) / total;
}

}  // namespace

bool ReducedDM::physical() const { return d <= std::sqrt(p01 * p10) * (1.0 + 1e-12); }

Eigen::Matrix4cd ReducedDM::matrix() const {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = p00;
  m(1, 1) = p01;
  m(2, 2) = p10;
  m(3, 3) = p11;
  m(1, 2) = d;
  m(2, 1) = d;
  return m / P();
}

ReducedDM reduced_density_matrix(const PathProbabilities& pij, double visibility) {
  check_nonnegative(pij);
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw std::invalid_argument("visibility outside [0,1]");
  }
  return ReducedDM{pij.p00, pij.p01, pij.p10, pij.p11, visibility * (pij.p01 + pij.p10) / 2.0};
}

double concurrence(const ReducedDM& dm) {
  const double total = dm.P();
  if (total <= 0.0) return 0.0;
  return std::max(2.0 * dm.d - 2.0 * std::sqrt(dm.p00 * dm.p11), 0.0) / total;
}

Ratio suppression_from_pij(const ReducedDM& dm) {
  return Ratio::of(dm.p11, dm.p10 * dm.p01, "w = p11 / (p10 p01)");
}

TransferMetrics transfer_metrics(const ReducedDM& dm_in, const ReducedDM& dm_out) {
  const double single_in = dm_in.p01 + dm_in.p10;
  if (single_in <= 0.0) throw std::invalid_argument("input has no one-photon probability");
  TransferMetrics m;
  m.eta = (dm_out.p01 + dm_out.p10) / single_in;
  const double c_in = concurrence(dm_in);
  m.lambda = c_in > 0.0 ? Ratio{concurrence(dm_out) / c_in, {}}
                        : Ratio::undefined("input concurrence is zero");
  return m;
}

PathProbabilities PijCounts::probabilities() const {
  if (n_heralds <= 0) throw std::invalid_argument("no heralds");
  const double n = static_cast<double>(n_heralds);
  return {n00 / n, n01 / n, n10 / n, n11 / n};
}

PijEstimate pij_with_errors(const PijCounts& c) {
  if (c.n_heralds <= 0) throw std::invalid_argument("no heralds");
  const double n = static_cast<double>(c.n_heralds);
  auto est = [n](long long k) {
    if (k < 0) throw std::invalid_argument("negative count");
    if (k == 0) return Estimate{0.0, 0.0, kZeroCountUpper / n};
    return Estimate::symmetric(k / n, std::sqrt(static_cast<double>(k)) / n);
  };
  return {est(c.n00), est(c.n01), est(c.n10), est(c.n11)};
}

EntanglementReport poisson_errors(const PijCounts& counts, const Estimate& visibility) {
  const PijEstimate e = pij_with_errors(counts);
  const double v = visibility.value;
  const std::array<double, 4> p{e.p00.value, e.p01.value, e.p10.value, e.p11.value};
  const std::array<long long, 4> n{counts.n00, counts.n01, counts.n10, counts.n11};
  const std::array<const Estimate*, 4> pe{&e.p00, &e.p01, &e.p10, &e.p11};

  EntanglementReport r;
  r.pij = e;
  r.visibility = visibility;
  const ReducedDM dm = reduced_density_matrix({p[0], p[1], p[2], p[3]}, v);
  r.physical = dm.physical();
  const double c0 = concurrence(dm);

  // Concurrence: gradient terms for non-zero counts, envelope terms for zero
  // counts (the sqrt(p11) slope is unbounded there).
  double var_minus = 0.0;
  double var_plus = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    if (n[k] == 0) {
      auto shifted = p;
      shifted[k] = *pe[k]->plus;
      const double delta = concurrence_of(shifted, v) - c0;
      (delta < 0.0 ? var_minus : var_plus) += delta * delta;
      continue;
    }
    const double total = p[0] + p[1] + p[2] + p[3];
    const double num = v * (p[1] + p[2]) - 2.0 * std::sqrt(p[0] * p[3]);
    double grad = -num / (total * total);
    if (k == 1 || k == 2) grad += v / total;
    if (k == 0) grad -= std::sqrt(p[3] / p[0]) / total;
    if (k == 3) grad -= std::sqrt(p[0] / p[3]) / total;
    const double s = *pe[k]->minus;
    var_minus += grad * grad * s * s;
    var_plus += grad * grad * s * s;
  }
  if (visibility.has_error()) {
    const double grad = (p[1] + p[2]) / (p[0] + p[1] + p[2] + p[3]);
    var_minus += grad * grad * *visibility.minus * *visibility.minus;
    var_plus += grad * grad * *visibility.plus * *visibility.plus;
  }
  r.concurrence = Estimate{c0, std::sqrt(var_minus), std::sqrt(var_plus)};
  if (c0 == 0.0) r.concurrence.minus = 0.0;

  const double dv = v * (p[1] + p[2]) / 2.0;
  double d_var = 0.25 * v * v * (std::pow(*e.p01.plus, 2) + std::pow(*e.p10.plus, 2));
  if (visibility.has_error()) d_var += 0.25 * std::pow((p[1] + p[2]) * visibility.sigma(), 2);
  r.d = Estimate::symmetric(dv, std::sqrt(d_var));

  const Ratio w = suppression_from_pij(dm);
  if (!w.defined()) {
    r.suppression_defined = false;
    r.suppression = Estimate::exact(0.0);
  } else if (counts.n11 == 0) {
    r.suppression = Estimate{0.0, 0.0, *e.p11.plus / (p[1] * p[2])};
  } else {
    const double rel = std::sqrt(std::pow(*e.p11.minus / p[3], 2) + std::pow(*e.p10.minus / p[2], 2) +
                                 std::pow(*e.p01.minus / p[1], 2));
    r.suppression = Estimate::symmetric(w.get(), w.get() * rel);
  }
  return r;
}

Estimate ratio_estimate(const Estimate& num, const Estimate& den, double cap) {
  if (den.value == 0.0) throw std::invalid_argument("ratio with zero denominator");
  const double value = num.value / den.value;
  if (!num.has_error() || !den.has_error() || num.value == 0.0) {
    if (num.value == 0.0 && num.has_error() && den.has_error()) {
      return Estimate{0.0, 0.0, std::min(*num.plus / den.value, std::max(0.0, cap))};
    }
    return Estimate::exact(value);
  }
  const double rel = std::hypot(num.sigma() / num.value, den.sigma() / den.value);
  const double sigma = std::abs(value) * rel;
  return Estimate{value, sigma, std::min(sigma, std::max(0.0, cap - value))};
}

PairedReport paired_report(const PijCounts& in, const Estimate& v_in, const PijCounts& out,
                           const Estimate& v_out) {
  PairedReport r;
  r.in = poisson_errors(in, v_in);
  r.out = poisson_errors(out, v_out);
  const double n_in = static_cast<double>(in.n_heralds);
  const double n_out = static_cast<double>(out.n_heralds);
  const auto single_in = static_cast<double>(in.n01 + in.n10);
  const auto single_out = static_cast<double>(out.n01 + out.n10);
  if (single_in == 0.0) throw std::invalid_argument("input column has no one-photon counts");
  const Estimate s_in = Estimate::symmetric(single_in / n_in, std::sqrt(single_in) / n_in);
  const Estimate s_out = Estimate::symmetric(single_out / n_out, std::sqrt(single_out) / n_out);
  r.eta = ratio_estimate(s_out, s_in, std::numeric_limits<double>::infinity());
  r.in.eta = r.eta;
  r.out.eta = r.eta;
  if (r.in.concurrence.value > 0.0) {
    r.lambda = ratio_estimate(r.out.concurrence, r.in.concurrence, 1.0);
    r.in.lambda = r.lambda;
    r.out.lambda = r.lambda;
  }
  return r;
}

CorrectedVisibility background_correct_visibility(double v_raw, double signal_rate,
                                                  double background_rate) {
  if (signal_rate < 0.0 || background_rate < 0.0) throw std::invalid_argument("negative rate");
  if (signal_rate == 0.0) throw std::invalid_argument("signal rate is zero");
  const double v = v_raw * (signal_rate + background_rate) / signal_rate;
  CorrectedVisibility out{std::clamp(v, 0.0, 1.0), false};
  out.clamped = out.visibility != v;
  return out;
}

double background_ratio_for(double v_raw, double v_true) {
  if (!(v_raw > 0.0) || !(v_true >= v_raw)) {
    throw std::invalid_argument("need 0 < v_raw <= v_true");
  }
  return v_true / v_raw - 1.0;
}

}  // namespace qmemsim
