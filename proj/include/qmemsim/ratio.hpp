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

#ifndef QMEMSIM_RATIO_HPP
#define QMEMSIM_RATIO_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace qmemsim {

/// A quotient that is undefined when its denominator vanishes. Carries the
/// reason instead of a NaN.
struct Ratio {
  std::optional<double> value;
  std::string reason;

  static Ratio of(double numerator, double denominator, std::string what) {
    if (denominator == 0.0) return Ratio{std::nullopt, std::move(what) + ": zero denominator"};
    return Ratio{numerator / denominator, {}};
  }
  static Ratio undefined(std::string why) { return Ratio{std::nullopt, std::move(why)}; }

  bool defined() const { return value.has_value(); }
  double get() const {
    if (!value) throw std::domain_error("undefined ratio: " + reason);
    return *value;
  }
};

}  // namespace qmemsim

#endif  // QMEMSIM_RATIO_HPP
