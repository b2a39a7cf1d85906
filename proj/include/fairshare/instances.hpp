// Copyright 2026 The fairshare Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairshare/model.hpp"

namespace fairshare {

/// A constructed lower-bound instance together with the deviation that
/// witnesses it and the ratio that deviation should achieve.
struct GeneratedInstance {
  std::string name;
  Scenario scenario;
  ReportProfile deviation;
  Rational predicted_ratio;
  /// Asymptotic value the family approaches, when there is one.
  std::optional<double> limit;
  std::string notes;
};

class InstanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Three users sharing 8 units of one resource over three epochs; user 1
/// gains 10/9 by hiding its demand in the first epoch.
GeneratedInstance gen_example_10_9();

/// Exact solution F_1..F_m of the four-phase recursion (F_0 = 0 omitted).
std::vector<Rational> sqrt2_levels(std::size_t m);

/// Closed-form floating-point F_i, i in [0, m], used as a cross-check.
double sqrt2_level_closed_form(std::size_t m, std::size_t i);

/// Alice, B_1..B_m and C_1..C_k over 3m + k epochs; Alice reports zero
/// through the second phase. The ratio tends to sqrt(2).
GeneratedInstance gen_sqrt2(std::size_t m, std::size_t k);

struct SlackCheck {
  std::string name;
  Rational lhs;
  Rational rhs;

  bool holds() const { return lhs <= rhs; }
};

/// The four capacity inequalities the two-resource construction relies on:
/// I1/I2 on resource 2 in epoch 1 (truthful, deviated), I3/I4 on resource 1
/// in epoch 2 (truthful, deviated).
std::vector<SlackCheck> multi_lower_slack(const Rational& eps, const Rational& delta, const Rational& w,
                                          std::size_t n1, std::size_t n2);

struct GroupSizes {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

/// Smallest group sizes for which every slack inequality holds.
GroupSizes min_group_sizes(const Rational& eps, const Rational& delta, const Rational& w);

/// Two resources, two epochs, 2 + n1 + n2 users. Throws InstanceError
/// naming the first violated slack inequality unless `check_slack` is off.
GeneratedInstance gen_multi_lower(const Rational& eps, const Rational& delta, const Rational& w, std::size_t n1,
                                  std::size_t n2, bool check_slack = true);

/// Resource count used by gen_zero_ratio_overreport for a given n.
std::size_t zero_ratio_resources(std::size_t n);

/// Alice has a zero ratio on resource 2 and over-reports in epoch 1 to
/// gain a factor linear in the resource count.
GeneratedInstance gen_zero_ratio_overreport(std::size_t n);

/// Two users, one resource whose ratios vary over two epochs.
GeneratedInstance gen_two_user_sketch(const Rational& eps, const Rational& delta);

struct RandomScenarioConfig {
  std::size_t min_users = 2;
  std::size_t max_users = 4;
  std::size_t min_resources = 1;
  std::size_t max_resources = 1;
  std::size_t min_epochs = 1;
  std::size_t max_epochs = 4;
  /// alpha is drawn from this list.
  std::vector<Rational> alphas{Rational(0)};
  /// Every drawn rational is a multiple of 1/denominator.
  long denominator = 4;
  Rational max_demand{2};
  Rational min_capacity{1};
  Rational max_capacity{2};
  /// Fraction (in percent) of slots with zero demand.
  unsigned zero_demand_percent = 20;
  bool positive_ratios = false;
  /// Lower bound on ratios when positive_ratios is set.
  Rational min_ratio{1, 4};
  /// Weights are 1 when max_weight is 1; otherwise drawn from [1, max_weight].
  Rational max_weight{1};
};

/// Deterministic in (config, seed).
Scenario random_scenario(const RandomScenarioConfig& config, std::uint64_t seed);

}  // namespace fairshare
