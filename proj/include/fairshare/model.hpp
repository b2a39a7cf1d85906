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
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fairshare/rational.hpp"

namespace fairshare {

/// A user's demand in one epoch: a nonnegative rational or Unbounded.
/// Unbounded compares greater than every finite value.
class Demand {
 public:
  Demand() = default;
  Demand(Rational value);  // NOLINT: implicit by design of the value type
  Demand(long value) : Demand(Rational(value)) {}  // NOLINT

  static Demand unbounded();

  bool is_unbounded() const { return unbounded_; }
  /// Finite value; throws std::logic_error when unbounded.
  const Rational& value() const;

  /// min(*this, x) as a finite rational.
  Rational cap(const Rational& x) const { return unbounded_ || x < value_ ? x : value_; }

  friend bool operator==(const Demand& a, const Demand& b);
  friend bool operator<(const Demand& a, const Demand& b);
  friend bool operator<=(const Demand& a, const Demand& b) { return !(b < a); }

 private:
  Rational value_{0};
  bool unbounded_ = false;
};

/// Leontief type of one user in one epoch: per-resource ratios and a demand
/// expressed on the dominant-resource scale.
struct UserEpochType {
  std::vector<Rational> ratios;
  Demand demand;

  friend bool operator==(const UserEpochType&, const UserEpochType&) = default;
};

/// Absent users: zero demand, all-one ratios.
UserEpochType absent_type(std::size_t resources);

/// The full game. Capacity is one scalar per epoch that applies to every
/// resource; per-resource capacities go through normalize_capacities.
struct Scenario {
  std::size_t n = 0;  // users
  std::size_t m = 0;  // resources
  std::size_t T = 0;  // epochs
  std::vector<Rational> weights;
  Rational alpha{0};
  std::vector<Rational> capacities;
  /// truth[i][t]
  std::vector<std::vector<UserEpochType>> truth;
  bool positive_ratios = false;
  /// Allows max ratio < 1. Only the single-resource time-varying-ratio
  /// sketch uses this; everything else is normalized.
  bool relaxed_normalization = false;

  const UserEpochType& type(std::size_t user, std::size_t epoch) const { return truth[user][epoch]; }
  Rational weight_sum() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Reported types of a deviating coalition. Users outside the coalition
/// report truthfully.
struct ReportProfile {
  std::set<std::size_t> coalition;
  std::map<std::pair<std::size_t, std::size_t>, UserEpochType> overrides;

  bool truthful() const { return overrides.empty(); }
  /// The type user i reports in epoch t under this profile.
  const UserEpochType& reported(const Scenario& s, std::size_t user, std::size_t epoch) const;
  /// First epoch carrying an override, or s.T when there is none.
  std::size_t first_override_epoch(std::size_t T) const;

  friend bool operator==(const ReportProfile&, const ReportProfile&) = default;
};

struct ValidationIssue {
  std::string field;
  std::string message;
};

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

/// Every violated invariant, in field order. Empty means valid.
std::vector<ValidationIssue> scenario_issues(const Scenario& s);
std::vector<ValidationIssue> profile_issues(const Scenario& s, const ReportProfile& p);

/// Returns the scenario unchanged when valid, otherwise throws ScenarioError.
Scenario validate_scenario(Scenario raw);
void validate_profile(const Scenario& s, const ReportProfile& p);

/// True when every ratio of every user in every epoch is strictly positive.
bool all_ratios_positive(const Scenario& s);

/// Rewrites a scenario whose resources have unequal capacities
/// (per_resource[t][q]) into the equal-capacity form. The common capacity of
/// epoch t is min_q C_q; resource q is rescaled by that over C_q, ratios are
/// renormalized to max 1 and demands adjusted so every demanded bundle is
/// unchanged in original units. Truth ratios of `s` are read in original units.
Scenario normalize_capacities(const std::vector<std::vector<Rational>>& per_resource, Scenario s);

/// min(d, alpha * capacity * w_i / sum_k w_k); the Unbounded demand yields the
/// fair-share term.
Rational guarantee(const Demand& demand, const Rational& capacity, const Rational& alpha,
                   const Rational& weight, const Rational& weight_sum);
Rational guarantee(std::size_t user, std::size_t epoch, const Scenario& s);

}  // namespace fairshare
