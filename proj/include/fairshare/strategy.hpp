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
#include <set>
#include <stdexcept>
#include <vector>

#include "fairshare/engine.hpp"
#include "fairshare/model.hpp"

namespace fairshare {

/// Coalition utility ratio in one epoch. Undefined when both the truthful
/// and deviated coalition utilities are zero; infinite when only the
/// truthful one is.
struct RatioEntry {
  enum class Kind { Undefined, Finite, Infinite };
  Kind kind = Kind::Undefined;
  Rational value;

  bool defined() const { return kind != Kind::Undefined; }
};

struct DeviationOutcome {
  std::set<std::size_t> coalition;
  std::vector<RatioEntry> gamma;  // per epoch
  /// Max over epochs with a defined ratio; Undefined when no epoch has one.
  RatioEntry max_ratio;
  std::size_t argmax_epoch = 0;
  Trace truthful;
  Trace deviated;

  const ReportProfile& profile() const { return deviated.profile; }
};

/// Runs the truthful and deviated replays and computes the coalition's
/// utility-ratio series.
DeviationOutcome incentive_ratio(const Scenario& s, const ReportProfile& profile);
DeviationOutcome incentive_ratio(const Scenario& s, const ReportProfile& profile, const Trace& truthful,
                                 const RunOptions& options = {});

/// Per-epoch ratio series from a pair of traces.
std::vector<RatioEntry> ratio_series(const Trace& truthful, const Trace& deviated,
                                     const std::set<std::size_t>& coalition);

/// Total order used to rank outcomes: Undefined < Finite (by value) < Infinite.
bool ratio_less(const RatioEntry& a, const RatioEntry& b);

struct SearchConfig {
  /// Demand multipliers applied to each slot's true demand.
  std::vector<Rational> demand_grid{Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)};
  /// Adds the Unbounded report to every slot.
  bool include_unbounded = false;
  /// Adds reported-ratio variants for m > 1.
  bool ratio_perturbations = false;
  /// Epochs (0-based) where deviation is allowed; empty means all.
  std::vector<std::size_t> epochs;
  std::size_t random_restarts = 8;
  std::size_t local_search_rounds = 4;
  std::uint64_t seed = 0;
  std::uint64_t exhaustive_budget = 1'000'000;
  bool require_exhaustive = false;
  bool certify = false;
};

/// The extended grid used for over-report searches: the base grid plus the
/// multiplier 2, Unbounded, and ratio perturbations.
SearchConfig overreport_config(SearchConfig base);

class SearchBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SearchResult {
  /// Empty when the search space held no admissible profile.
  std::optional<DeviationOutcome> best;
  bool exhaustive = false;
  std::uint64_t space_size = 0;  // saturates at UINT64_MAX
  std::uint64_t evaluated = 0;
  std::uint64_t certified_epochs = 0;
  std::uint64_t certification_failures = 0;

  RatioEntry best_ratio() const { return best ? best->max_ratio : RatioEntry{}; }
};

/// Best under-report-only deviation of the coalition on the demand grid.
SearchResult search_best_deviation(const Scenario& s, const std::set<std::size_t>& coalition,
                                   const SearchConfig& config);

/// Best deviation among profiles containing at least one over-report or
/// misreported ratio vector.
SearchResult search_overreport(const Scenario& s, const std::set<std::size_t>& coalition,
                               const SearchConfig& config);

struct DeviationInterval {
  std::size_t start = 0;              // s_l, 0-based epoch
  std::optional<std::size_t> end;     // e_l; empty when the lead never closes
  std::size_t best_epoch = 0;         // t_l in [s_l, e_l)
  RatioEntry best_ratio;              // R-hat / R at t_l
};

struct IntervalAnalysis {
  std::vector<DeviationInterval> intervals;
  std::vector<Rational> f;  // min((r - r-hat)^+, (R - R-hat)^+) per epoch
};

/// Splits the epochs into stretches where the user is ahead by deviating.
IntervalAnalysis interval_analysis(const Trace& truthful, const Trace& deviated, std::size_t user);

}  // namespace fairshare
