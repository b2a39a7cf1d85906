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
#include <string>
#include <utility>
#include <vector>

#include "fairshare/allocator.hpp"
#include "fairshare/engine.hpp"
#include "fairshare/model.hpp"
#include "fairshare/strategy.hpp"

namespace fairshare {

struct Counterexample {
  std::string description;
  std::optional<std::size_t> epoch;
  std::optional<std::size_t> user;
  std::optional<std::size_t> other;
  std::vector<std::pair<std::string, Rational>> values;
  std::optional<Scenario> scenario;
};

struct PropertyReport {
  std::string name;
  bool passed = true;
  /// False when the property's hypotheses do not hold for the input.
  bool applicable = true;
  std::size_t checked = 0;
  /// Samples whose hypothesis pattern never triggered.
  std::size_t vacuous = 0;
  /// Smallest margin over every checked inequality.
  std::optional<Rational> min_slack;
  std::optional<Counterexample> counterexample;
  /// Free-form context, e.g. which bound was applied.
  std::string detail;

  /// Records one inequality with the given margin; a margin below
  /// -tolerance fails the report and keeps the first counterexample.
  template <typename Make>
  void witness(const Rational& slack, const Rational& tolerance, Make&& make_counterexample) {
    ++checked;
    if (!min_slack || slack < *min_slack) min_slack = slack;
    if (slack < -tolerance && passed) {
      passed = false;
      counterexample = make_counterexample();
    }
  }

  /// Folds another report's counts and verdict into this one.
  void merge(const PropertyReport& other);
};

class RhoUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// max over k != i, resources q and epochs t with a_iq > 0 of
/// w_i a_iq / (w_k a_kq). Throws RhoUndefined when some a_kq is zero there.
Rational rho(const Scenario& s, std::size_t user);

/// U_i^t >= sum over tau <= t of min(d_i, (w_i/w_j) r_j min_q a_jq/a_iq)
/// for every ordered pair and epoch.
PropertyReport check_envy_freeness(const Trace& trace, const Scenario& s, const Rational& tolerance = 0);

/// U_i^t >= alpha * sum over tau <= t of min(d_i, C w_i / (sum w * max_q a_iq)).
PropertyReport check_sharing_incentives(const Trace& trace, const Scenario& s, const Rational& tolerance = 0);

/// Every user either receives its reported demand or uses a saturated resource.
PropertyReport check_pareto(const EpochInput& input, const EpochAllocation& alloc, const Rational& tolerance = 0);
PropertyReport check_pareto(const Trace& trace, const Scenario& s, const Rational& tolerance = 0);

/// Compares the best over-report deviation with the best under-report one
/// on the same grid. The over-report side runs with `over_config` when
/// given, otherwise with overreport_config(config).
PropertyReport check_no_overreport(const Scenario& s, const std::set<std::size_t>& coalition,
                                   const SearchConfig& config,
                                   const std::optional<SearchConfig>& over_config = std::nullopt);

/// Paired single-epoch comparison. For users i, j with r_i growing and r_j
/// shrinking from `bar` to `hat` (and demands moving the other way), checks
/// R-bar_i/w_i >= R-bar_j/w_j and R-hat_i/w_i <= R-hat_j/w_j.
PropertyReport check_more_less(const EpochInput& bar, const EpochInput& hat);

/// Random paired inputs for check_more_less: shared weights, capacity, alpha
/// and ratios; independent cumulative states and demands.
std::pair<EpochInput, EpochInput> more_less_sample(std::size_t users, std::size_t resources, std::uint64_t seed);

/// The bound that applies to the outcome's shape, if any.
struct UpperBound {
  Rational value;
  std::string description;
};
std::optional<UpperBound> applicable_upper_bound(const Scenario& s, const std::set<std::size_t>& coalition);

/// gamma* <= the applicable bound; not applicable when none applies.
PropertyReport check_upper_bounds(const DeviationOutcome& outcome, const Scenario& s);

}  // namespace fairshare
