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
#include <vector>

#include "fairshare/allocator.hpp"
#include "fairshare/model.hpp"

namespace fairshare {

/// Per-epoch record of one replay. Vectors are indexed [epoch][user].
struct Trace {
  std::vector<std::vector<Rational>> allocation;     // r_i^t
  std::vector<std::vector<Rational>> cumulative;     // R_i^t
  std::vector<std::vector<Rational>> ratio_penalty;  // lambda-hat_i^t
  std::vector<std::vector<Rational>> utility;        // u_i^t (true)
  std::vector<std::vector<Rational>> cumulative_utility;  // U_i^t
  std::vector<EpochAllocation> epochs;
  ReportProfile profile;
  /// Epochs where the reported ratio vector made the utility degenerate (0).
  std::size_t degenerate_reports = 0;
  /// Bottleneck-certification failures, counted when RunOptions::certify is set.
  std::size_t certification_failures = 0;
  std::size_t certified_epochs = 0;

  std::size_t epochs_count() const { return allocation.size(); }
  std::size_t users() const { return allocation.empty() ? 0 : allocation.front().size(); }
  /// R_i^t with the convention R_i^{-1} = 0 (epoch index is 0-based).
  const Rational& total(std::size_t epoch, std::size_t user) const { return cumulative[epoch][user]; }
};

struct RatioPenalty {
  Rational value;
  bool degenerate = false;  // value is 0: the report starves a truly used resource
};

/// min over the true positive support of reported / true ratio.
RatioPenalty ratio_penalty(const std::vector<Rational>& true_ratios,
                           const std::vector<Rational>& reported_ratios);

struct RunOptions {
  /// Run check_bottleneck_optimality on every solved epoch.
  bool certify = false;
  /// Truthful trace of the same scenario; epochs before the profile's first
  /// override are copied from it instead of re-solved.
  const Trace* truthful_prefix = nullptr;
};

/// Replays every epoch of the scenario under the given reports. The
/// mechanism sees reports only; utilities use true demands and ratios.
Trace run(const Scenario& s, const ReportProfile& profile = {}, const RunOptions& options = {});

}  // namespace fairshare
