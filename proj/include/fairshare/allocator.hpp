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
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairshare/model.hpp"

namespace fairshare {

/// One epoch of the allocation problem as the mechanism sees it: reported
/// types and the cumulative allocations before the epoch.
struct EpochInput {
  std::vector<Rational> cumulative;  // R_i^{t-1}
  std::vector<UserEpochType> types;  // reported
  std::vector<Rational> weights;
  Rational alpha{0};
  Rational capacity{0};

  std::size_t users() const { return types.size(); }
  std::size_t resources() const { return types.empty() ? 0 : types.front().ratios.size(); }
  Rational guarantee_of(std::size_t user) const;
};

/// Builds the input for epoch t from reports and cumulative state.
EpochInput make_epoch_input(const Scenario& s, const ReportProfile& p, std::size_t epoch,
                            std::vector<Rational> cumulative);

struct FreezeReason {
  enum class Kind { DemandCap, Floor, SaturatedResource, Unconstrained };
  Kind kind = Kind::Unconstrained;
  std::size_t resource = 0;  // meaningful for SaturatedResource and Floor

  friend bool operator==(const FreezeReason&, const FreezeReason&) = default;
};

std::string to_string(const FreezeReason& reason);

struct EpochAllocation {
  std::vector<Rational> allocations;  // r_i^t on the dominant-resource scale
  std::vector<Rational> usage;        // sum_i r_i a_iq
  std::vector<std::size_t> saturated; // ascending resource indices with usage == capacity
  std::vector<FreezeReason> frozen_reason;

  bool is_saturated(std::size_t q) const;
};

/// Snapshot of the progressive fill, reported after every event.
struct FillState {
  Rational level;
  std::vector<std::size_t> active;
  std::vector<Rational> remaining;
};

class InfeasibleFloors : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// max(g_i, min(d_i, w_i * level - R_i)).
Rational clamp_allocation(const Rational& level, std::size_t user, const EpochInput& input);

/// Lexicographic max-min fair allocation of (R_i + r_i) / w_i subject to the
/// floor/cap band and per-resource capacity, by progressive filling.
/// `observer`, when given, sees the fill state after each event.
EpochAllocation allocate_epoch(const EpochInput& input,
                               const std::function<void(const FillState&)>& observer = {});

struct OptimalityViolation {
  std::size_t user = 0;
  std::string message;
};

/// Certifies max-min optimality: every unsatisfied user must sit on a
/// saturated resource where no other flexible user is strictly higher.
std::vector<OptimalityViolation> check_bottleneck_optimality(const EpochInput& input,
                                                             const EpochAllocation& alloc);

/// Recomputes usage and the saturated set for a given allocation vector.
EpochAllocation describe_allocation(const EpochInput& input, std::vector<Rational> allocations);

}  // namespace fairshare
