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

#include "fairshare/allocator.hpp"

#include <algorithm>

namespace fairshare {

Rational EpochInput::guarantee_of(std::size_t user) const {
  Rational wsum = 0;
  for (const auto& w : weights) wsum += w;
  return guarantee(types[user].demand, capacity, alpha, weights[user], wsum);
}

EpochInput make_epoch_input(const Scenario& s, const ReportProfile& p, std::size_t epoch,
                            std::vector<Rational> cumulative) {
  EpochInput in;
  in.cumulative = std::move(cumulative);
  in.types.reserve(s.n);
  for (std::size_t i = 0; i < s.n; ++i) in.types.push_back(p.reported(s, i, epoch));
  in.weights = s.weights;
  in.alpha = s.alpha;
  in.capacity = s.capacities[epoch];
  return in;
}

std::string to_string(const FreezeReason& reason) {
  switch (reason.kind) {
    case FreezeReason::Kind::DemandCap:
      return "DemandCap";
    case FreezeReason::Kind::Floor:
      return "Floor(" + std::to_string(reason.resource) + ")";
    case FreezeReason::Kind::SaturatedResource:
      return "SaturatedResource(" + std::to_string(reason.resource) + ")";
    case FreezeReason::Kind::Unconstrained:
      return "Unconstrained";
  }
  return "?";
}

bool EpochAllocation::is_saturated(std::size_t q) const {
  return std::binary_search(saturated.begin(), saturated.end(), q);
}

Rational clamp_allocation(const Rational& level, std::size_t user, const EpochInput& input) {
  const Rational g = input.guarantee_of(user);
  Rational x = input.weights[user] * level - input.cumulative[user];
  x = input.types[user].demand.cap(x);
  return x < g ? g : x;
}

namespace {

struct UserState {
  Rational floor;
  Rational start;  // level where the user leaves her floor
  Rational end;    // level where she reaches her demand (valid when capped)
  bool capped = false;
  bool active = true;
  Rational value;
};

}  // namespace

EpochAllocation allocate_epoch(const EpochInput& input,
                               const std::function<void(const FillState&)>& observer) {
  const std::size_t n = input.users();
  const std::size_t m = input.resources();
  const Rational& cap = input.capacity;

  Rational wsum = 0;
  for (const auto& w : input.weights) wsum += w;

  EpochAllocation out;
  out.frozen_reason.assign(n, FreezeReason{});
  std::vector<UserState> users(n);
  std::vector<bool> saturated(m, false);

  for (std::size_t i = 0; i < n; ++i) {
    auto& u = users[i];
    const auto& type = input.types[i];
    u.floor = guarantee(type.demand, cap, input.alpha, input.weights[i], wsum);
    u.start = (input.cumulative[i] + u.floor) / input.weights[i];
    u.capped = !type.demand.is_unbounded();
    if (u.capped) {
      u.end = (input.cumulative[i] + type.demand.value()) / input.weights[i];
      if (type.demand.value() == u.floor) {
        u.active = false;
        u.value = u.floor;
        out.frozen_reason[i] = {FreezeReason::Kind::DemandCap, 0};
      }
    }
  }

  // Floors must fit on their own.
  for (std::size_t q = 0; q < m; ++q) {
    Rational base = 0;
    for (std::size_t i = 0; i < n; ++i) base += users[i].floor * input.types[i].ratios[q];
    if (base > cap) {
      throw InfeasibleFloors("guaranteed floors exceed capacity of resource " + std::to_string(q));
    }
  }

  auto any_active = [&] {
    return std::any_of(users.begin(), users.end(), [](const UserState& u) { return u.active; });
  };

  Rational level;
  bool have_level = false;
  for (const auto& u : users) {
    if (u.active && (!have_level || u.start < level)) {
      level = u.start;
      have_level = true;
    }
  }

  auto value_at = [&](std::size_t i, const Rational& lvl) -> Rational {
    const auto& u = users[i];
    if (!u.active) return u.value;
    if (lvl <= u.start) return u.floor;
    Rational x = input.weights[i] * lvl - input.cumulative[i];
    if (u.capped && lvl >= u.end) return input.types[i].demand.value();
    return x;
  };

  // Freezes users hitting their cap or touching a freshly saturated resource.
  auto settle = [&](const Rational& lvl) {
    for (std::size_t i = 0; i < n; ++i) {
      auto& u = users[i];
      if (u.active && u.capped && u.end <= lvl) {
        u.value = input.types[i].demand.value();
        u.active = false;
        out.frozen_reason[i] = {FreezeReason::Kind::DemandCap, 0};
      }
    }
    std::vector<Rational> usage(m, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      const Rational v = value_at(i, lvl);
      if (sgn(v) == 0) continue;
      for (std::size_t q = 0; q < m; ++q) {
        if (sgn(input.types[i].ratios[q]) != 0) usage[q] += v * input.types[i].ratios[q];
      }
    }
    for (std::size_t q = 0; q < m; ++q) {
      if (!saturated[q] && usage[q] >= cap) saturated[q] = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto& u = users[i];
      if (!u.active) continue;
      for (std::size_t q = 0; q < m; ++q) {
        if (saturated[q] && sgn(input.types[i].ratios[q]) > 0) {
          u.value = value_at(i, lvl);
          u.active = false;
          const bool below_level = lvl < u.start;
          out.frozen_reason[i] = {below_level ? FreezeReason::Kind::Floor : FreezeReason::Kind::SaturatedResource, q};
          break;
        }
      }
    }
    if (observer) {
      FillState state;
      state.level = lvl;
      for (std::size_t i = 0; i < n; ++i) {
        if (users[i].active) state.active.push_back(i);
      }
      state.remaining.resize(m);
      for (std::size_t q = 0; q < m; ++q) state.remaining[q] = cap - usage[q];
      observer(state);
    }
  };

  if (have_level) settle(level);

  std::vector<Rational> constant(m), slope(m);
  while (any_active()) {
    std::fill(constant.begin(), constant.end(), Rational(0));
    std::fill(slope.begin(), slope.end(), Rational(0));
    std::optional<Rational> next;
    auto consider = [&](const Rational& candidate) {
      if (!next || candidate < *next) next = candidate;
    };

    for (std::size_t i = 0; i < n; ++i) {
      const auto& u = users[i];
      const auto& ratios = input.types[i].ratios;
      if (!u.active) {
        if (sgn(u.value) == 0) continue;
        for (std::size_t q = 0; q < m; ++q) {
          if (sgn(ratios[q]) != 0) constant[q] += u.value * ratios[q];
        }
        continue;
      }
      if (level < u.start) {
        consider(u.start);
        for (std::size_t q = 0; q < m; ++q) {
          if (sgn(ratios[q]) != 0) constant[q] += u.floor * ratios[q];
        }
        continue;
      }
      if (u.capped) consider(u.end);
      for (std::size_t q = 0; q < m; ++q) {
        if (sgn(ratios[q]) == 0) continue;
        slope[q] += ratios[q] * input.weights[i];
        constant[q] -= ratios[q] * input.cumulative[i];
      }
    }
    for (std::size_t q = 0; q < m; ++q) {
      if (saturated[q] || sgn(slope[q]) == 0) continue;
      consider((cap - constant[q]) / slope[q]);
    }

    if (!next) {
      // No active user can grow; nothing binds them.
      for (std::size_t i = 0; i < n; ++i) {
        if (!users[i].active) continue;
        users[i].value = value_at(i, level);
        users[i].active = false;
        out.frozen_reason[i] = {FreezeReason::Kind::Unconstrained, 0};
      }
      break;
    }
    level = *next;
    settle(level);
  }

  std::vector<Rational> allocations(n);
  for (std::size_t i = 0; i < n; ++i) allocations[i] = users[i].value;
  auto reasons = std::move(out.frozen_reason);
  out = describe_allocation(input, std::move(allocations));
  out.frozen_reason = std::move(reasons);
  return out;
}

EpochAllocation describe_allocation(const EpochInput& input, std::vector<Rational> allocations) {
  const std::size_t n = input.users();
  const std::size_t m = input.resources();
  EpochAllocation out;
  out.allocations = std::move(allocations);
  out.usage.assign(m, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t q = 0; q < m; ++q) out.usage[q] += out.allocations[i] * input.types[i].ratios[q];
  }
  for (std::size_t q = 0; q < m; ++q) {
    if (out.usage[q] == input.capacity) out.saturated.push_back(q);
  }
  out.frozen_reason.assign(n, FreezeReason{});
  return out;
}

std::vector<OptimalityViolation> check_bottleneck_optimality(const EpochInput& input,
                                                             const EpochAllocation& alloc) {
  const std::size_t n = input.users();
  const std::size_t m = input.resources();
  std::vector<OptimalityViolation> out;

  std::vector<Rational> floors(n), level(n);
  for (std::size_t i = 0; i < n; ++i) {
    floors[i] = input.guarantee_of(i);
    level[i] = (input.cumulative[i] + alloc.allocations[i]) / input.weights[i];
    const auto& r = alloc.allocations[i];
    if (r < floors[i]) out.push_back({i, "allocation below guarantee"});
    if (!input.types[i].demand.is_unbounded() && r > input.types[i].demand.value()) {
      out.push_back({i, "allocation above demand"});
    }
  }
  std::vector<Rational> usage(m, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t q = 0; q < m; ++q) usage[q] += alloc.allocations[i] * input.types[i].ratios[q];
  }
  for (std::size_t q = 0; q < m; ++q) {
    if (usage[q] > input.capacity) out.push_back({n, "resource " + std::to_string(q) + " over capacity"});
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto& type = input.types[i];
    if (!type.demand.is_unbounded() && alloc.allocations[i] == type.demand.value()) continue;
    bool blocked = false;
    for (std::size_t q = 0; q < m && !blocked; ++q) {
      if (sgn(type.ratios[q]) <= 0 || usage[q] != input.capacity) continue;
      bool dominated = true;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || sgn(input.types[j].ratios[q]) <= 0) continue;
        if (alloc.allocations[j] > floors[j] && level[j] > level[i]) {
          dominated = false;
          break;
        }
      }
      blocked = dominated;
    }
    if (!blocked) {
      out.push_back({i, "user " + std::to_string(i) +
                            " is unsatisfied but not blocked by a saturated resource"});
    }
  }
  return out;
}

}  // namespace fairshare
