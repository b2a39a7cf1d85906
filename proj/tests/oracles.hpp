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

// Test-side reference implementations. None of these share code with the
// library solvers beyond the value types.

#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "fairshare/allocator.hpp"
#include "fairshare/model.hpp"

namespace fairshare::oracle {

inline Rational floor_of(const EpochInput& in, std::size_t i) {
  Rational wsum = 0;
  for (const auto& w : in.weights) wsum += w;
  Rational share = in.alpha * in.capacity * in.weights[i] / wsum;
  const auto& d = in.types[i].demand;
  return d.is_unbounded() || share < d.value() ? share : d.value();
}

/// Single-resource water-filling: find the level where the clamped
/// allocations sum to the capacity by scanning sorted breakpoints.
inline std::vector<Rational> water_fill(const EpochInput& in) {
  const std::size_t n = in.users();
  std::vector<Rational> lo(n), hi_level(n), lo_level(n);
  std::vector<bool> capped(n);
  Rational total_demand = 0;
  bool unbounded = false;
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = floor_of(in, i);
    lo_level[i] = (in.cumulative[i] + lo[i]) / in.weights[i];
    capped[i] = !in.types[i].demand.is_unbounded();
    if (capped[i]) {
      hi_level[i] = (in.cumulative[i] + in.types[i].demand.value()) / in.weights[i];
      total_demand += in.types[i].demand.value();
    } else {
      unbounded = true;
    }
  }
  auto at = [&](const Rational& level) {
    std::vector<Rational> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      Rational x = in.weights[i] * level - in.cumulative[i];
      if (capped[i] && x > in.types[i].demand.value()) x = in.types[i].demand.value();
      r[i] = x < lo[i] ? lo[i] : x;
    }
    return r;
  };
  auto sum = [](const std::vector<Rational>& v) {
    Rational s = 0;
    for (const auto& x : v) s += x;
    return s;
  };
  if (!unbounded && total_demand <= in.capacity) {
    std::vector<Rational> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = in.types[i].demand.value();
    return r;
  }
  std::vector<Rational> points;
  for (std::size_t i = 0; i < n; ++i) {
    points.push_back(lo_level[i]);
    if (capped[i]) points.push_back(hi_level[i]);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  // The sum is piecewise linear between consecutive breakpoints.
  Rational prev_level = points.front();
  Rational prev_sum = sum(at(prev_level));
  if (prev_sum >= in.capacity) return at(prev_level);
  for (std::size_t k = 1; k <= points.size(); ++k) {
    Rational next_level = k < points.size() ? points[k] : prev_level + 1;
    Rational next_sum = sum(at(next_level));
    // Past the last breakpoint the sum is linear, so extrapolation is exact.
    if (next_sum >= in.capacity || k == points.size()) {
      Rational level = prev_level + (in.capacity - prev_sum) * (next_level - prev_level) / (next_sum - prev_sum);
      return at(level);
    }
    prev_level = next_level;
    prev_sum = next_sum;
  }
  return at(prev_level);
}

/// Ascending normalized cumulative levels.
inline std::vector<Rational> sorted_levels(const EpochInput& in, const std::vector<Rational>& r) {
  std::vector<Rational> v(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) v[i] = (in.cumulative[i] + r[i]) / in.weights[i];
  std::sort(v.begin(), v.end());
  return v;
}

inline bool feasible(const EpochInput& in, const std::vector<Rational>& r) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < floor_of(in, i)) return false;
    const auto& d = in.types[i].demand;
    if (!d.is_unbounded() && r[i] > d.value()) return false;
  }
  for (std::size_t q = 0; q < in.resources(); ++q) {
    Rational use = 0;
    for (std::size_t i = 0; i < r.size(); ++i) use += r[i] * in.types[i].ratios[q];
    if (use > in.capacity) return false;
  }
  return true;
}

/// Looks for a feasible perturbation that is leximin-better: raise r_i by
/// eps and, if needed, lower one r_j just enough to restore capacity.
/// Returns the improving allocation if one exists.
inline std::optional<std::vector<Rational>> improving_transfer(const EpochInput& in, const std::vector<Rational>& r,
                                                               const std::vector<Rational>& steps) {
  const std::size_t n = r.size();
  const std::size_t m = in.resources();
  const auto base = sorted_levels(in, r);
  for (const auto& eps : steps) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Rational> up = r;
      up[i] += eps;
      if (feasible(in, up)) {
        if (sorted_levels(in, up) > base) return up;
        continue;
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        Rational need = 0;
        bool possible = true;
        for (std::size_t q = 0; q < m; ++q) {
          Rational use = 0;
          for (std::size_t k = 0; k < n; ++k) use += up[k] * in.types[k].ratios[q];
          Rational over = use - in.capacity;
          if (sgn(over) <= 0) continue;
          if (sgn(in.types[j].ratios[q]) == 0) {
            possible = false;
            break;
          }
          Rational cut = over / in.types[j].ratios[q];
          if (cut > need) need = cut;
        }
        if (!possible) continue;
        std::vector<Rational> moved = up;
        moved[j] -= need;
        if (feasible(in, moved) && sorted_levels(in, moved) > base) return moved;
      }
    }
  }
  return std::nullopt;
}

/// Random tiny epoch input on a rational grid.
inline EpochInput random_input(std::mt19937_64& rng, std::size_t max_users, std::size_t max_resources,
                               bool allow_zero_ratios) {
  auto draw = [&](long lo, long hi, long den) -> Rational {
    return make_rational(lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)), den);
  };
  EpochInput in;
  const std::size_t n = 1 + rng() % max_users;
  const std::size_t m = 1 + rng() % max_resources;
  in.capacity = draw(1, 8, 2);
  in.alpha = draw(0, 2, 2);
  for (std::size_t i = 0; i < n; ++i) {
    in.weights.push_back(rng() % 2 ? Rational(1) : draw(1, 3, 1));
    in.cumulative.push_back(draw(0, 6, 2));
    UserEpochType t;
    t.ratios.assign(m, Rational(1));
    if (m > 1) {
      for (auto& a : t.ratios) a = draw(allow_zero_ratios ? 0 : 1, 4, 4);
      t.ratios[rng() % m] = 1;
    }
    t.demand = rng() % 5 == 0 ? Demand::unbounded() : Demand(draw(0, 8, 2));
    in.types.push_back(std::move(t));
  }
  return in;
}

}  // namespace fairshare::oracle
