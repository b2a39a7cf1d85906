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

#include "fairshare/model.hpp"

#include <algorithm>
#include <sstream>

namespace fairshare {

Demand::Demand(Rational value) : value_(std::move(value)) {}

Demand Demand::unbounded() {
  Demand d;
  d.unbounded_ = true;
  return d;
}

const Rational& Demand::value() const {
  if (unbounded_) throw std::logic_error("value() on an unbounded demand");
  return value_;
}

bool operator==(const Demand& a, const Demand& b) {
  if (a.unbounded_ || b.unbounded_) return a.unbounded_ == b.unbounded_;
  return a.value_ == b.value_;
}

bool operator<(const Demand& a, const Demand& b) {
  if (a.unbounded_) return false;
  if (b.unbounded_) return true;
  return a.value_ < b.value_;
}

UserEpochType absent_type(std::size_t resources) {
  return UserEpochType{std::vector<Rational>(resources, Rational(1)), Demand(0)};
}

Rational Scenario::weight_sum() const {
  Rational sum = 0;
  for (const auto& w : weights) sum += w;
  return sum;
}

const UserEpochType& ReportProfile::reported(const Scenario& s, std::size_t user,
                                             std::size_t epoch) const {
  if (!overrides.empty()) {
    if (auto it = overrides.find({user, epoch}); it != overrides.end()) return it->second;
  }
  return s.truth[user][epoch];
}

std::size_t ReportProfile::first_override_epoch(std::size_t T) const {
  std::size_t first = T;
  for (const auto& [key, type] : overrides) first = std::min(first, key.second);
  return first;
}

ScenarioError::ScenarioError(std::vector<ValidationIssue> issues)
    : std::runtime_error([&] {
        std::ostringstream out;
        out << "invalid scenario:";
        for (const auto& issue : issues) out << "\n  " << issue.field << ": " << issue.message;
        return out.str();
      }()),
      issues_(std::move(issues)) {}

namespace {

void check_type(const UserEpochType& type, std::size_t m, bool relaxed, const std::string& field,
                std::vector<ValidationIssue>& out) {
  if (type.ratios.size() != m) {
    out.push_back({field + ".ratios", "expected " + std::to_string(m) + " ratios"});
    return;
  }
  Rational max_ratio = 0;
  for (std::size_t q = 0; q < m; ++q) {
    const auto& a = type.ratios[q];
    if (sgn(a) < 0 || a > 1) {
      out.push_back({field + ".ratios[" + std::to_string(q) + "]", "ratio must lie in [0, 1]"});
    }
    if (a > max_ratio) max_ratio = a;
  }
  if (relaxed) {
    if (sgn(max_ratio) <= 0) out.push_back({field + ".ratios", "at least one ratio must be positive"});
  } else if (max_ratio != 1) {
    out.push_back({field + ".ratios", "max ratio must equal 1"});
  }
  if (!type.demand.is_unbounded() && sgn(type.demand.value()) < 0) {
    out.push_back({field + ".demand", "demand must be nonnegative"});
  }
}

}  // namespace

std::vector<ValidationIssue> scenario_issues(const Scenario& s) {
  std::vector<ValidationIssue> out;
  if (s.n < 2) out.push_back({"n", "at least 2 users required"});
  if (s.m < 1) out.push_back({"m", "at least 1 resource required"});
  if (s.T < 1) out.push_back({"T", "at least 1 epoch required"});
  if (s.weights.size() != s.n) {
    out.push_back({"weights", "expected " + std::to_string(s.n) + " weights"});
  }
  for (std::size_t i = 0; i < s.weights.size(); ++i) {
    if (sgn(s.weights[i]) <= 0) {
      out.push_back({"weights[" + std::to_string(i) + "]", "weights strictly positive"});
    }
  }
  if (sgn(s.alpha) < 0 || s.alpha > 1) out.push_back({"alpha", "alpha must lie in [0, 1]"});
  if (s.capacities.size() != s.T) {
    out.push_back({"capacities", "expected " + std::to_string(s.T) + " capacities"});
  }
  for (std::size_t t = 0; t < s.capacities.size(); ++t) {
    if (sgn(s.capacities[t]) <= 0) {
      out.push_back({"capacities[" + std::to_string(t) + "]", "capacities strictly positive"});
    }
  }
  if (s.truth.size() != s.n) {
    out.push_back({"users", "expected " + std::to_string(s.n) + " users"});
  }
  for (std::size_t i = 0; i < s.truth.size(); ++i) {
    if (s.truth[i].size() != s.T) {
      out.push_back({"users[" + std::to_string(i) + "]", "missing epoch: expected " + std::to_string(s.T) + " epochs"});
      continue;
    }
    for (std::size_t t = 0; t < s.T; ++t) {
      const std::string field = "users[" + std::to_string(i) + "][" + std::to_string(t) + "]";
      check_type(s.truth[i][t], s.m, s.relaxed_normalization, field, out);
      if (s.positive_ratios && s.truth[i][t].ratios.size() == s.m) {
        for (const auto& a : s.truth[i][t].ratios) {
          if (sgn(a) <= 0) {
            out.push_back({field + ".ratios", "positive_ratios set but a ratio is zero"});
            break;
          }
        }
      }
    }
  }
  return out;
}

std::vector<ValidationIssue> profile_issues(const Scenario& s, const ReportProfile& p) {
  std::vector<ValidationIssue> out;
  for (auto user : p.coalition) {
    if (user >= s.n) out.push_back({"coalition", "user index " + std::to_string(user) + " out of range"});
  }
  for (const auto& [key, type] : p.overrides) {
    const auto [user, epoch] = key;
    const std::string field = "overrides[" + std::to_string(user) + "][" + std::to_string(epoch) + "]";
    if (!p.coalition.contains(user)) out.push_back({field, "override for a user outside the coalition"});
    if (epoch >= s.T) out.push_back({field, "epoch out of range"});
    check_type(type, s.m, s.relaxed_normalization, field, out);
  }
  return out;
}

Scenario validate_scenario(Scenario raw) {
  if (auto issues = scenario_issues(raw); !issues.empty()) throw ScenarioError(std::move(issues));
  return raw;
}

void validate_profile(const Scenario& s, const ReportProfile& p) {
  if (auto issues = profile_issues(s, p); !issues.empty()) throw ScenarioError(std::move(issues));
}

bool all_ratios_positive(const Scenario& s) {
  for (const auto& row : s.truth) {
    for (const auto& type : row) {
      for (const auto& a : type.ratios) {
        if (sgn(a) <= 0) return false;
      }
    }
  }
  return true;
}

Scenario normalize_capacities(const std::vector<std::vector<Rational>>& per_resource, Scenario s) {
  if (per_resource.size() != s.T) {
    throw ScenarioError(std::vector<ValidationIssue>{{"resource_capacities", "expected one row per epoch"}});
  }
  s.capacities.assign(s.T, Rational(0));
  for (std::size_t t = 0; t < s.T; ++t) {
    const auto& row = per_resource[t];
    if (row.size() != s.m) throw ScenarioError(std::vector<ValidationIssue>{{"resource_capacities", "expected one entry per resource"}});
    for (std::size_t q = 0; q < s.m; ++q) {
      if (sgn(row[q]) <= 0) {
        throw ScenarioError(std::vector<ValidationIssue>{{"resource_capacities[" + std::to_string(t) + "][" + std::to_string(q) + "]",
                              "capacities strictly positive"}});
      }
    }
    const Rational common = *std::min_element(row.begin(), row.end());
    s.capacities[t] = common;
    for (auto& user_row : s.truth) {
      auto& type = user_row[t];
      Rational max_ratio = 0;
      for (std::size_t q = 0; q < s.m; ++q) {
        type.ratios[q] *= common / row[q];
        if (type.ratios[q] > max_ratio) max_ratio = type.ratios[q];
      }
      if (sgn(max_ratio) == 0) continue;
      for (auto& a : type.ratios) a /= max_ratio;
      if (!type.demand.is_unbounded()) type.demand = Demand(type.demand.value() * max_ratio);
    }
  }
  return s;
}

Rational guarantee(const Demand& demand, const Rational& capacity, const Rational& alpha,
                   const Rational& weight, const Rational& weight_sum) {
  Rational share = alpha * capacity * weight / weight_sum;
  return demand.cap(share);
}

Rational guarantee(std::size_t user, std::size_t epoch, const Scenario& s) {
  return guarantee(s.truth[user][epoch].demand, s.capacities[epoch], s.alpha, s.weights[user], s.weight_sum());
}

}  // namespace fairshare
