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

#include <doctest.h>

#include <random>

#include "fairshare/engine.hpp"
#include "fairshare/instances.hpp"

using namespace fairshare;

namespace {

std::vector<Rational> rs(std::initializer_list<long> xs) {
  std::vector<Rational> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

Rational sum(const std::vector<Rational>& v) {
  Rational s = 0;
  for (const auto& x : v) s += x;
  return s;
}

// Lowers a random subset of demands in epoch `t` of a profile.
ReportProfile lower_demands(const Scenario& s, std::size_t t, std::mt19937_64& rng) {
  ReportProfile p;
  for (std::size_t i = 0; i < s.n; ++i) {
    if (rng() % 2 == 0) continue;
    UserEpochType type = s.truth[i][t];
    const long k = static_cast<long>(rng() % 4);
    type.demand = Demand(type.demand.value() * make_rational(k, 4));
    p.coalition.insert(i);
    p.overrides[{i, t}] = type;
  }
  return p;
}

}  // namespace

TEST_CASE("ratio_penalty") {
  CHECK(ratio_penalty(rs({1, 1}), rs({1, 1})).value == 1);
  CHECK(ratio_penalty({Rational(1), Rational(1)}, {Rational(1), Rational(1, 2)}).value == Rational(1, 2));
  CHECK(ratio_penalty({Rational(1), Rational(1, 2)}, {Rational(1), Rational(1)}).value == 1);
  SUBCASE("zero on a truly used resource is degenerate") {
    const auto p = ratio_penalty({Rational(1), Rational(1, 2)}, {Rational(1), Rational(0)});
    CHECK(p.value == 0);
    CHECK(p.degenerate);
  }
  SUBCASE("resources outside the true support are ignored") {
    const auto p = ratio_penalty({Rational(1), Rational(0)}, {Rational(1), Rational(1)});
    CHECK(p.value == 1);
    CHECK_FALSE(p.degenerate);
  }
}

TEST_CASE("three-user table replay") {
  const auto g = gen_example_10_9();
  SUBCASE("truthful") {
    const Trace t = run(g.scenario);
    REQUIRE(t.epochs_count() == 3);
    CHECK(t.allocation[0] == rs({4, 4, 0}));
    CHECK(t.allocation[1] == rs({2, 0, 6}));
    CHECK(t.allocation[2] == rs({3, 5, 0}));
    CHECK(t.cumulative_utility[2][0] == 9);
    CHECK(t.cumulative[2] == rs({9, 9, 6}));
  }
  SUBCASE("user 1 hides its first demand") {
    const Trace t = run(g.scenario, g.deviation);
    CHECK(t.allocation[0] == rs({0, 8, 0}));
    CHECK(t.allocation[1] == rs({4, 0, 4}));
    CHECK(t.allocation[2] == rs({6, 2, 0}));
    CHECK(t.cumulative_utility[2][0] == 10);
    CHECK(t.profile == g.deviation);
  }
}

TEST_CASE("trace bookkeeping on random scenarios") {
  std::mt19937_64 rng(41);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    RandomScenarioConfig c;
    c.max_resources = seed % 3 == 0 ? 1 : 3;
    c.max_weight = seed % 2 == 0 ? Rational(1) : Rational(3);
    c.alphas = {Rational(0), Rational(1, 2), Rational(1)};
    const Scenario s = random_scenario(c, seed);
    const Trace truthful = run(s, {}, RunOptions{true, nullptr});
    CHECK(truthful.certification_failures == 0);
    CHECK(truthful.utility == truthful.allocation);
    CHECK(truthful.cumulative_utility == truthful.cumulative);
    const Trace again = run(s);
    CHECK(again.allocation == truthful.allocation);
    CHECK(again.ratio_penalty == truthful.ratio_penalty);

    const std::size_t t0 = rng() % s.T;
    const ReportProfile p = lower_demands(s, t0, rng);
    const Trace full = run(s, p);
    const Trace reused = run(s, p, RunOptions{false, &truthful});
    CHECK(full.allocation == reused.allocation);
    CHECK(full.cumulative_utility == reused.cumulative_utility);

    for (std::size_t t = 0; t < s.T; ++t) {
      std::vector<Rational> usage(s.m);
      for (std::size_t i = 0; i < s.n; ++i) {
        const Rational& prev_r = t == 0 ? Rational(0) : full.cumulative[t - 1][i];
        const Rational& prev_u = t == 0 ? Rational(0) : full.cumulative_utility[t - 1][i];
        CHECK(full.cumulative[t][i] == prev_r + full.allocation[t][i]);
        CHECK(full.cumulative_utility[t][i] == prev_u + full.utility[t][i]);
        CHECK(full.utility[t][i] <= full.allocation[t][i]);
        CHECK(full.ratio_penalty[t][i] == 1);
        for (std::size_t q = 0; q < s.m; ++q) {
          usage[q] += full.allocation[t][i] * p.reported(s, i, t).ratios[q];
        }
      }
      for (const auto& u : usage) CHECK(u <= s.capacities[t]);
    }
  }
}

TEST_CASE("lowering demands never raises the first deviating epoch's total") {
  std::mt19937_64 rng(43);
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    RandomScenarioConfig c;
    c.max_users = 5;
    c.max_weight = seed % 2 == 0 ? Rational(1) : Rational(2);
    c.alphas = {Rational(0), Rational(1, 2), Rational(1)};
    const Scenario s = random_scenario(c, seed);
    const std::size_t t0 = rng() % s.T;
    const ReportProfile p = lower_demands(s, t0, rng);
    const Trace a = run(s);
    const Trace b = run(s, p);
    CHECK(sum(b.allocation[t0]) <= sum(a.allocation[t0]));
  }
}

TEST_CASE("misreported ratios are penalized") {
  // Two users on two resources; user 1 truly needs (1, 1/2) but reports (1, 1).
  Scenario s;
  s.n = 2;
  s.m = 2;
  s.T = 1;
  s.weights = rs({1, 1});
  s.capacities = rs({1});
  s.truth = {{UserEpochType{{Rational(1), Rational(1, 2)}, Demand::unbounded()}},
             {UserEpochType{{Rational(1, 2), Rational(1)}, Demand::unbounded()}}};
  s.positive_ratios = true;
  s = validate_scenario(s);
  ReportProfile p;
  p.coalition = {0};
  p.overrides[{0, 0}] = UserEpochType{{Rational(1), Rational(1)}, Demand::unbounded()};
  const Trace t = run(s, p);
  CHECK(t.ratio_penalty[0][0] == 1);
  // Reporting (1, 1) against (1/2, 1) leaves user 1 with 1/2.
  CHECK(t.allocation[0][0] == Rational(1, 2));
  CHECK(t.utility[0][0] == Rational(1, 2));
  CHECK(t.utility[0][1] == Rational(1, 2));

  p.overrides[{0, 0}] = UserEpochType{{Rational(1), Rational(1, 4)}, Demand::unbounded()};
  const Trace u = run(s, p);
  CHECK(u.ratio_penalty[0][0] == Rational(1, 2));
  CHECK(u.utility[0][0] == u.allocation[0][0] / 2);
}
