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

#include <cmath>

#include "fairshare/instances.hpp"
#include "fairshare/properties.hpp"
#include "fairshare/strategy.hpp"

using namespace fairshare;

namespace {

Rational pow2_inv(std::size_t k) {
  Rational r = 1;
  for (std::size_t i = 0; i < k; ++i) r /= 2;
  return r;
}

// The replayed ratio of the coalition at the last epoch.
Rational final_ratio(const GeneratedInstance& g) {
  const Trace a = run(g.scenario);
  const Trace b = run(g.scenario, g.deviation);
  const std::size_t T = g.scenario.T - 1;
  Rational num = 0, den = 0;
  for (auto i : g.deviation.coalition) {
    num += b.cumulative_utility[T][i];
    den += a.cumulative_utility[T][i];
  }
  return num / den;
}

}  // namespace

TEST_CASE("three-user table instance") {
  const auto g = gen_example_10_9();
  CHECK(scenario_issues(g.scenario).empty());
  CHECK(profile_issues(g.scenario, g.deviation).empty());
  CHECK(g.predicted_ratio == Rational(10, 9));
  const Trace a = run(g.scenario);
  const Trace b = run(g.scenario, g.deviation);
  CHECK(a.cumulative_utility[2][0] == 9);
  CHECK(b.cumulative_utility[2][0] == 10);
  CHECK(a.cumulative[2][1] == 9);
  CHECK(a.cumulative[2][2] == 6);
  CHECK(b.cumulative[2][2] == 4);
}

TEST_CASE("sqrt(2) levels") {
  for (std::size_t m : {1, 2, 3, 5, 10, 25}) {
    const auto F = sqrt2_levels(m);
    REQUIRE(F.size() == m);
    Rational prev = 0;
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(F[i] > prev);
      CHECK(std::abs(to_double(F[i]) - sqrt2_level_closed_form(m, i + 1)) < 1e-9);
      prev = F[i];
    }
    // F_m + f_m / 2 = 1.
    const Rational fm = F[m - 1] - (m > 1 ? F[m - 2] : Rational(0));
    CHECK(F[m - 1] + fm / 2 == 1);
  }
  CHECK_THROWS_AS(sqrt2_levels(0), InstanceError);
  CHECK_THROWS_AS(gen_sqrt2(0, 3), InstanceError);
}

TEST_CASE("sqrt(2) construction replays its prediction") {
  for (std::size_t m : {2, 5, 10}) {
    for (std::size_t k : {2, 5}) {
      const auto g = gen_sqrt2(m, k);
      CHECK(scenario_issues(g.scenario).empty());
      CHECK(g.scenario.n == 1 + m + k);
      const auto F = sqrt2_levels(m);
      const Rational f1 = F[0];
      const Rational fm = F[m - 1] - (m > 1 ? F[m - 2] : Rational(0));
      const Trace a = run(g.scenario);
      const Trace b = run(g.scenario, g.deviation);
      const std::size_t T = g.scenario.T - 1;
      CHECK(a.cumulative_utility[T][0] == F[m - 1] + fm / 2);
      CHECK(b.cumulative_utility[T][0] == F[0] + f1 - F[m - 1] * pow2_inv(k));
      CHECK(final_ratio(g) == g.predicted_ratio);
      for (const auto& c : g.scenario.capacities) CHECK(sgn(c) > 0);
    }
  }
}

TEST_CASE("sqrt(2) prediction is monotone in k and along m = k") {
  const std::size_t grid[] = {2, 5, 10, 25};
  for (std::size_t mi = 0; mi < 4; ++mi) {
    for (std::size_t ki = 0; ki + 1 < 4; ++ki) {
      CHECK(gen_sqrt2(grid[mi], grid[ki]).predicted_ratio <= gen_sqrt2(grid[mi], grid[ki + 1]).predicted_ratio);
    }
    if (mi + 1 < 4) {
      CHECK(gen_sqrt2(grid[mi], grid[mi]).predicted_ratio <= gen_sqrt2(grid[mi + 1], grid[mi + 1]).predicted_ratio);
      CHECK(gen_sqrt2(grid[mi], 25).predicted_ratio <= gen_sqrt2(grid[mi + 1], 25).predicted_ratio);
    }
  }
  // With a short third phase, a longer second phase can lower the ratio.
  CHECK(gen_sqrt2(2, 2).predicted_ratio == Rational(47, 40));
  CHECK(gen_sqrt2(5, 2).predicted_ratio == Rational(205, 176));
  CHECK(gen_sqrt2(5, 2).predicted_ratio < gen_sqrt2(2, 2).predicted_ratio);
  const auto g = gen_sqrt2(25, 25);
  CHECK(to_double(g.predicted_ratio) >= 1.40);
  CHECK(std::abs(to_double(g.predicted_ratio) - std::sqrt(2.0)) < 0.02);
  REQUIRE(g.limit);
  CHECK(*g.limit == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("two-resource lower bound") {
  const Rational eps(1, 2), delta(1, 1000), w(1);
  SUBCASE("prediction formula") {
    const auto g = gen_multi_lower(eps, delta, w, 3, 2000);
    const Rational expected = (1 / (w * eps)) / (1 / (1 + w * eps) + delta / (w * eps * (w + delta)));
    CHECK(g.predicted_ratio == expected);
    CHECK(g.scenario.n == 2 + 3 + 2000);
    CHECK(rho(g.scenario, 0) == 1 / (w * eps));
    CHECK(std::abs(to_double(g.predicted_ratio) - 3.0) < 0.01);
  }
  SUBCASE("prediction tends to 1 + 1/(w eps)") {
    const auto g = gen_multi_lower(Rational(1, 4), Rational(1, 1'000'000'000), Rational(2), 10, 10, false);
    CHECK(std::abs(to_double(g.predicted_ratio) - 3.0) < 1e-6);
  }
  SUBCASE("replay matches at sizes satisfying every slack inequality") {
    const auto sizes = min_group_sizes(eps, delta, w);
    for (const auto& c : multi_lower_slack(eps, delta, w, sizes.n1, sizes.n2)) CHECK(c.holds());
    const auto g = gen_multi_lower(eps, delta, w, sizes.n1, sizes.n2);
    CHECK(final_ratio(g) == g.predicted_ratio);
    // One fewer user in either group breaks some inequality.
    bool broken = false;
    for (const auto& c : multi_lower_slack(eps, delta, w, sizes.n1, sizes.n2 - 1)) broken |= !c.holds();
    CHECK(broken);
  }
  SUBCASE("n1 = n2 = 1000 violates the epoch-2 deviated inequality") {
    const auto checks = multi_lower_slack(eps, delta, w, 1000, 1000);
    REQUIRE(checks.size() == 4);
    CHECK(checks[0].holds());
    CHECK(checks[1].holds());
    CHECK(checks[2].holds());
    CHECK_FALSE(checks[3].holds());
    CHECK_THROWS_WITH_AS(gen_multi_lower(eps, delta, w, 1000, 1000), doctest::Contains("I4"), InstanceError);
    // Built anyway, the instance does not witness the prediction.
    const auto g = gen_multi_lower(eps, delta, w, 1000, 1000, false);
    CHECK(final_ratio(g) < g.predicted_ratio);
  }
  CHECK_THROWS_AS(gen_multi_lower(Rational(1, 2), Rational(3, 4), w, 10, 10), InstanceError);
}

TEST_CASE("zero-ratio over-report instance") {
  const std::size_t n = 10;
  const auto g = gen_zero_ratio_overreport(n);
  const std::size_t m = g.scenario.m;
  CHECK(m == zero_ratio_resources(n));
  CHECK(m == 11);
  CHECK(g.scenario.n == n * n + m - 1);
  CHECK(g.scenario.T == m - 1);
  CHECK(scenario_issues(g.scenario).empty());
  CHECK_FALSE(all_ratios_positive(g.scenario));
  const Rational n2(static_cast<long>(n * n));
  const Trace a = run(g.scenario);
  const Trace b = run(g.scenario, g.deviation);
  const std::size_t T = g.scenario.T - 1;
  CHECK(a.cumulative_utility[T][0] == (2 / n2) * (1 - pow2_inv(m - 2)));
  CHECK(b.cumulative_utility[T][0] == make_rational(static_cast<long>(m) - 2, 1) / n2);
  CHECK(b.allocation[0][0] == 1 / (n2 + 1));
  CHECK(final_ratio(g) >= make_rational(static_cast<long>(m) - 2, 2));
  CHECK(final_ratio(g) == g.predicted_ratio);
  CHECK(zero_ratio_resources(3) == 4);
  CHECK_THROWS_AS(gen_zero_ratio_overreport(2), InstanceError);
}

TEST_CASE("two-user sketch") {
  const Rational eps(1, 10), delta(1, 1000);
  const auto g = gen_two_user_sketch(eps, delta);
  CHECK(g.scenario.relaxed_normalization);
  const Trace a = run(g.scenario);
  const Trace b = run(g.scenario, g.deviation);
  CHECK(a.allocation[0] == std::vector<Rational>{1 / (1 + eps), 1 / (1 + eps)});
  CHECK(b.allocation[0] == std::vector<Rational>{Rational(0), 1 / eps});
  CHECK(b.allocation[1] == std::vector<Rational>{1 / eps, Rational(0)});
  const Rational expected = (1 / eps) / (1 / (1 + eps) + (delta / eps) / (1 + delta));
  CHECK(g.predicted_ratio == expected);
  CHECK(final_ratio(g) == expected);
  const auto tiny = gen_two_user_sketch(eps, Rational(1, 1'000'000'000));
  CHECK(std::abs(to_double(tiny.predicted_ratio) - 11.0) < 1e-6);
}

TEST_CASE("random scenarios") {
  RandomScenarioConfig c;
  c.min_users = 3;
  c.max_users = 3;
  c.min_epochs = 4;
  c.max_epochs = 4;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Scenario s = random_scenario(c, seed);
    CHECK(s == random_scenario(c, seed));
    CHECK(scenario_issues(s).empty());
    CHECK(s.n == 3);
    CHECK(s.T == 4);
    for (const auto& row : s.truth) {
      for (const auto& type : row) CHECK(type.ratios == std::vector<Rational>{Rational(1)});
    }
  }
  RandomScenarioConfig p;
  p.min_resources = 2;
  p.max_resources = 4;
  p.positive_ratios = true;
  p.min_ratio = Rational(1, 4);
  p.max_weight = 3;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Scenario s = random_scenario(p, seed);
    CHECK(scenario_issues(s).empty());
    CHECK(all_ratios_positive(s));
    for (const auto& row : s.truth) {
      for (const auto& type : row) {
        for (const auto& a : type.ratios) CHECK(a >= Rational(1, 4));
      }
    }
    for (const auto& w : s.weights) CHECK((w >= 1 && w <= 3));
  }
  CHECK_FALSE(random_scenario(c, 1) == random_scenario(c, 2));
}
