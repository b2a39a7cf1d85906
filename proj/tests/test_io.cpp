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

#include <cstdio>
#include <functional>
#include <fstream>
#include <sstream>

#include "fairshare/io.hpp"

using namespace fairshare;
using nlohmann::json;

namespace {

std::string temp_path(const std::string& name) { return "fairshare_test_io_" + name + ".json"; }

std::string capture_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const FormatError& e) {
    return e.what();
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("rational encoding") {
  CHECK(rational_to_json(Rational(3)) == json(3));
  CHECK(rational_to_json(Rational(10, 9)) == json("10/9"));
  CHECK(rational_from_json(json(3), "x") == 3);
  CHECK(rational_from_json(json("6/4"), "x") == Rational(3, 2));
  CHECK(rational_from_json(json("0.125"), "x") == Rational(1, 8));
  CHECK(rational_from_json(json(0.1), "x") == Rational(1, 10));
  CHECK(rational_from_json(json(1e-3), "x") == Rational(1, 1000));
  CHECK_THROWS_WITH_AS(rational_from_json(json("1/0"), "alpha"), doctest::Contains("alpha"), FormatError);
  CHECK_THROWS_AS(rational_from_json(json(true), "alpha"), FormatError);
}

TEST_CASE("scenario round trip is exact") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomScenarioConfig c;
    c.max_resources = 3;
    c.max_weight = 3;
    c.alphas = {Rational(0), Rational(1, 3), Rational(1)};
    Scenario s = random_scenario(c, seed);
    if (seed % 5 == 0) s.truth[0][0].demand = Demand::unbounded();
    const json j = scenario_to_json(s);
    const Scenario back = scenario_from_json(j);
    CHECK(back == s);
    CHECK(scenario_to_json(back).dump() == j.dump());
    const json reparsed = parse_json_text(j.dump(2), "mem");
    CHECK(scenario_from_json(reparsed) == s);
  }
  for (const auto& g : {gen_example_10_9(), gen_two_user_sketch(Rational(1, 10), Rational(1, 1000)),
                        gen_sqrt2(5, 5), gen_zero_ratio_overreport(3)}) {
    CHECK(scenario_from_json(scenario_to_json(g.scenario)) == g.scenario);
    CHECK(profile_from_json(profile_to_json(g.deviation), g.scenario) == g.deviation);
  }
}

TEST_CASE("hand-written scenario file") {
  const std::string text = R"({
  "n": 2, "m": 1, "T": 2,
  "alpha": "1/2",
  "weights": [1, 2],
  "capacities": [8, 4.5],
  "users": [
    [{"demand": 3}, "unbounded"],
    [{"ratios": [1], "demand": "7/2"}, 0]
  ]
})";
  const Scenario s = scenario_from_json(parse_json_text(text, "mem"));
  CHECK(s.alpha == Rational(1, 2));
  CHECK(s.weights[1] == 2);
  CHECK(s.capacities[1] == Rational(9, 2));
  CHECK(s.truth[0][1].demand.is_unbounded());
  CHECK(s.truth[1][0].demand == Demand(Rational(7, 2)));
  CHECK(s.truth[1][1].demand == Demand(0));
  CHECK(s.truth[1][1].ratios == std::vector<Rational>{Rational(1)});
}

TEST_CASE("per-resource capacities are normalized") {
  const json j = {{"n", 2},
                  {"m", 2},
                  {"T", 1},
                  {"resource_capacities", {{4, 2}}},
                  {"users",
                   {{{{"ratios", {1, "1/2"}}, {"demand", 2}}}, {{{"ratios", {"1/2", 1}}, {"demand", 1}}}}}};
  const Scenario s = scenario_from_json(j);
  CHECK(s.capacities[0] == 2);
  CHECK(scenario_issues(s).empty());
  // User 1 wants (2, 1) in original units; resource 1 is halved, so (1, 1).
  CHECK(s.truth[0][0].ratios == std::vector<Rational>{Rational(1), Rational(1)});
  CHECK(s.truth[0][0].demand == Demand(1));
}

TEST_CASE("errors name the field or the line") {
  CHECK(capture_error([] { parse_json_text("{\n  \"n\": 2,\n  oops\n}", "bad.json"); }).find("bad.json:3") == 0);
  CHECK(capture_error([] { scenario_from_json(json{{"m", 1}, {"T", 1}}); }).find("\"n\"") != std::string::npos);
  const json wrong_alpha = {{"n", 2}, {"m", 1}, {"T", 1}, {"alpha", "3/2"}, {"capacities", {8}},
                            {"users", {{{{"demand", 1}}}, {{{"demand", 1}}}}}};
  CHECK(capture_error([&] { scenario_from_json(wrong_alpha); }).find("alpha must lie in [0, 1]") != std::string::npos);
  const json missing_ratio = {{"n", 2}, {"m", 2}, {"T", 1}, {"capacities", {8}},
                              {"users", {{{{"demand", 1}}}, {{{"demand", 1}}}}}};
  CHECK(capture_error([&] { scenario_from_json(missing_ratio); }).find("users[1][1]") != std::string::npos);
  CHECK(capture_error([] { read_scenario("/nonexistent/file.json"); }).find("cannot open") != std::string::npos);
}

TEST_CASE("profiles use 1-based indices") {
  const auto g = gen_example_10_9();
  const json j = profile_to_json(g.deviation);
  CHECK(j["coalition"] == json::array({1}));
  CHECK(j["overrides"][0]["user"] == 1);
  CHECK(j["overrides"][0]["epoch"] == 1);
  CHECK(j["overrides"][0]["demand"] == 0);
  const json bad = {{"coalition", {1}}, {"overrides", {{{"user", 1}, {"epoch", 9}, {"demand", 0}}}}};
  CHECK_THROWS_AS(profile_from_json(bad, g.scenario), FormatError);
  const json zero = {{"coalition", {0}}};
  CHECK_THROWS_AS(profile_from_json(zero, g.scenario), FormatError);
}

TEST_CASE("files round trip") {
  const auto g = gen_sqrt2(3, 2);
  const std::string sp = temp_path("scenario"), pp = temp_path("profile");
  write_json(sp, scenario_to_json(g.scenario));
  write_json(pp, profile_to_json(g.deviation));
  const Scenario s = read_scenario(sp);
  CHECK(s == g.scenario);
  CHECK(read_profile(pp, s) == g.deviation);
  std::remove(sp.c_str());
  std::remove(pp.c_str());
}

TEST_CASE("trace CSV") {
  const auto g = gen_example_10_9();
  std::ostringstream out;
  write_trace_csv(out, run(g.scenario, g.deviation));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "epoch,user,r,r_dec,R,R_dec,lambda_hat,u,u_dec,U,U_dec");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] == "1,1,0,0,0,0,1,0,0,0,0");
  CHECK(rows[6] == "3,1,6,6,10,10,1,6,6,10,10");
}

TEST_CASE("report encodings") {
  CHECK(ratio_text(RatioEntry{RatioEntry::Kind::Finite, Rational(10, 9)}) == "10/9");
  CHECK(ratio_text(RatioEntry{RatioEntry::Kind::Infinite, Rational(0)}) == "inf");
  CHECK(ratio_text(RatioEntry{}) == "undefined");
  const auto g = gen_example_10_9();
  const json o = outcome_to_json(incentive_ratio(g.scenario, g.deviation));
  CHECK(o.dump().find("10/9") != std::string::npos);
  const json inst = instance_to_json(g);
  CHECK(inst["predicted_ratio"] == "10/9");
  CHECK(inst["name"] == "example-10-9");
}
