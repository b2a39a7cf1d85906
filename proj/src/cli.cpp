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

#include "fairshare/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fairshare/instances.hpp"
#include "fairshare/io.hpp"
#include "fairshare/parallel.hpp"

namespace fairshare::cli {

using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::set<std::size_t> parse_coalition(const std::string& text, const Scenario& s) {
  std::set<std::size_t> out;
  for (const auto& part : split(text, ',')) {
    long v = 0;
    try {
      v = std::stol(part);
    } catch (...) {
      throw UsageError("--coalition: \"" + part + "\" is not a user index");
    }
    if (v < 1 || static_cast<std::size_t>(v) > s.n) throw UsageError("--coalition: user " + part + " out of range");
    out.insert(static_cast<std::size_t>(v - 1));
  }
  if (out.empty()) throw UsageError("--coalition: at least one user required");
  return out;
}

std::vector<Rational> parse_grid(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& part : split(text, ',')) {
    try {
      Rational v = parse_rational(part);
      if (sgn(v) < 0) throw std::invalid_argument("negative multiplier");
      out.push_back(v);
    } catch (const std::invalid_argument& e) {
      throw UsageError("--grid: \"" + part + "\": " + e.what());
    }
  }
  if (out.empty()) throw UsageError("--grid: empty grid");
  return out;
}

std::vector<std::size_t> parse_epochs(const std::string& text, const Scenario& s) {
  std::vector<std::size_t> out;
  for (const auto& part : split(text, ',')) {
    long v = 0;
    try {
      v = std::stol(part);
    } catch (...) {
      throw UsageError("--epochs: \"" + part + "\" is not an epoch");
    }
    if (v < 1 || static_cast<std::size_t>(v) > s.T) throw UsageError("--epochs: epoch " + part + " out of range");
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  return out;
}

std::string gamma_line(const DeviationOutcome& o) {
  return "gamma_max = " + ratio_text(o.max_ratio) + " at t=" + std::to_string(o.argmax_epoch + 1);
}

void print_report_line(std::ostream& out, const SuiteEntry& e) {
  const auto& r = e.report;
  std::string tag = r.passed ? "PASS" : (e.expected_failure ? "XFAIL" : "FAIL");
  if (!r.applicable && r.passed) tag = "SKIP";
  out << '[' << tag << "] " << e.label << ": checked=" << r.checked;
  if (r.vacuous) out << " vacuous=" << r.vacuous;
  if (r.min_slack) out << " min_slack=" << to_string(*r.min_slack) << " (" << to_decimal(*r.min_slack, 6) << ")";
  if (!r.detail.empty()) out << " | " << r.detail;
  out << '\n';
  if (!r.passed && r.counterexample) {
    const auto& c = *r.counterexample;
    out << "    counterexample: " << c.description;
    if (c.epoch) out << " epoch=" << *c.epoch + 1;
    if (c.user) out << " user=" << *c.user + 1;
    if (c.other) out << " other=" << *c.other + 1;
    for (const auto& [k, v] : c.values) out << ' ' << k << '=' << to_string(v);
    out << '\n';
  }
}

/// Passes when the replayed gamma* equals the predicted ratio exactly.
PropertyReport replay_report(const GeneratedInstance& g, const DeviationOutcome& o) {
  PropertyReport r;
  r.name = "replay";
  r.detail = "predicted " + to_string(g.predicted_ratio) + ", replayed " + ratio_text(o.max_ratio);
  ++r.checked;
  if (o.max_ratio.kind != RatioEntry::Kind::Finite || o.max_ratio.value != g.predicted_ratio) {
    r.passed = false;
    Counterexample c;
    c.description = "replayed ratio differs from the prediction";
    c.epoch = o.argmax_epoch;
    c.values.push_back({"predicted", g.predicted_ratio});
    if (o.max_ratio.kind == RatioEntry::Kind::Finite) c.values.push_back({"replayed", o.max_ratio.value});
    r.counterexample = std::move(c);
  } else {
    r.min_slack = Rational(0);
  }
  return r;
}

PropertyReport certification_report(const Trace& t) {
  PropertyReport r;
  r.name = "certification";
  r.checked = t.certified_epochs;
  if (t.certification_failures > 0) {
    r.passed = false;
    r.counterexample = Counterexample{"bottleneck certificate rejected an allocation", std::nullopt, std::nullopt,
                                      std::nullopt, {}, std::nullopt};
  }
  return r;
}

void add_fairness(std::vector<SuiteEntry>& out, const std::string& label, const Trace& truthful, const Scenario& s) {
  out.push_back({label + " envy-freeness", check_envy_freeness(truthful, s), false});
  out.push_back({label + " sharing-incentives", check_sharing_incentives(truthful, s), false});
  out.push_back({label + " pareto", check_pareto(truthful, s), false});
  out.push_back({label + " certification", certification_report(truthful), false});
}

void add_instance(std::vector<SuiteEntry>& out, const GeneratedInstance& g, const std::string& label) {
  RunOptions certify;
  certify.certify = true;
  const Trace truthful = run(g.scenario, {}, certify);
  const DeviationOutcome o = incentive_ratio(g.scenario, g.deviation, truthful, certify);
  out.push_back({label + " replay", replay_report(g, o), false});
  add_fairness(out, label, truthful, g.scenario);
  out.push_back({label + " deviated certification", certification_report(o.deviated), false});
  PropertyReport bound = check_upper_bounds(o, g.scenario);
  out.push_back({label + " upper-bound", bound, false});
}

}  // namespace

bool suite_ok(const std::vector<SuiteEntry>& entries) {
  for (const auto& e : entries) {
    if (!e.report.passed && !e.expected_failure) return false;
  }
  return true;
}

std::vector<SuiteEntry> suite_constructions() {
  std::vector<SuiteEntry> out;
  {
    const auto g = gen_example_10_9();
    add_instance(out, g, "example-10-9");
    SearchConfig config;
    config.require_exhaustive = true;
    out.push_back({"example-10-9 no-over-report", check_no_overreport(g.scenario, {0}, config), false});
  }

  PropertyReport monotone;
  monotone.name = "sqrt2-monotone";
  Rational previous = 0;
  for (std::size_t m : {2, 5, 10, 25}) {
    const auto g = gen_sqrt2(m, m);
    add_instance(out, g, "sqrt2 m=k=" + std::to_string(m));
    monotone.witness(g.predicted_ratio - previous, Rational(0), [&] {
      return Counterexample{"ratio decreased along the grid", std::nullopt, std::nullopt, std::nullopt,
                            {{"previous", previous}, {"current", g.predicted_ratio}}, std::nullopt};
    });
    previous = g.predicted_ratio;
  }
  monotone.detail = "m = k = 25 ratio " + to_decimal(previous);
  out.push_back({"sqrt2 monotone in m = k", monotone, false});

  for (const auto& [eps, w] : {std::pair{Rational(1, 2), Rational(1)}, std::pair{Rational(1, 4), Rational(2)}}) {
    const Rational delta(1, 1000);
    const auto sizes = min_group_sizes(eps, delta, w);
    const auto g = gen_multi_lower(eps, delta, w, sizes.n1, sizes.n2);
    add_instance(out, g,
                 "multi-lower eps=" + to_string(eps) + " w=" + to_string(w) + " n1=" + std::to_string(sizes.n1) +
                     " n2=" + std::to_string(sizes.n2));
  }

  add_instance(out, gen_two_user_sketch(Rational(1, 10), Rational(1, 1000)), "two-user-sketch");
  return out;
}

std::vector<SuiteEntry> suite_random(std::uint64_t seeds, std::uint64_t first_seed) {
  struct Family {
    std::string label;
    RandomScenarioConfig config;
  };
  std::vector<Family> families(3);
  families[0].label = "single-resource";
  families[0].config.max_users = 4;
  families[0].config.max_epochs = 4;
  families[0].config.alphas = {Rational(0), Rational(1, 2), Rational(1)};
  families[1].label = "weighted";
  families[1].config = families[0].config;
  families[1].config.max_weight = 3;
  families[2].label = "multi-resource";
  families[2].config.max_users = 3;
  families[2].config.max_epochs = 3;
  families[2].config.min_resources = 2;
  families[2].config.max_resources = 2;
  families[2].config.positive_ratios = true;
  families[2].config.alphas = {Rational(0), Rational(1, 2), Rational(1)};

  const std::vector<std::string> names{"envy-freeness", "sharing-incentives", "pareto", "certification",
                                       "upper-bound"};
  // [family][seed][property]
  std::vector<std::vector<std::vector<PropertyReport>>> results(
      families.size(), std::vector<std::vector<PropertyReport>>(seeds));
  parallel_for(families.size() * seeds, [&](std::size_t job) {
    const std::size_t f = job / seeds;
    const std::uint64_t seed = first_seed + job % seeds;
    const Scenario s = random_scenario(families[f].config, seed);
    RunOptions certify;
    certify.certify = true;
    const Trace truthful = run(s, {}, certify);
    auto& row = results[f][job % seeds];
    row.push_back(check_envy_freeness(truthful, s));
    row.push_back(check_sharing_incentives(truthful, s));
    row.push_back(check_pareto(truthful, s));
    row.push_back(certification_report(truthful));
    SearchConfig config;
    config.seed = seed;
    config.certify = true;
    const auto search = search_best_deviation(s, {0}, config);
    PropertyReport bound;
    if (search.best) bound = check_upper_bounds(*search.best, s);
    if (search.certification_failures > 0) {
      bound.passed = false;
      bound.counterexample = Counterexample{"bottleneck certificate rejected a searched allocation", std::nullopt,
                                            std::nullopt, std::nullopt, {}, s};
    }
    row.push_back(std::move(bound));
  });

  std::vector<SuiteEntry> out;
  for (std::size_t f = 0; f < families.size(); ++f) {
    for (std::size_t p = 0; p < names.size(); ++p) {
      PropertyReport merged;
      merged.name = names[p];
      for (const auto& seed_row : results[f]) merged.merge(seed_row[p]);
      merged.detail = std::to_string(seeds) + " seeds";
      out.push_back({"random " + families[f].label + " " + names[p], merged, false});
    }
  }
  return out;
}

std::vector<SuiteEntry> suite_zero_ratio() {
  std::vector<SuiteEntry> out;
  const auto g = gen_zero_ratio_overreport(10);
  const std::size_t m = g.scenario.m;
  RunOptions certify;
  certify.certify = true;
  const Trace truthful = run(g.scenario, {}, certify);
  const DeviationOutcome o = incentive_ratio(g.scenario, g.deviation, truthful, certify);
  out.push_back({"zero-ratio replay", replay_report(g, o), false});

  PropertyReport factor;
  factor.name = "theta-m factor";
  const Rational floor_factor(static_cast<long>(m - 2), 2);
  factor.detail = "factor >= (m-2)/2 = " + to_string(floor_factor);
  if (o.max_ratio.kind == RatioEntry::Kind::Finite) {
    factor.witness(o.max_ratio.value - floor_factor, Rational(0), [&] {
      return Counterexample{"over-report gain below (m-2)/2", o.argmax_epoch, std::size_t{0}, std::nullopt,
                            {{"gamma", o.max_ratio.value}}, std::nullopt};
    });
  } else {
    factor.passed = false;
  }
  out.push_back({"zero-ratio over-report factor", factor, false});
  add_fairness(out, "zero-ratio", truthful, g.scenario);
  out.push_back({"zero-ratio deviated certification", certification_report(o.deviated), false});

  SearchConfig config;
  config.epochs = {0};
  PropertyReport nor = check_no_overreport(g.scenario, {0}, config);
  nor.detail += "; positive-ratio hypothesis does not hold";
  out.push_back({"zero-ratio no-over-report", nor, true});
  return out;
}

namespace {

struct Options {
  std::string scenario;
  std::string profile;
  std::string coalition;
  std::string grid;
  std::string epochs;
  std::string out;
  std::string format = "table";
  std::string suite;
  std::string name;
  std::uint64_t seed = 0;
  std::uint64_t seeds = 100;
  std::uint64_t budget = 1'000'000;
  std::string tolerance = "0";
  bool overreport = false;
  bool exhaustive = false;
  // generate parameters
  std::size_t m = 0;
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t T = 0;
  std::string eps = "1/2";
  std::string delta = "1/1000";
  std::string w = "1";
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  bool no_slack_check = false;
};

void ensure_dir(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw FormatError(dir + ": " + ec.message());
}

std::string join(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

void print_totals(std::ostream& out, const Trace& truthful, const Trace* deviated) {
  if (truthful.epochs_count() == 0) return;
  const std::size_t last = truthful.epochs_count() - 1;
  out << "user  R_T  U_T";
  if (deviated) out << "  R_hat_T  U_hat_T";
  out << '\n';
  for (std::size_t i = 0; i < truthful.users(); ++i) {
    out << i + 1 << "  " << to_string(truthful.cumulative[last][i]) << "  "
        << to_string(truthful.cumulative_utility[last][i]);
    if (deviated) {
      out << "  " << to_string(deviated->cumulative[last][i]) << "  "
          << to_string(deviated->cumulative_utility[last][i]);
    }
    out << '\n';
  }
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const Scenario s = read_scenario(o.scenario);
  const Trace truthful = run(s);
  std::optional<DeviationOutcome> outcome;
  if (!o.profile.empty()) {
    const ReportProfile p = read_profile(o.profile, s);
    outcome = incentive_ratio(s, p, truthful);
  }
  if (!o.out.empty()) {
    ensure_dir(o.out);
    std::ofstream t(join(o.out, "truthful.csv"));
    write_trace_csv(t, truthful);
    if (outcome) {
      std::ofstream d(join(o.out, "deviated.csv"));
      write_trace_csv(d, outcome->deviated);
      write_json(join(o.out, "outcome.json"), outcome_to_json(*outcome));
    }
  }
  if (o.format == "csv") {
    write_trace_csv(out, outcome ? outcome->deviated : truthful);
  } else if (o.format == "json") {
    json j;
    j["seed"] = o.seed;
    if (outcome) j["outcome"] = outcome_to_json(*outcome);
    json totals = json::array();
    const std::size_t last = truthful.epochs_count() - 1;
    for (std::size_t i = 0; i < truthful.users(); ++i) {
      totals.push_back({{"user", i + 1},
                        {"R", rational_to_json(truthful.cumulative[last][i])},
                        {"U", rational_to_json(truthful.cumulative_utility[last][i])}});
    }
    j["truthful_totals"] = std::move(totals);
    out << j.dump(2) << '\n';
  } else {
    out << "seed = " << o.seed << '\n';
    print_totals(out, truthful, outcome ? &outcome->deviated : nullptr);
    if (outcome) out << gamma_line(*outcome) << '\n';
  }
  return kOk;
}

GeneratedInstance generate_named(const Options& o) {
  auto rational_arg = [](const std::string& text, const char* flag) {
    try {
      return parse_rational(text);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string(flag) + ": " + e.what());
    }
  };
  try {
    if (o.name == "example-10-9") return gen_example_10_9();
    if (o.name == "sqrt2") return gen_sqrt2(o.m ? o.m : 25, o.k ? o.k : 25);
    if (o.name == "multi-lower") {
      const Rational eps = rational_arg(o.eps, "--eps");
      const Rational delta = rational_arg(o.delta, "--delta");
      const Rational w = rational_arg(o.w, "--w");
      GroupSizes sizes{o.n1, o.n2};
      if (sizes.n1 == 0 || sizes.n2 == 0) {
        const auto least = min_group_sizes(eps, delta, w);
        if (sizes.n1 == 0) sizes.n1 = least.n1;
        if (sizes.n2 == 0) sizes.n2 = least.n2;
      }
      return gen_multi_lower(eps, delta, w, sizes.n1, sizes.n2, !o.no_slack_check);
    }
    if (o.name == "zero-ratio") return gen_zero_ratio_overreport(o.n ? o.n : 10);
    if (o.name == "two-user-sketch") {
      return gen_two_user_sketch(rational_arg(o.eps, "--eps"), rational_arg(o.delta, "--delta"));
    }
  } catch (const InstanceError& e) {
    throw UsageError(o.name + ": " + e.what());
  }
  throw UsageError("unknown instance \"" + o.name +
                   "\" (expected example-10-9, sqrt2, multi-lower, zero-ratio, two-user-sketch, random)");
}

int cmd_generate(const Options& o, std::ostream& out) {
  json note;
  json scenario_json;
  std::optional<json> profile_json;
  if (o.name == "random") {
    RandomScenarioConfig config;
    if (o.n) config.min_users = config.max_users = o.n;
    if (o.m) config.min_resources = config.max_resources = o.m;
    if (o.T) config.min_epochs = config.max_epochs = o.T;
    try {
      scenario_json = scenario_to_json(random_scenario(config, o.seed));
    } catch (const InstanceError& e) {
      throw UsageError(std::string("random: ") + e.what());
    }
    note = {{"name", "random"}, {"notes", "random scenario"}};
  } else {
    const GeneratedInstance g = generate_named(o);
    scenario_json = scenario_to_json(g.scenario);
    profile_json = profile_to_json(g.deviation);
    note = instance_to_json(g);
  }
  note["seed"] = o.seed;
  if (!o.out.empty()) {
    ensure_dir(o.out);
    write_json(join(o.out, "scenario.json"), scenario_json);
    if (profile_json) write_json(join(o.out, "profile.json"), *profile_json);
    write_json(join(o.out, "notes.json"), note);
  }
  if (o.format == "json") {
    json j{{"note", note}, {"scenario", scenario_json}};
    if (profile_json) j["profile"] = *profile_json;
    out << j.dump(2) << '\n';
  } else {
    out << "instance: " << note["name"].get<std::string>() << '\n';
    out << "seed = " << o.seed << '\n';
    if (note.contains("predicted_ratio")) {
      const auto& p = note["predicted_ratio"];
      out << "predicted ratio = " << (p.is_string() ? p.get<std::string>() : p.dump()) << " ("
          << note["predicted_ratio_decimal"].get<std::string>() << ")\n";
    }
    out << "notes: " << note["notes"].get<std::string>() << '\n';
    if (!o.out.empty()) out << "wrote " << o.out << '\n';
  }
  return kOk;
}

int cmd_deviate(const Options& o, std::ostream& out) {
  const Scenario s = read_scenario(o.scenario);
  if (o.coalition.empty()) throw UsageError("--coalition is required");
  const auto coalition = parse_coalition(o.coalition, s);
  SearchConfig config;
  if (!o.grid.empty()) config.demand_grid = parse_grid(o.grid);
  if (!o.epochs.empty()) config.epochs = parse_epochs(o.epochs, s);
  config.seed = o.seed;
  config.exhaustive_budget = o.budget;
  config.require_exhaustive = o.exhaustive;

  const SearchResult under = search_best_deviation(s, coalition, config);
  std::optional<SearchResult> over;
  if (o.overreport) over = search_overreport(s, coalition, overreport_config(config));

  auto best_outcome = [&](const SearchResult& r) -> DeviationOutcome {
    if (r.best) return *r.best;
    ReportProfile p;
    p.coalition = coalition;
    return incentive_ratio(s, p);
  };
  const DeviationOutcome best = best_outcome(under);
  std::optional<IntervalAnalysis> intervals;
  if (coalition.size() == 1) intervals = interval_analysis(best.truthful, best.deviated, *coalition.begin());

  json report;
  report["seed"] = o.seed;
  report["exhaustive"] = under.exhaustive;
  report["space_size"] = under.space_size;
  report["evaluated"] = under.evaluated;
  report["best"] = outcome_to_json(best);
  if (intervals) report["intervals"] = intervals_to_json(*intervals);
  if (over) {
    report["overreport"] = over->best ? outcome_to_json(*over->best) : json(nullptr);
    report["overreport_exhaustive"] = over->exhaustive;
  }
  if (!o.out.empty()) {
    ensure_dir(o.out);
    write_json(join(o.out, "deviation.json"), report);
    write_json(join(o.out, "profile.json"), profile_to_json(best.profile()));
  }

  if (o.format == "json") {
    out << report.dump(2) << '\n';
  } else if (o.format == "csv") {
    out << "epoch,gamma\n";
    for (std::size_t t = 0; t < best.gamma.size(); ++t) out << t + 1 << ',' << ratio_text(best.gamma[t]) << '\n';
  } else {
    out << "seed = " << o.seed << '\n';
    out << "search: " << (under.exhaustive ? "exhaustive" : "random restarts") << ", " << under.evaluated
        << " profiles evaluated of " << under.space_size << '\n';
    out << gamma_line(best) << '\n';
    for (const auto& [key, type] : best.profile().overrides) {
      out << "  user " << key.first + 1 << " epoch " << key.second + 1 << " reports demand "
          << (type.demand.is_unbounded() ? std::string("unbounded") : to_string(type.demand.value())) << '\n';
    }
    if (intervals) {
      for (const auto& iv : intervals->intervals) {
        out << "  interval start=" << iv.start + 1 << " end=" << (iv.end ? std::to_string(*iv.end + 1) : "open")
            << " best_epoch=" << iv.best_epoch + 1 << " ratio=" << ratio_text(iv.best_ratio) << '\n';
      }
    }
    if (over) {
      out << "over-report search: gamma_max = " << ratio_text(over->best_ratio()) << '\n';
    }
  }
  return kOk;
}

int print_suite(const std::vector<SuiteEntry>& entries, const Options& o, std::ostream& out) {
  if (o.format == "json") {
    json j;
    j["seed"] = o.seed;
    j["reports"] = json::array();
    for (const auto& e : entries) {
      json r = report_to_json(e.report);
      r["label"] = e.label;
      r["expected_failure"] = e.expected_failure;
      j["reports"].push_back(std::move(r));
    }
    j["ok"] = suite_ok(entries);
    out << j.dump(2) << '\n';
  } else {
    out << "seed = " << o.seed << '\n';
    for (const auto& e : entries) print_report_line(out, e);
    std::size_t failed = 0;
    for (const auto& e : entries) failed += (!e.report.passed && !e.expected_failure) ? 1 : 0;
    out << entries.size() << " checks, " << failed << " unexpected failures\n";
  }
  return suite_ok(entries) ? kOk : kPropertyFailure;
}

int cmd_check(const Options& o, std::ostream& out) {
  Rational tolerance;
  try {
    tolerance = parse_rational(o.tolerance);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--tolerance: ") + e.what());
  }
  if (!o.suite.empty()) {
    if (o.suite == "paper-tables") return print_suite(suite_constructions(), o, out);
    if (o.suite == "random") return print_suite(suite_random(o.seeds, o.seed), o, out);
    if (o.suite == "zero-ratio") return print_suite(suite_zero_ratio(), o, out);
    throw UsageError("unknown suite \"" + o.suite + "\" (expected paper-tables, random, zero-ratio)");
  }
  if (o.scenario.empty()) throw UsageError("check needs --scenario or --suite");
  const Scenario s = read_scenario(o.scenario);
  RunOptions certify;
  certify.certify = true;
  const Trace truthful = run(s, {}, certify);
  std::vector<SuiteEntry> entries;
  entries.push_back({"envy-freeness", check_envy_freeness(truthful, s, tolerance), false});
  entries.push_back({"sharing-incentives", check_sharing_incentives(truthful, s, tolerance), false});
  entries.push_back({"pareto", check_pareto(truthful, s, tolerance), false});
  entries.push_back({"certification", certification_report(truthful), false});
  if (!o.coalition.empty()) {
    const auto coalition = parse_coalition(o.coalition, s);
    SearchConfig config;
    if (!o.grid.empty()) config.demand_grid = parse_grid(o.grid);
    config.seed = o.seed;
    config.exhaustive_budget = o.budget;
    const auto search = search_best_deviation(s, coalition, config);
    if (search.best) entries.push_back({"upper-bound", check_upper_bounds(*search.best, s), false});
    PropertyReport nor = check_no_overreport(s, coalition, config);
    const bool expected = !nor.applicable;
    entries.push_back({"no-over-report", nor, expected});
  }
  return print_suite(entries, o, out);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic max-min fair allocation and strategic deviation laboratory", "fairshare"};
  app.require_subcommand(1);
  Options o;

  auto* simulate = app.add_subcommand("simulate", "Replay a scenario, optionally under a report profile");
  simulate->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
  simulate->add_option("--profile", o.profile, "Report profile JSON file");

  auto* generate = app.add_subcommand("generate", "Write a constructed or random instance");
  generate->add_option("name", o.name, "example-10-9, sqrt2, multi-lower, zero-ratio, two-user-sketch, random")
      ->required();
  generate->add_option("--m", o.m, "sqrt2 phase length, or resources for random");
  generate->add_option("--k", o.k, "sqrt2 third-phase length");
  generate->add_option("--n", o.n, "zero-ratio size, or users for random");
  generate->add_option("--T", o.T, "epochs for random");
  generate->add_option("--eps", o.eps, "epsilon");
  generate->add_option("--delta", o.delta, "delta");
  generate->add_option("--w", o.w, "weight of the groups");
  generate->add_option("--n1", o.n1, "first group size (default: smallest valid)");
  generate->add_option("--n2", o.n2, "second group size (default: smallest valid)");
  generate->add_flag("--no-slack-check", o.no_slack_check, "Build even when a slack inequality fails");

  auto* deviate = app.add_subcommand("deviate", "Search for the best coalition deviation");
  deviate->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
  deviate->add_option("--coalition", o.coalition, "Comma-separated 1-based users")->required();
  deviate->add_option("--grid", o.grid, "Demand multipliers, e.g. 0,1/2,1");
  deviate->add_option("--epochs", o.epochs, "Comma-separated 1-based epochs open to deviation");
  deviate->add_option("--exhaustive-budget", o.budget, "Largest profile space searched exhaustively");
  deviate->add_flag("--exhaustive", o.exhaustive, "Fail instead of sampling when the budget is exceeded");
  deviate->add_flag("--overreport", o.overreport, "Also run the over-report search");

  auto* check = app.add_subcommand("check", "Run property checks on a scenario or a named suite");
  check->add_option("--scenario", o.scenario, "Scenario JSON file");
  check->add_option("--coalition", o.coalition, "Coalition for the incentive checks");
  check->add_option("--grid", o.grid, "Demand multipliers");
  check->add_option("--suite", o.suite, "paper-tables, random or zero-ratio");
  check->add_option("--seeds", o.seeds, "Number of seeds for the random suite");
  check->add_option("--exhaustive-budget", o.budget, "Largest profile space searched exhaustively");
  check->add_option("--tolerance", o.tolerance, "Allowed negative slack for float-imported scenarios");

  for (auto* sub : {simulate, generate, deviate, check}) {
    sub->add_option("--seed", o.seed, "Random seed (recorded in the output)");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--format", o.format, "table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*simulate) return cmd_simulate(o, out);
    if (*generate) return cmd_generate(o, out);
    if (*deviate) return cmd_deviate(o, out);
    if (*check) return cmd_check(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const SearchBudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace fairshare::cli
