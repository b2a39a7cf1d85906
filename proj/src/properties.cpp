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

#include "fairshare/properties.hpp"

#include <random>

namespace fairshare {

void PropertyReport::merge(const PropertyReport& other) {
  checked += other.checked;
  vacuous += other.vacuous;
  if (other.min_slack && (!min_slack || *other.min_slack < *min_slack)) min_slack = other.min_slack;
  if (!other.passed && passed) {
    passed = false;
    counterexample = other.counterexample;
  }
}

Rational rho(const Scenario& s, std::size_t user) {
  if (user >= s.n) throw std::out_of_range("user index out of range");
  Rational best = 0;
  bool any = false;
  for (std::size_t t = 0; t < s.T; ++t) {
    const auto& mine = s.truth[user][t].ratios;
    for (std::size_t k = 0; k < s.n; ++k) {
      if (k == user) continue;
      const auto& theirs = s.truth[k][t].ratios;
      for (std::size_t q = 0; q < s.m; ++q) {
        if (sgn(mine[q]) == 0) continue;
        if (sgn(theirs[q]) == 0) throw RhoUndefined("rho undefined for zero-ratio instance");
        Rational v = s.weights[user] * mine[q] / (s.weights[k] * theirs[q]);
        if (!any || v > best) best = v;
        any = true;
      }
    }
  }
  return best;
}

namespace {

Rational max_ratio(const std::vector<Rational>& ratios) {
  Rational best = 0;
  for (const auto& a : ratios) best = max_of(best, a);
  return best;
}

}  // namespace

PropertyReport check_envy_freeness(const Trace& trace, const Scenario& s, const Rational& tolerance) {
  PropertyReport report;
  report.name = "envy-freeness";
  if (s.relaxed_normalization) {
    report.applicable = false;
    report.detail = "ratios are not normalized";
    return report;
  }
  const std::size_t T = std::min(trace.epochs_count(), s.T);
  for (std::size_t i = 0; i < s.n; ++i) {
    for (std::size_t j = 0; j < s.n; ++j) {
      if (i == j) continue;
      Rational envied = 0;
      for (std::size_t t = 0; t < T; ++t) {
        const auto& ti = s.truth[i][t];
        const auto& tj = s.truth[j][t];
        // Usable amount of j's bundle for i: the scarcest resource i needs.
        std::optional<Rational> scale;
        for (std::size_t q = 0; q < s.m; ++q) {
          if (sgn(ti.ratios[q]) == 0) continue;
          Rational v = tj.ratios[q] / ti.ratios[q];
          if (!scale || v < *scale) scale = v;
        }
        const Rational bundle = s.weights[i] / s.weights[j] * trace.allocation[t][j] * scale.value_or(Rational(0));
        envied += ti.demand.cap(bundle);
        const Rational& own = trace.cumulative_utility[t][i];
        report.witness(own - envied, tolerance, [&] {
          return Counterexample{"user envies another user's weighted bundle",
                                t,
                                i,
                                j,
                                {{"U_i", own}, {"envied", envied}},
                                s};
        });
      }
    }
  }
  return report;
}

PropertyReport check_sharing_incentives(const Trace& trace, const Scenario& s, const Rational& tolerance) {
  PropertyReport report;
  report.name = "sharing-incentives";
  report.detail = "alpha = " + to_string(s.alpha);
  const std::size_t T = std::min(trace.epochs_count(), s.T);
  const Rational wsum = s.weight_sum();
  for (std::size_t i = 0; i < s.n; ++i) {
    Rational benchmark = 0;
    for (std::size_t t = 0; t < T; ++t) {
      const auto& type = s.truth[i][t];
      benchmark += type.demand.cap(s.capacities[t] * s.weights[i] / (wsum * max_ratio(type.ratios)));
      const Rational target = s.alpha * benchmark;
      const Rational& own = trace.cumulative_utility[t][i];
      report.witness(own - target, tolerance, [&] {
        return Counterexample{"user falls below alpha times its fair-share utility",
                              t,
                              i,
                              std::nullopt,
                              {{"U_i", own}, {"alpha_fair_share", target}},
                              s};
      });
    }
  }
  return report;
}

PropertyReport check_pareto(const EpochInput& input, const EpochAllocation& alloc, const Rational& tolerance) {
  PropertyReport report;
  report.name = "pareto";
  const std::size_t n = input.users();
  const std::size_t m = input.resources();
  std::vector<Rational> usage(m, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t q = 0; q < m; ++q) usage[q] += alloc.allocations[i] * input.types[i].ratios[q];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& type = input.types[i];
    const Rational& r = alloc.allocations[i];
    // Margin: 0 when satisfied or blocked, otherwise minus the smallest
    // leftover capacity on any resource the user needs.
    if (!type.demand.is_unbounded() && r >= type.demand.value()) {
      report.witness(Rational(0), tolerance, [] { return Counterexample{}; });
      continue;
    }
    std::optional<Rational> leftover;
    for (std::size_t q = 0; q < m; ++q) {
      if (sgn(type.ratios[q]) == 0) continue;
      Rational free = input.capacity - usage[q];
      if (!leftover || free < *leftover) leftover = free;
    }
    const Rational slack = leftover ? Rational(-*leftover) : Rational(0);
    report.witness(slack, tolerance, [&] {
      return Counterexample{"unsatisfied user has slack on every resource it uses",
                            std::nullopt,
                            i,
                            std::nullopt,
                            {{"r_i", r}, {"min_leftover", leftover.value_or(Rational(0))}},
                            std::nullopt};
    });
  }
  return report;
}

PropertyReport check_pareto(const Trace& trace, const Scenario& s, const Rational& tolerance) {
  PropertyReport report;
  report.name = "pareto";
  const std::size_t T = std::min(trace.epochs_count(), s.T);
  for (std::size_t t = 0; t < T; ++t) {
    const std::vector<Rational> before = t == 0 ? std::vector<Rational>(s.n, Rational(0)) : trace.cumulative[t - 1];
    EpochInput input = make_epoch_input(s, trace.profile, t, before);
    std::vector<Rational> allocations = trace.allocation[t];
    PropertyReport epoch = check_pareto(input, describe_allocation(input, std::move(allocations)), tolerance);
    if (!epoch.passed) {
      epoch.counterexample->epoch = t;
      epoch.counterexample->scenario = s;
    }
    report.merge(epoch);
  }
  return report;
}

PropertyReport check_no_overreport(const Scenario& s, const std::set<std::size_t>& coalition,
                                   const SearchConfig& config, const std::optional<SearchConfig>& over_config) {
  PropertyReport report;
  report.name = "no-over-report";
  report.applicable = s.m == 1 ? !s.relaxed_normalization : all_ratios_positive(s);
  const SearchResult under = search_best_deviation(s, coalition, config);
  const SearchResult over = search_overreport(s, coalition, over_config ? *over_config : overreport_config(config));
  // An empty under-report search still has the truthful profile, ratio 1.
  RatioEntry under_best = under.best_ratio();
  if (!under_best.defined()) under_best = RatioEntry{RatioEntry::Kind::Finite, Rational(1)};
  const RatioEntry over_best = over.best_ratio();

  auto describe = [](const RatioEntry& r) {
    switch (r.kind) {
      case RatioEntry::Kind::Finite:
        return to_string(r.value);
      case RatioEntry::Kind::Infinite:
        return std::string("inf");
      case RatioEntry::Kind::Undefined:
        break;
    }
    return std::string("undefined");
  };
  auto how = [](const SearchResult& r) { return std::string(r.exhaustive ? " (exhaustive)" : " (sampled)"); };
  report.detail = "under-report optimum " + describe(under_best) + how(under) + ", over-report optimum " +
                  describe(over_best) + how(over);

  ++report.checked;
  if (over_best.defined() && ratio_less(under_best, over_best)) {
    report.passed = false;
    Counterexample c;
    c.description = "over-reporting beats every under-report";
    c.user = *coalition.begin();
    if (under_best.kind == RatioEntry::Kind::Finite) c.values.push_back({"under_gamma", under_best.value});
    if (over_best.kind == RatioEntry::Kind::Finite) c.values.push_back({"over_gamma", over_best.value});
    c.scenario = s;
    if (over.best) {
      c.epoch = over.best->argmax_epoch;
    }
    report.counterexample = std::move(c);
    report.min_slack = under_best.kind == RatioEntry::Kind::Finite && over_best.kind == RatioEntry::Kind::Finite
                           ? std::optional<Rational>(under_best.value - over_best.value)
                           : std::nullopt;
  } else if (under_best.kind == RatioEntry::Kind::Finite && over_best.kind == RatioEntry::Kind::Finite) {
    report.min_slack = under_best.value - over_best.value;
  }
  return report;
}

PropertyReport check_more_less(const EpochInput& bar, const EpochInput& hat) {
  PropertyReport report;
  report.name = "more-less";
  const std::size_t n = bar.users();
  if (hat.users() != n) throw std::invalid_argument("paired inputs differ in user count");
  auto positive = [](const EpochInput& in) {
    for (const auto& type : in.types) {
      for (const auto& a : type.ratios) {
        if (sgn(a) <= 0) return false;
      }
    }
    return true;
  };
  if (!positive(bar) || !positive(hat)) {
    report.applicable = false;
    report.vacuous = 1;
    return report;
  }
  const auto rb = allocate_epoch(bar);
  const auto rh = allocate_epoch(hat);
  std::vector<Rational> Rb(n), Rh(n);
  for (std::size_t k = 0; k < n; ++k) {
    Rb[k] = (bar.cumulative[k] + rb.allocations[k]) / bar.weights[k];
    Rh[k] = (hat.cumulative[k] + rh.allocations[k]) / hat.weights[k];
  }
  bool triggered = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(rb.allocations[i] < rh.allocations[i] && hat.types[i].demand <= bar.types[i].demand)) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (!(rb.allocations[j] > rh.allocations[j] && bar.types[j].demand <= hat.types[j].demand)) continue;
      triggered = true;
      auto make = [&] {
        return Counterexample{"paired allocations break the more-less ordering",
                              std::nullopt,
                              i,
                              j,
                              {{"Rbar_i/w_i", Rb[i]}, {"Rbar_j/w_j", Rb[j]}, {"Rhat_i/w_i", Rh[i]}, {"Rhat_j/w_j", Rh[j]}},
                              std::nullopt};
      };
      report.witness(Rb[i] - Rb[j], Rational(0), make);
      report.witness(Rh[j] - Rh[i], Rational(0), make);
    }
  }
  if (!triggered) report.vacuous = 1;
  return report;
}

std::pair<EpochInput, EpochInput> more_less_sample(std::size_t users, std::size_t resources, std::uint64_t seed) {
  if (users < 2 || resources < 1) throw std::invalid_argument("need at least 2 users and 1 resource");
  std::mt19937_64 rng(seed);
  auto draw = [&](long lo, long hi, long den) -> Rational {
    return make_rational(lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)), den);
  };
  EpochInput bar;
  bar.capacity = draw(2, 8, 2);
  const long alpha_steps = static_cast<long>(rng() % 3);
  bar.alpha = make_rational(alpha_steps, 2);
  bar.weights.resize(users);
  const bool weighted = rng() % 2 == 0;
  for (auto& w : bar.weights) w = weighted ? draw(1, 4, 1) : Rational(1);
  bar.types.resize(users);
  for (auto& type : bar.types) {
    type.ratios.assign(resources, Rational(1));
    if (resources > 1) {
      for (auto& a : type.ratios) a = draw(1, 4, 4);
      type.ratios[rng() % resources] = 1;
    }
  }
  EpochInput hat = bar;
  for (std::size_t k = 0; k < users; ++k) {
    bar.cumulative.push_back(draw(0, 8, 2));
    hat.cumulative.push_back(draw(0, 8, 2));
    bar.types[k].demand = rng() % 5 == 0 ? Demand::unbounded() : Demand(draw(0, 8, 2));
    hat.types[k].demand = rng() % 2 == 0 ? bar.types[k].demand : Demand(draw(0, 8, 2));
  }
  return {std::move(bar), std::move(hat)};
}

std::optional<UpperBound> applicable_upper_bound(const Scenario& s, const std::set<std::size_t>& coalition) {
  if (coalition.empty()) return std::nullopt;
  const bool single_resource = s.m == 1 && !s.relaxed_normalization;
  if (single_resource) {
    if (coalition.size() == 1) {
      const std::size_t i = *coalition.begin();
      Rational worst = 0;
      for (std::size_t j = 0; j < s.n; ++j) {
        if (j == i) continue;
        worst = max_of(worst, s.weights[i] / (s.weights[i] + s.weights[j]));
      }
      return UpperBound{1 + worst, "single resource, single deviator: 1 + max_j w_i/(w_i + w_j)"};
    }
    return UpperBound{Rational(2), "single resource, coalition: 2"};
  }
  if (coalition.size() != 1 || !all_ratios_positive(s)) return std::nullopt;
  const std::size_t i = *coalition.begin();
  return UpperBound{1 + rho(s, i), "positive ratios, single deviator: 1 + rho_i"};
}

PropertyReport check_upper_bounds(const DeviationOutcome& outcome, const Scenario& s) {
  PropertyReport report;
  report.name = "upper-bound";
  const auto bound = applicable_upper_bound(s, outcome.coalition);
  if (!bound) {
    report.applicable = false;
    report.detail = "no bound applies";
    return report;
  }
  report.detail = bound->description + " = " + to_string(bound->value);
  const RatioEntry& g = outcome.max_ratio;
  if (!g.defined()) {
    report.vacuous = 1;
    return report;
  }
  auto make = [&] {
    Counterexample c;
    c.description = "deviation exceeds the upper bound";
    c.epoch = outcome.argmax_epoch;
    c.user = *outcome.coalition.begin();
    if (g.kind == RatioEntry::Kind::Finite) c.values.push_back({"gamma", g.value});
    c.values.push_back({"bound", bound->value});
    c.scenario = s;
    return c;
  };
  if (g.kind == RatioEntry::Kind::Infinite) {
    ++report.checked;
    report.passed = false;
    report.counterexample = make();
    return report;
  }
  report.witness(bound->value - g.value, Rational(0), make);
  return report;
}

}  // namespace fairshare
