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

#include "fairshare/strategy.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "fairshare/parallel.hpp"

namespace fairshare {

namespace {

RatioEntry make_ratio(const Rational& deviated, const Rational& truthful) {
  RatioEntry e;
  if (sgn(truthful) > 0) {
    e.kind = RatioEntry::Kind::Finite;
    e.value = deviated / truthful;
  } else if (sgn(deviated) > 0) {
    e.kind = RatioEntry::Kind::Infinite;
  }
  return e;
}

}  // namespace

bool ratio_less(const RatioEntry& a, const RatioEntry& b) {
  if (a.kind != b.kind) {
    auto rank = [](RatioEntry::Kind k) {
      switch (k) {
        case RatioEntry::Kind::Undefined:
          return 0;
        case RatioEntry::Kind::Finite:
          return 1;
        case RatioEntry::Kind::Infinite:
          return 2;
      }
      return 0;
    };
    return rank(a.kind) < rank(b.kind);
  }
  return a.kind == RatioEntry::Kind::Finite && a.value < b.value;
}

std::vector<RatioEntry> ratio_series(const Trace& truthful, const Trace& deviated,
                                     const std::set<std::size_t>& coalition) {
  std::vector<RatioEntry> out;
  out.reserve(truthful.epochs_count());
  for (std::size_t t = 0; t < truthful.epochs_count(); ++t) {
    Rational u = 0, u_hat = 0;
    for (auto i : coalition) {
      u += truthful.cumulative_utility[t][i];
      u_hat += deviated.cumulative_utility[t][i];
    }
    out.push_back(make_ratio(u_hat, u));
  }
  return out;
}

namespace {

void summarize(DeviationOutcome& o) {
  o.max_ratio = RatioEntry{};
  o.argmax_epoch = 0;
  for (std::size_t t = 0; t < o.gamma.size(); ++t) {
    if (o.gamma[t].defined() && (!o.max_ratio.defined() || ratio_less(o.max_ratio, o.gamma[t]))) {
      o.max_ratio = o.gamma[t];
      o.argmax_epoch = t;
    }
  }
}

}  // namespace

DeviationOutcome incentive_ratio(const Scenario& s, const ReportProfile& profile, const Trace& truthful,
                                 const RunOptions& options) {
  if (profile.coalition.empty()) throw std::invalid_argument("coalition must be nonempty");
  DeviationOutcome o;
  o.coalition = profile.coalition;
  RunOptions opts = options;
  opts.truthful_prefix = &truthful;
  o.deviated = run(s, profile, opts);
  o.truthful = truthful;
  o.gamma = ratio_series(o.truthful, o.deviated, o.coalition);
  summarize(o);
  return o;
}

DeviationOutcome incentive_ratio(const Scenario& s, const ReportProfile& profile) {
  Trace truthful = run(s);
  return incentive_ratio(s, profile, truthful);
}

SearchConfig overreport_config(SearchConfig base) {
  if (std::find(base.demand_grid.begin(), base.demand_grid.end(), Rational(2)) == base.demand_grid.end()) {
    base.demand_grid.push_back(Rational(2));
  }
  base.include_unbounded = true;
  base.ratio_perturbations = true;
  return base;
}

namespace {

struct SlotOption {
  UserEpochType type;
  bool misreport = false;  // over-reported demand or altered ratios
};

struct Slot {
  std::size_t user;
  std::size_t epoch;
  std::vector<SlotOption> options;  // options[0] is truthful
};

std::vector<std::vector<Rational>> ratio_variants(const std::vector<Rational>& a) {
  std::vector<std::vector<Rational>> out;
  auto push = [&](std::vector<Rational> v) {
    if (v == a) return;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
  };
  const std::size_t m = a.size();
  if (m < 2) return out;
  push(std::vector<Rational>(m, Rational(1)));
  std::size_t dominant = static_cast<std::size_t>(std::max_element(a.begin(), a.end()) - a.begin());
  for (std::size_t q = 0; q < m; ++q) {
    if (a[q] >= 1) continue;
    auto halved = a;
    halved[q] /= 2;
    push(halved);
    auto raised = a;
    raised[q] = (a[q] + 1) / 2;
    push(raised);
    auto swapped = a;
    std::swap(swapped[q], swapped[dominant]);
    push(swapped);
  }
  return out;
}

std::vector<SlotOption> slot_options(const Scenario& s, std::size_t user, std::size_t epoch,
                                     const SearchConfig& config, bool allow_misreport) {
  const auto& truth = s.truth[user][epoch];
  std::vector<SlotOption> out{{truth, false}};

  Rational max_ratio = 0;
  for (const auto& a : truth.ratios) max_ratio = max_of(max_ratio, a);
  const Rational reach = s.capacities[epoch] / max_ratio;

  std::vector<Demand> demands;
  auto add_demand = [&](Demand d) {
    if (std::find(demands.begin(), demands.end(), d) == demands.end()) demands.push_back(std::move(d));
  };
  add_demand(truth.demand);
  for (const auto& c : config.demand_grid) {
    if (truth.demand.is_unbounded()) {
      add_demand(c >= 1 ? Demand::unbounded() : Demand(c * reach));
    } else {
      add_demand(Demand(c * truth.demand.value()));
    }
  }
  if (config.include_unbounded) add_demand(Demand::unbounded());

  std::vector<std::vector<Rational>> ratios{truth.ratios};
  if (allow_misreport && config.ratio_perturbations) {
    for (auto& v : ratio_variants(truth.ratios)) ratios.push_back(std::move(v));
  }

  for (std::size_t k = 0; k < ratios.size(); ++k) {
    for (const auto& d : demands) {
      const bool over = truth.demand < d;
      const bool misreport = over || k > 0;
      if (misreport && !allow_misreport) continue;
      UserEpochType type{ratios[k], d};
      if (type == truth) continue;
      out.push_back({std::move(type), misreport});
    }
  }
  return out;
}

std::vector<Slot> build_slots(const Scenario& s, const std::set<std::size_t>& coalition, const SearchConfig& config,
                              bool allow_misreport) {
  for (auto u : coalition) {
    if (u >= s.n) throw std::invalid_argument("coalition member out of range");
  }
  std::vector<std::size_t> epochs = config.epochs;
  if (epochs.empty()) {
    for (std::size_t t = 0; t < s.T; ++t) epochs.push_back(t);
  }
  std::sort(epochs.begin(), epochs.end());
  epochs.erase(std::unique(epochs.begin(), epochs.end()), epochs.end());

  std::vector<Slot> slots;
  for (auto t : epochs) {
    if (t >= s.T) throw std::invalid_argument("search epoch out of range");
    for (auto u : coalition) {
      Slot slot{u, t, slot_options(s, u, t, config, allow_misreport)};
      if (slot.options.size() > 1) slots.push_back(std::move(slot));
    }
  }
  return slots;
}

std::uint64_t space_size(const std::vector<Slot>& slots) {
  std::uint64_t size = 1;
  for (const auto& slot : slots) {
    if (size > std::numeric_limits<std::uint64_t>::max() / slot.options.size()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    size *= slot.options.size();
  }
  return size;
}

ReportProfile to_profile(const std::vector<Slot>& slots, const std::vector<std::size_t>& choice,
                         const std::set<std::size_t>& coalition) {
  ReportProfile p;
  p.coalition = coalition;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (choice[k] == 0) continue;
    p.overrides.emplace(std::make_pair(slots[k].user, slots[k].epoch), slots[k].options[choice[k]].type);
  }
  return p;
}

// Ranks candidates by ratio, then by lexicographically smaller choice vector.
struct Best {
  RatioEntry ratio;
  std::vector<std::size_t> choice;
  bool found = false;

  void offer(const RatioEntry& r, const std::vector<std::size_t>& c) {
    if (!found || ratio_less(ratio, r) || (!ratio_less(r, ratio) && c < choice)) {
      ratio = r;
      choice = c;
      found = true;
    }
  }
};

// Depth-first enumeration over epochs; sibling profiles share solved prefixes.
class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const Scenario& s, const std::set<std::size_t>& coalition, const std::vector<Slot>& slots,
                   const Trace& truthful, bool require_misreport, bool certify)
      : s_(s), coalition_(coalition), slots_(slots), truthful_(truthful),
        require_misreport_(require_misreport), certify_(certify) {
    by_epoch_.assign(s.T, {});
    for (std::size_t k = 0; k < slots.size(); ++k) by_epoch_[slots[k].epoch].push_back(k);
    truthful_utility_.assign(s.T, Rational(0));
    for (std::size_t t = 0; t < s.T; ++t) {
      for (auto i : coalition) truthful_utility_[t] += truthful.cumulative_utility[t][i];
    }
    first_epoch_ = slots.empty() ? s.T : slots.front().epoch;
  }

  struct Node {
    std::vector<Rational> cumulative;
    Rational utility;  // coalition cumulative utility under deviation
    RatioEntry running_max;
    bool misreported = false;
    std::vector<std::size_t> choice;
  };

  Node root() const {
    Node node;
    node.choice.assign(slots_.size(), 0);
    if (first_epoch_ == 0) {
      node.cumulative.assign(s_.n, Rational(0));
      node.utility = 0;
      return node;
    }
    const std::size_t last = first_epoch_ - 1;
    node.cumulative = truthful_.cumulative[last];
    for (std::size_t t = 0; t < first_epoch_; ++t) {
      RatioEntry r = make_ratio(truthful_utility_[t], truthful_utility_[t]);
      if (r.defined() && (!node.running_max.defined() || ratio_less(node.running_max, r))) node.running_max = r;
    }
    node.utility = truthful_utility_[last];
    return node;
  }

  std::size_t first_epoch() const { return first_epoch_; }

  /// Number of option combinations in epoch t.
  std::size_t combos(std::size_t t) const {
    std::size_t c = 1;
    for (auto k : by_epoch_[t]) c *= slots_[k].options.size();
    return c;
  }

  /// Applies combination `combo` at epoch t to a copy of `node`.
  Node step(const Node& node, std::size_t t, std::size_t combo) {
    Node next = node;
    // Decode with the first slot most significant.
    const auto& ks = by_epoch_[t];
    for (std::size_t idx = ks.size(); idx-- > 0;) {
      const auto k = ks[idx];
      const auto radix = slots_[k].options.size();
      next.choice[k] = combo % radix;
      combo /= radix;
      if (next.choice[k] != 0 && slots_[k].options[next.choice[k]].misreport) next.misreported = true;
    }

    EpochInput input;
    input.cumulative = node.cumulative;
    input.types.reserve(s_.n);
    for (std::size_t i = 0; i < s_.n; ++i) input.types.push_back(s_.truth[i][t]);
    for (auto k : ks) {
      if (next.choice[k] != 0) input.types[slots_[k].user] = slots_[k].options[next.choice[k]].type;
    }
    input.weights = s_.weights;
    input.alpha = s_.alpha;
    input.capacity = s_.capacities[t];
    EpochAllocation alloc = allocate_epoch(input);
    if (certify_) {
      ++certified_epochs;
      if (!check_bottleneck_optimality(input, alloc).empty()) ++certification_failures;
    }

    for (std::size_t i = 0; i < s_.n; ++i) next.cumulative[i] += alloc.allocations[i];
    for (auto i : coalition_) {
      const auto& truth = s_.truth[i][t];
      const auto& reported = input.types[i];
      Rational penalty = 1;
      if (reported.ratios != truth.ratios) penalty = ratio_penalty(truth.ratios, reported.ratios).value;
      next.utility += truth.demand.cap(alloc.allocations[i] * penalty);
    }
    RatioEntry r = make_ratio(next.utility, truthful_utility_[t]);
    if (r.defined() && (!next.running_max.defined() || ratio_less(next.running_max, r))) next.running_max = r;
    return next;
  }

  void descend(const Node& node, std::size_t t, Best& best) {
    if (t == s_.T) {
      ++evaluated;
      if (require_misreport_ && !node.misreported) return;
      best.offer(node.running_max, node.choice);
      return;
    }
    const std::size_t n_combos = combos(t);
    for (std::size_t c = 0; c < n_combos; ++c) descend(step(node, t, c), t + 1, best);
  }

  std::uint64_t evaluated = 0;
  std::uint64_t certified_epochs = 0;
  std::uint64_t certification_failures = 0;

 private:
  const Scenario& s_;
  const std::set<std::size_t>& coalition_;
  const std::vector<Slot>& slots_;
  const Trace& truthful_;
  bool require_misreport_;
  bool certify_;
  std::vector<std::vector<std::size_t>> by_epoch_;
  std::vector<Rational> truthful_utility_;
  std::size_t first_epoch_ = 0;
};

RatioEntry evaluate(const Scenario& s, const std::vector<Slot>& slots, const std::vector<std::size_t>& choice,
                    const std::set<std::size_t>& coalition, const Trace& truthful, SearchResult& stats,
                    bool certify) {
  RunOptions opts;
  opts.certify = certify;
  auto outcome = incentive_ratio(s, to_profile(slots, choice, coalition), truthful, opts);
  ++stats.evaluated;
  stats.certified_epochs += outcome.deviated.certified_epochs;
  stats.certification_failures += outcome.deviated.certification_failures;
  return outcome.max_ratio;
}

SearchResult search(const Scenario& s, const std::set<std::size_t>& coalition, const SearchConfig& config,
                    bool overreport) {
  if (coalition.empty()) throw std::invalid_argument("coalition must be nonempty");
  const auto slots = build_slots(s, coalition, config, overreport);
  RunOptions truthful_opts;
  truthful_opts.certify = config.certify;
  const Trace truthful = run(s, {}, truthful_opts);

  SearchResult result;
  result.space_size = space_size(slots);
  result.certified_epochs = truthful.certified_epochs;
  result.certification_failures = truthful.certification_failures;

  auto has_misreport_option = [&] {
    for (const auto& slot : slots) {
      for (const auto& o : slot.options) {
        if (o.misreport) return true;
      }
    }
    return false;
  };
  if (overreport && !has_misreport_option()) return result;

  Best best;
  if (result.space_size <= config.exhaustive_budget) {
    result.exhaustive = true;
    ExhaustiveSearch ex(s, coalition, slots, truthful, overreport, config.certify);
    const auto root = ex.root();
    const std::size_t t0 = ex.first_epoch();
    if (t0 >= s.T) {
      ex.descend(root, t0, best);
      result.evaluated += ex.evaluated;
    } else {
      // Branches of the first deviating epoch are independent work items.
      const std::size_t branches = ex.combos(t0);
      std::vector<Best> partial(branches);
      std::vector<ExhaustiveSearch> workers(branches, ex);
      parallel_for(branches, [&](std::size_t b) {
        workers[b].descend(workers[b].step(root, t0, b), t0 + 1, partial[b]);
      });
      for (std::size_t b = 0; b < branches; ++b) {
        if (partial[b].found) best.offer(partial[b].ratio, partial[b].choice);
        result.evaluated += workers[b].evaluated;
        result.certified_epochs += workers[b].certified_epochs;
        result.certification_failures += workers[b].certification_failures;
      }
    }
  } else {
    if (config.require_exhaustive) {
      throw SearchBudgetExceeded("search space of " + std::to_string(result.space_size) +
                                 " profiles exceeds the exhaustive budget of " +
                                 std::to_string(config.exhaustive_budget));
    }
    std::mt19937_64 rng(config.seed);
    std::vector<std::size_t> misreport_slots;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      for (const auto& o : slots[k].options) {
        if (o.misreport) {
          misreport_slots.push_back(k);
          break;
        }
      }
    }
    auto admissible = [&](const std::vector<std::size_t>& c) {
      if (!overreport) return true;
      for (std::size_t k = 0; k < slots.size(); ++k) {
        if (c[k] != 0 && slots[k].options[c[k]].misreport) return true;
      }
      return false;
    };
    for (std::size_t restart = 0; restart < std::max<std::size_t>(1, config.random_restarts); ++restart) {
      std::vector<std::size_t> choice(slots.size());
      for (std::size_t k = 0; k < slots.size(); ++k) choice[k] = rng() % slots[k].options.size();
      if (!admissible(choice)) {
        const auto k = misreport_slots[rng() % misreport_slots.size()];
        std::vector<std::size_t> candidates;
        for (std::size_t o = 0; o < slots[k].options.size(); ++o) {
          if (slots[k].options[o].misreport) candidates.push_back(o);
        }
        choice[k] = candidates[rng() % candidates.size()];
      }
      RatioEntry current = evaluate(s, slots, choice, coalition, truthful, result, config.certify);
      best.offer(current, choice);
      // Coordinate ascent from the random start.
      for (std::size_t round = 0; round < config.local_search_rounds; ++round) {
        bool improved = false;
        for (std::size_t k = 0; k < slots.size(); ++k) {
          for (std::size_t o = 0; o < slots[k].options.size(); ++o) {
            if (o == choice[k]) continue;
            auto trial = choice;
            trial[k] = o;
            if (!admissible(trial)) continue;
            RatioEntry r = evaluate(s, slots, trial, coalition, truthful, result, config.certify);
            best.offer(r, trial);
            if (ratio_less(current, r)) {
              current = r;
              choice = std::move(trial);
              improved = true;
            }
          }
        }
        if (!improved) break;
      }
    }
  }

  if (best.found) {
    RunOptions opts;
    result.best = incentive_ratio(s, to_profile(slots, best.choice, coalition), truthful, opts);
  }
  return result;
}

}  // namespace

SearchResult search_best_deviation(const Scenario& s, const std::set<std::size_t>& coalition,
                                   const SearchConfig& config) {
  return search(s, coalition, config, false);
}

SearchResult search_overreport(const Scenario& s, const std::set<std::size_t>& coalition,
                               const SearchConfig& config) {
  return search(s, coalition, config, true);
}

IntervalAnalysis interval_analysis(const Trace& truthful, const Trace& deviated, std::size_t user) {
  IntervalAnalysis out;
  const std::size_t T = std::min(truthful.epochs_count(), deviated.epochs_count());
  out.f.reserve(T);
  auto total = [&](const Trace& tr, std::size_t t) -> Rational {
    return tr.cumulative[t][user];
  };

  std::optional<DeviationInterval> open;
  bool ahead_prev = false;   // R-hat^{t-1} > R^{t-1}
  bool behind_prev = false;  // R-hat^{t-1} < R^{t-1}
  for (std::size_t t = 0; t < T; ++t) {
    const Rational R = total(truthful, t);
    const Rational R_hat = total(deviated, t);
    const Rational r = truthful.allocation[t][user];
    const Rational r_hat = deviated.allocation[t][user];
    out.f.push_back(min_of(positive_part(r - r_hat), positive_part(R - R_hat)));

    const bool ahead = R_hat > R;
    const bool behind = R_hat < R;
    if (!open && ahead && !ahead_prev) {
      open = DeviationInterval{t, std::nullopt, t, {}};
    } else if (open && behind && !behind_prev) {
      open->end = t;
      out.intervals.push_back(*open);
      open.reset();
    }
    if (open) {
      RatioEntry ratio = make_ratio(R_hat, R);
      if (!open->best_ratio.defined() || ratio_less(open->best_ratio, ratio)) {
        open->best_ratio = ratio;
        open->best_epoch = t;
      }
    }
    ahead_prev = ahead;
    behind_prev = behind;
  }
  if (open) out.intervals.push_back(*open);

  for (std::size_t l = 0; l < out.intervals.size(); ++l) {
    const auto& iv = out.intervals[l];
    if (iv.end && *iv.end <= iv.start) throw std::logic_error("interval end precedes its start");
    if (l > 0) {
      const auto& prev = out.intervals[l - 1];
      if (!prev.end || *prev.end >= iv.start) throw std::logic_error("intervals are not interleaved");
    }
  }
  return out;
}

}  // namespace fairshare
