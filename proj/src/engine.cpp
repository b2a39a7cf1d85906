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

#include "fairshare/engine.hpp"

#include <algorithm>

namespace fairshare {

RatioPenalty ratio_penalty(const std::vector<Rational>& true_ratios,
                           const std::vector<Rational>& reported_ratios) {
  RatioPenalty out;
  bool first = true;
  for (std::size_t q = 0; q < true_ratios.size(); ++q) {
    if (sgn(true_ratios[q]) <= 0) continue;
    Rational r = reported_ratios[q] / true_ratios[q];
    if (first || r < out.value) out.value = r;
    first = false;
  }
  if (first) out.value = 1;
  out.degenerate = sgn(out.value) == 0;
  return out;
}

Trace run(const Scenario& s, const ReportProfile& profile, const RunOptions& options) {
  Trace trace;
  trace.profile = profile;
  trace.allocation.reserve(s.T);
  trace.cumulative.reserve(s.T);
  trace.ratio_penalty.reserve(s.T);
  trace.utility.reserve(s.T);
  trace.cumulative_utility.reserve(s.T);
  trace.epochs.reserve(s.T);

  std::size_t start = 0;
  if (const Trace* prefix = options.truthful_prefix) {
    start = std::min(profile.first_override_epoch(s.T), prefix->epochs_count());
    for (std::size_t t = 0; t < start; ++t) {
      trace.allocation.push_back(prefix->allocation[t]);
      trace.cumulative.push_back(prefix->cumulative[t]);
      trace.ratio_penalty.push_back(prefix->ratio_penalty[t]);
      trace.utility.push_back(prefix->utility[t]);
      trace.cumulative_utility.push_back(prefix->cumulative_utility[t]);
      trace.epochs.push_back(prefix->epochs[t]);
    }
  }

  std::vector<Rational> cumulative(s.n, Rational(0));
  std::vector<Rational> cumulative_utility(s.n, Rational(0));
  if (start > 0) {
    cumulative = trace.cumulative[start - 1];
    cumulative_utility = trace.cumulative_utility[start - 1];
  }

  for (std::size_t t = start; t < s.T; ++t) {
    EpochInput input = make_epoch_input(s, profile, t, cumulative);
    EpochAllocation alloc = allocate_epoch(input);
    if (options.certify) {
      ++trace.certified_epochs;
      if (!check_bottleneck_optimality(input, alloc).empty()) ++trace.certification_failures;
    }

    std::vector<Rational> penalty(s.n, Rational(1));
    std::vector<Rational> utility(s.n);
    for (std::size_t i = 0; i < s.n; ++i) {
      const auto& truth = s.truth[i][t];
      const auto& reported = input.types[i];
      if (reported.ratios != truth.ratios) {
        auto p = ratio_penalty(truth.ratios, reported.ratios);
        if (p.degenerate) ++trace.degenerate_reports;
        penalty[i] = std::move(p.value);
      }
      const Rational& r = alloc.allocations[i];
      utility[i] = truth.demand.cap(r * penalty[i]);
      cumulative[i] += r;
      cumulative_utility[i] += utility[i];
    }

    trace.allocation.push_back(alloc.allocations);
    trace.cumulative.push_back(cumulative);
    trace.ratio_penalty.push_back(std::move(penalty));
    trace.utility.push_back(std::move(utility));
    trace.cumulative_utility.push_back(cumulative_utility);
    trace.epochs.push_back(std::move(alloc));
  }
  return trace;
}

}  // namespace fairshare
