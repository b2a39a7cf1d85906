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

#include "fairshare/instances.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace fairshare {

namespace {

Scenario blank(std::size_t n, std::size_t m, std::size_t T) {
  Scenario s;
  s.n = n;
  s.m = m;
  s.T = T;
  s.weights.assign(n, Rational(1));
  s.capacities.assign(T, Rational(0));
  s.truth.assign(n, std::vector<UserEpochType>(T, absent_type(m)));
  return s;
}

UserEpochType single(Demand d) { return UserEpochType{{Rational(1)}, std::move(d)}; }

ReportProfile zero_report(const Scenario& s, std::size_t user, std::size_t epoch) {
  ReportProfile p;
  p.coalition = {user};
  UserEpochType t = s.truth[user][epoch];
  t.demand = Demand(0);
  p.overrides.emplace(std::make_pair(user, epoch), std::move(t));
  return p;
}

Rational pow2_inverse(std::size_t k) {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, k);
  return Rational(mpz_class(1), den);
}

}  // namespace

GeneratedInstance gen_example_10_9() {
  Scenario s = blank(3, 1, 3);
  s.capacities = {Rational(8), Rational(8), Rational(8)};
  const long demand[3][3] = {{8, 8, 8}, {8, 0, 8}, {0, 8, 0}};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t t = 0; t < 3; ++t) s.truth[i][t] = single(Demand(demand[i][t]));
  }
  s.positive_ratios = true;

  GeneratedInstance g;
  g.name = "example-10-9";
  g.scenario = validate_scenario(std::move(s));
  g.deviation = zero_report(g.scenario, 0, 0);
  g.predicted_ratio = Rational(10, 9);
  g.notes = "3 users, 8 units per epoch, alpha = 0; user 1 reports demand 0 in epoch 1";
  return g;
}

std::vector<Rational> sqrt2_levels(std::size_t m) {
  if (m < 1) throw InstanceError("m must be at least 1");
  // Unknowns F_1..F_m; f_i = F_i - F_{i-1} with F_0 = 0.
  // Rows: for i in [1, m-1],
  //   F_m - F_i + f_m/2 - (F_i + f_i) + (F_{i+1} + f_{i+1}) = 0,
  // and F_m + f_m/2 = 1.
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m + 1, Rational(0)));
  auto add_F = [&](std::vector<Rational>& row, std::size_t i, const Rational& c) {
    if (i >= 1) row[i - 1] += c;
  };
  auto add_f = [&](std::vector<Rational>& row, std::size_t i, const Rational& c) {
    add_F(row, i, c);
    add_F(row, i - 1, -c);
  };
  const Rational half(1, 2);
  for (std::size_t i = 1; i < m; ++i) {
    auto& row = a[i - 1];
    add_F(row, m, 1);
    add_F(row, i, -1);
    add_f(row, m, half);
    add_F(row, i, -1);
    add_f(row, i, -1);
    add_F(row, i + 1, 1);
    add_f(row, i + 1, 1);
  }
  auto& last = a[m - 1];
  add_F(last, m, 1);
  add_f(last, m, half);
  last[m] = 1;

  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    while (pivot < m && sgn(a[pivot][col]) == 0) ++pivot;
    if (pivot == m) throw InstanceError("recursion system is singular");
    std::swap(a[pivot], a[col]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || sgn(a[r][col]) == 0) continue;
      const Rational factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= m; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  std::vector<Rational> F(m);
  for (std::size_t i = 0; i < m; ++i) F[i] = a[i][m] / a[i][i];
  return F;
}

double sqrt2_level_closed_form(std::size_t m, std::size_t i) {
  const double r2 = std::sqrt(2.0);
  const double up = std::pow(r2 + 1, static_cast<double>(m + 1));
  const double down = std::pow(r2 - 1, static_cast<double>(m + 1));
  const double di = static_cast<double>(i);
  return (up * (1 - std::pow((2 - r2) / 2, di)) + down * (1 - std::pow((2 + r2) / 2, di))) / (down + up);
}

GeneratedInstance gen_sqrt2(std::size_t m, std::size_t k) {
  if (m < 1 || k < 1) throw InstanceError("m and k must be at least 1");
  const auto levels = sqrt2_levels(m);
  auto F = [&](std::size_t i) -> Rational { return i == 0 ? Rational(0) : levels[i - 1]; };
  auto f = [&](std::size_t i) -> Rational { return F(i) - F(i - 1); };

  for (std::size_t i = 1; i <= m; ++i) {
    if (sgn(f(i)) <= 0) throw InstanceError("level increments are not positive at i = " + std::to_string(i));
    const double closed = sqrt2_level_closed_form(m, i);
    if (std::abs(closed - to_double(F(i))) > 1e-9 * std::max(1.0, std::abs(closed))) {
      throw InstanceError("exact levels disagree with the closed form at i = " + std::to_string(i));
    }
  }
  const Rational half_fm = f(m) / 2;

  // Users: 0 = Alice, 1..m = B_i, m+1..m+k = C_i.
  const std::size_t n = 1 + m + k;
  const std::size_t T = 3 * m + k;
  Scenario s = blank(n, 1, T);
  for (auto& row : s.truth) {
    for (auto& type : row) type = single(Demand(0));
  }
  const std::size_t alice = 0;
  auto B = [](std::size_t i) { return i; };
  auto C = [m](std::size_t i) { return m + i; };

  std::size_t t = 0;
  for (std::size_t i = 1; i <= m; ++i, ++t) {  // phase 1
    s.capacities[t] = F(i);
    s.truth[B(i)][t] = single(Demand(F(i)));
  }
  const std::size_t phase2 = t;
  for (std::size_t i = 1; i <= m; ++i, ++t) {  // phase 2
    s.capacities[t] = f(i);
    s.truth[alice][t] = single(Demand(f(i)));
    s.truth[B(i)][t] = single(Demand(f(i)));
  }
  for (std::size_t i = 1; i <= k; ++i, ++t) {  // phase 3
    s.capacities[t] = F(m);
    s.truth[alice][t] = single(Demand(F(m)));
    s.truth[C(i)][t] = single(Demand(F(m)));
  }
  for (std::size_t j = 1; j <= m; ++j, ++t) {  // phase 4
    const std::size_t i = j == 1 ? m : m - j + 1;
    const Rational c = j == 1 ? f(m) : F(m) - F(i) + half_fm;
    if (sgn(c) <= 0) throw InstanceError("phase-4 capacity is not positive at i = " + std::to_string(i));
    s.capacities[t] = c;
    s.truth[alice][t] = single(Demand(c));
    s.truth[B(i)][t] = single(Demand(c));
  }
  s.positive_ratios = true;

  GeneratedInstance g;
  g.name = "sqrt2";
  g.scenario = validate_scenario(std::move(s));
  g.deviation.coalition = {alice};
  for (std::size_t i = 0; i < m; ++i) {
    UserEpochType type = g.scenario.truth[alice][phase2 + i];
    type.demand = Demand(0);
    g.deviation.overrides.emplace(std::make_pair(alice, phase2 + i), std::move(type));
  }
  g.predicted_ratio = (F(1) + f(1) - F(m) * pow2_inverse(k)) / (F(m) + half_fm);
  g.limit = std::sqrt(2.0);
  std::ostringstream notes;
  notes << "m = " << m << ", k = " << k << "; Alice reports 0 in epochs " << phase2 + 1 << ".." << phase2 + m
        << "; F_1 = " << to_string(F(1)) << ", F_m = " << to_string(F(m));
  g.notes = notes.str();
  return g;
}

std::vector<SlackCheck> multi_lower_slack(const Rational& eps, const Rational& delta, const Rational& w,
                                          std::size_t n1, std::size_t n2) {
  const Rational N1(static_cast<unsigned long>(n1));
  const Rational N2(static_cast<unsigned long>(n2));
  const Rational cap1 = 1 + N1 * w / (1 + w * eps);
  const Rational cap2 = delta / (w * eps) + N2 * delta / (eps * (w + delta));
  std::vector<SlackCheck> out;
  out.push_back({"I1 (epoch 1, truthful, resource 2)", (delta + w) / (1 + w * eps) + N1 * w * eps / (1 + w * eps),
                 cap1});
  out.push_back({"I2 (epoch 1, deviated, resource 2)", 1 / eps + N1 * eps * w / (1 + w * eps), cap1});
  out.push_back({"I3 (epoch 2, truthful, resource 1)",
                 delta / (w * eps * (w + delta)) + delta / (w + delta) + N2 * delta / (w + delta), cap2});
  out.push_back({"I4 (epoch 2, deviated, resource 1)", 1 / (w * eps) + N2 * delta / (w + delta), cap2});
  return out;
}

GroupSizes min_group_sizes(const Rational& eps, const Rational& delta, const Rational& w) {
  // Each slack rhs - lhs is affine in its group size: a + b n.
  auto needed = [&](std::size_t index, bool first_group) -> std::size_t {
    auto at = [&](std::size_t n) -> Rational {
      auto checks = first_group ? multi_lower_slack(eps, delta, w, n, 0) : multi_lower_slack(eps, delta, w, 0, n);
      return checks[index].rhs - checks[index].lhs;
    };
    const Rational a = at(0);
    const Rational b = at(1) - a;
    if (sgn(a) >= 0) return 0;
    if (sgn(b) <= 0) throw InstanceError(multi_lower_slack(eps, delta, w, 0, 0)[index].name + " cannot hold");
    const Rational n = -a / b;
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), n.get_num_mpz_t(), n.get_den_mpz_t());
    return c.get_ui();
  };
  GroupSizes g;
  g.n1 = std::max({std::size_t{1}, needed(0, true), needed(1, true)});
  g.n2 = std::max({std::size_t{1}, needed(2, false), needed(3, false)});
  return g;
}

GeneratedInstance gen_multi_lower(const Rational& eps, const Rational& delta, const Rational& w, std::size_t n1,
                                  std::size_t n2, bool check_slack) {
  if (!(sgn(delta) > 0 && delta <= eps && eps < 1)) throw InstanceError("need 0 < delta <= eps < 1");
  if (sgn(w) <= 0) throw InstanceError("w must be positive");
  if (check_slack) {
    for (const auto& c : multi_lower_slack(eps, delta, w, n1, n2)) {
      if (!c.holds()) {
        throw InstanceError("slack inequality " + c.name + " violated: " + to_decimal(c.lhs) + " > " +
                            to_decimal(c.rhs));
      }
    }
  }

  const std::size_t n = 2 + n1 + n2;
  Scenario s = blank(n, 2, 2);
  s.weights.assign(n, w);
  s.weights[0] = 1;
  s.capacities[0] = 1 + Rational(static_cast<unsigned long>(n1)) * w / (1 + w * eps);
  s.capacities[1] = delta / (w * eps) + Rational(static_cast<unsigned long>(n2)) * delta / (eps * (w + delta));
  const std::vector<Rational> r1{Rational(1), delta};
  const std::vector<Rational> r2{eps, Rational(1)};
  const std::vector<Rational> r3{Rational(1), eps};
  const std::vector<Rational> r4{eps, Rational(1)};
  for (std::size_t t = 0; t < 2; ++t) {
    s.truth[0][t] = {r1, Demand::unbounded()};
    s.truth[1][t] = {r2, Demand::unbounded()};
  }
  for (std::size_t j = 0; j < n1; ++j) {
    s.truth[2 + j][0] = {r3, Demand(w / (1 + w * eps))};
    s.truth[2 + j][1] = {r3, Demand(0)};
  }
  for (std::size_t j = 0; j < n2; ++j) {
    s.truth[2 + n1 + j][0] = {r4, Demand(0)};
    s.truth[2 + n1 + j][1] = {r4, Demand(delta / (eps * (w + delta)))};
  }
  s.positive_ratios = true;

  GeneratedInstance g;
  g.name = "multi-lower";
  g.scenario = validate_scenario(std::move(s));
  g.deviation = zero_report(g.scenario, 0, 0);
  g.predicted_ratio = (1 / (w * eps)) / (1 / (1 + w * eps) + delta / (w * eps * (w + delta)));
  g.limit = 1 + to_double(1 / (w * eps));
  std::ostringstream notes;
  notes << "eps = " << to_string(eps) << ", delta = " << to_string(delta) << ", w = " << to_string(w)
        << ", n1 = " << n1 << ", n2 = " << n2 << "; user 1 reports demand 0 in epoch 1";
  if (!check_slack) notes << "; slack inequalities not enforced";
  g.notes = notes.str();
  return g;
}

std::size_t zero_ratio_resources(std::size_t n) {
  const std::size_t n2 = n * n;
  const std::size_t m = 2 + (n2 * n) / (n2 + 1);
  return std::max<std::size_t>(3, m);
}

GeneratedInstance gen_zero_ratio_overreport(std::size_t n) {
  if (n < 3) throw InstanceError("n must be at least 3");
  const std::size_t m = zero_ratio_resources(n);
  const std::size_t bobs = n * n;
  const std::size_t users = m - 2;
  const Rational n_sq(static_cast<unsigned long>(bobs));
  const Rational n_cube = n_sq * static_cast<unsigned long>(n);

  Scenario s = blank(1 + bobs + users, m, m - 1);
  std::vector<Rational> alice(m, Rational(1));
  alice[1] = 0;
  std::vector<Rational> bob(m, Rational(0));
  bob[0] = 1;
  bob[1] = 1 - 1 / n_cube;
  auto user_ratios = [&](std::size_t i) {
    std::vector<Rational> r(m, Rational(0));
    r[1] = Rational(1) / (Rational(static_cast<unsigned long>(n)) * static_cast<unsigned long>(m - 2));
    r[i + 1] = 1;
    return r;
  };

  for (std::size_t t = 0; t < m - 1; ++t) {
    s.capacities[t] = t == 0 ? Rational(1) : 1 / n_sq;
    s.truth[0][t] = {alice, Demand(0)};
    for (std::size_t b = 0; b < bobs; ++b) s.truth[1 + b][t] = {bob, Demand(t == 0 ? 1 : 0)};
    for (std::size_t i = 1; i <= users; ++i) {
      Demand d = t == 0 ? Demand(1) : (t == i ? Demand(1 / n_sq) : Demand(0));
      s.truth[bobs + i][t] = {user_ratios(i), d};
    }
    if (t > 0) s.truth[0][t].demand = Demand(1 / n_sq);
  }

  GeneratedInstance g;
  g.name = "zero-ratio";
  g.scenario = validate_scenario(std::move(s));
  g.deviation.coalition = {0};
  UserEpochType over = g.scenario.truth[0][0];
  over.demand = Demand(1);
  g.deviation.overrides.emplace(std::make_pair(std::size_t{0}, std::size_t{0}), std::move(over));
  const std::size_t steps = m - 2;
  g.predicted_ratio = Rational(static_cast<unsigned long>(steps)) / (2 * (1 - pow2_inverse(steps)));
  std::ostringstream notes;
  notes << "n = " << n << ", m = " << m << "; Alice over-reports demand 1 in epoch 1; factor >= (m-2)/2 = "
        << to_string(make_rational(static_cast<long>(steps), 2));
  g.notes = notes.str();
  return g;
}

GeneratedInstance gen_two_user_sketch(const Rational& eps, const Rational& delta) {
  if (!(sgn(delta) > 0 && delta <= 1)) throw InstanceError("need 0 < delta <= 1");
  if (!(sgn(eps) > 0 && eps < 1)) throw InstanceError("need 0 < eps < 1");
  Scenario s = blank(2, 1, 2);
  s.relaxed_normalization = true;
  s.capacities = {Rational(1), delta / eps};
  s.truth[0] = {{{Rational(1)}, Demand::unbounded()}, {{delta}, Demand::unbounded()}};
  s.truth[1] = {{{eps}, Demand::unbounded()}, {{Rational(1)}, Demand::unbounded()}};
  s.positive_ratios = true;

  GeneratedInstance g;
  g.name = "two-user-sketch";
  g.scenario = validate_scenario(std::move(s));
  g.deviation = zero_report(g.scenario, 0, 0);
  g.predicted_ratio = (1 / eps) / (1 / (1 + eps) + (delta / eps) / (1 + delta));
  g.limit = 1 + to_double(1 / eps);
  g.notes = "eps = " + to_string(eps) + ", delta = " + to_string(delta) +
            "; ratios vary over time; user 1 reports demand 0 in epoch 1";
  return g;
}

Scenario random_scenario(const RandomScenarioConfig& c, std::uint64_t seed) {
  if (c.denominator < 1) throw InstanceError("denominator must be positive");
  if (c.min_users < 2 || c.max_users < c.min_users) throw InstanceError("bad user range");
  if (c.min_resources < 1 || c.max_resources < c.min_resources) throw InstanceError("bad resource range");
  if (c.min_epochs < 1 || c.max_epochs < c.min_epochs) throw InstanceError("bad epoch range");
  if (c.alphas.empty()) throw InstanceError("alpha list is empty");

  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(rng() % (hi - lo + 1)); };
  const Rational den(c.denominator);
  // A multiple of 1/denominator in [lo, hi].
  auto grid = [&](const Rational& lo, const Rational& hi) -> Rational {
    Rational lo_steps = lo * den;
    mpz_class a, b;
    mpz_cdiv_q(a.get_mpz_t(), lo_steps.get_num_mpz_t(), lo_steps.get_den_mpz_t());
    Rational hi_steps = hi * den;
    mpz_fdiv_q(b.get_mpz_t(), hi_steps.get_num_mpz_t(), hi_steps.get_den_mpz_t());
    if (b < a) throw InstanceError("empty grid range");
    const auto span = mpz_class(b - a).get_ui();
    const auto k = a.get_si() + static_cast<long>(rng() % (span + 1));
    return Rational(k) / den;
  };

  Scenario s;
  s.n = pick(c.min_users, c.max_users);
  s.m = pick(c.min_resources, c.max_resources);
  s.T = pick(c.min_epochs, c.max_epochs);
  s.alpha = c.alphas[rng() % c.alphas.size()];
  s.positive_ratios = c.positive_ratios || s.m == 1;
  s.weights.resize(s.n);
  for (auto& w : s.weights) w = c.max_weight == 1 ? Rational(1) : grid(Rational(1), c.max_weight);
  s.capacities.resize(s.T);
  for (auto& cap : s.capacities) cap = grid(c.min_capacity, c.max_capacity);
  s.truth.assign(s.n, std::vector<UserEpochType>(s.T));
  const Rational ratio_floor = c.positive_ratios ? c.min_ratio : Rational(0);
  for (auto& row : s.truth) {
    for (auto& type : row) {
      type.ratios.assign(s.m, Rational(1));
      if (s.m > 1) {
        for (auto& a : type.ratios) a = grid(ratio_floor, Rational(1));
        type.ratios[rng() % s.m] = 1;
      }
      const bool zero = rng() % 100 < c.zero_demand_percent;
      type.demand = zero ? Demand(0) : Demand(grid(Rational(1) / den, c.max_demand));
    }
  }
  return validate_scenario(std::move(s));
}

}  // namespace fairshare
