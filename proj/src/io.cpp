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

#include "fairshare/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fairshare {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

std::size_t to_index(const json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 1) throw FormatError(field + ": expected a 1-based index");
  return static_cast<std::size_t>(j.get<long long>() - 1);
}

std::size_t to_count(const json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw FormatError(field + ": expected a nonnegative integer");
  return static_cast<std::size_t>(j.get<long long>());
}

json demand_to_json(const Demand& d) { return d.is_unbounded() ? json("unbounded") : rational_to_json(d.value()); }

Demand demand_from_json(const json& j, const std::string& field) {
  if (j.is_string() && (j.get<std::string>() == "unbounded" || j.get<std::string>() == "inf")) {
    return Demand::unbounded();
  }
  return Demand(rational_from_json(j, field));
}

json type_to_json(const UserEpochType& t) {
  json ratios = json::array();
  for (const auto& a : t.ratios) ratios.push_back(rational_to_json(a));
  return json{{"ratios", ratios}, {"demand", demand_to_json(t.demand)}};
}

UserEpochType type_from_json(const json& j, std::size_t m, const std::string& field) {
  UserEpochType t;
  if (j.is_object() && j.contains("ratios")) {
    const auto& ratios = j.at("ratios");
    if (!ratios.is_array()) throw FormatError(field + ".ratios: expected an array");
    for (std::size_t q = 0; q < ratios.size(); ++q) {
      t.ratios.push_back(rational_from_json(ratios[q], field + ".ratios[" + std::to_string(q + 1) + "]"));
    }
  } else if (m == 1) {
    t.ratios = {Rational(1)};
    // A bare demand stands for the whole entry on one resource.
    if (!j.is_object()) {
      t.demand = demand_from_json(j, field);
      return t;
    }
  } else {
    throw FormatError(field + ": missing field \"ratios\"");
  }
  t.demand = demand_from_json(require(j, "demand", field), field + ".demand");
  return t;
}

}  // namespace

json rational_to_json(const Rational& value) {
  if (value.get_den() == 1 && value.get_num().fits_slong_p()) return json(value.get_num().get_si());
  return json(to_string(value));
}

Rational rational_from_json(const json& j, const std::string& field) {
  try {
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
    if (j.is_number_float()) {
      // Shortest round-trip text of the double, read exactly.
      char buffer[64];
      auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, j.get<double>());
      if (ec != std::errc()) throw std::invalid_argument("unrepresentable number");
      return parse_rational(std::string_view(buffer, static_cast<std::size_t>(end - buffer)));
    }
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw FormatError(field + ": " + e.what());
  }
  throw FormatError(field + ": expected a number or a \"p/q\" string");
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["n"] = s.n;
  j["m"] = s.m;
  j["T"] = s.T;
  j["alpha"] = rational_to_json(s.alpha);
  j["weights"] = json::array();
  for (const auto& w : s.weights) j["weights"].push_back(rational_to_json(w));
  j["capacities"] = json::array();
  for (const auto& c : s.capacities) j["capacities"].push_back(rational_to_json(c));
  j["positive_ratios"] = s.positive_ratios;
  if (s.relaxed_normalization) j["relaxed_normalization"] = true;
  j["users"] = json::array();
  for (const auto& row : s.truth) {
    json epochs = json::array();
    for (const auto& t : row) epochs.push_back(type_to_json(t));
    j["users"].push_back(std::move(epochs));
  }
  return j;
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("scenario: expected a JSON object");
  Scenario s;
  s.n = to_count(require(j, "n", "scenario"), "n");
  s.m = to_count(require(j, "m", "scenario"), "m");
  s.T = to_count(require(j, "T", "scenario"), "T");
  s.alpha = j.contains("alpha") ? rational_from_json(j.at("alpha"), "alpha") : Rational(0);
  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    if (!w.is_array()) throw FormatError("weights: expected an array");
    for (std::size_t i = 0; i < w.size(); ++i) {
      s.weights.push_back(rational_from_json(w[i], "weights[" + std::to_string(i + 1) + "]"));
    }
  } else {
    s.weights.assign(s.n, Rational(1));
  }
  s.positive_ratios = j.value("positive_ratios", false);
  s.relaxed_normalization = j.value("relaxed_normalization", false);

  const auto& types = require(j, "users", "scenario");
  if (!types.is_array()) throw FormatError("users: expected an array of users");
  for (std::size_t i = 0; i < types.size(); ++i) {
    const std::string user_field = "users[" + std::to_string(i + 1) + "]";
    if (!types[i].is_array()) throw FormatError(user_field + ": expected an array of epochs");
    std::vector<UserEpochType> row;
    for (std::size_t t = 0; t < types[i].size(); ++t) {
      row.push_back(type_from_json(types[i][t], s.m, user_field + "[" + std::to_string(t + 1) + "]"));
    }
    s.truth.push_back(std::move(row));
  }

  if (j.contains("resource_capacities")) {
    const auto& rows = j.at("resource_capacities");
    if (!rows.is_array()) throw FormatError("resource_capacities: expected an array");
    std::vector<std::vector<Rational>> per_resource;
    for (std::size_t t = 0; t < rows.size(); ++t) {
      const std::string field = "resource_capacities[" + std::to_string(t + 1) + "]";
      if (!rows[t].is_array()) throw FormatError(field + ": expected an array");
      std::vector<Rational> row;
      for (std::size_t q = 0; q < rows[t].size(); ++q) {
        row.push_back(rational_from_json(rows[t][q], field + "[" + std::to_string(q + 1) + "]"));
      }
      per_resource.push_back(std::move(row));
    }
    s.capacities.assign(s.T, Rational(0));
    if (s.truth.size() != s.n) throw FormatError("users: expected " + std::to_string(s.n) + " users");
    s = normalize_capacities(per_resource, std::move(s));
  } else {
    const auto& caps = require(j, "capacities", "scenario");
    if (!caps.is_array()) throw FormatError("capacities: expected an array");
    for (std::size_t t = 0; t < caps.size(); ++t) {
      s.capacities.push_back(rational_from_json(caps[t], "capacities[" + std::to_string(t + 1) + "]"));
    }
  }
  return validate_scenario(std::move(s));
}

json profile_to_json(const ReportProfile& p) {
  json j;
  j["format"] = "fairshare-profile";
  j["version"] = 1;
  j["coalition"] = json::array();
  for (auto u : p.coalition) j["coalition"].push_back(u + 1);
  j["overrides"] = json::array();
  for (const auto& [key, type] : p.overrides) {
    json o = type_to_json(type);
    o["user"] = key.first + 1;
    o["epoch"] = key.second + 1;
    j["overrides"].push_back(std::move(o));
  }
  return j;
}

ReportProfile profile_from_json(const json& j, const Scenario& s) {
  if (!j.is_object()) throw FormatError("profile: expected a JSON object");
  ReportProfile p;
  const auto& coalition = require(j, "coalition", "profile");
  if (!coalition.is_array()) throw FormatError("coalition: expected an array");
  for (std::size_t k = 0; k < coalition.size(); ++k) {
    p.coalition.insert(to_index(coalition[k], "coalition[" + std::to_string(k + 1) + "]"));
  }
  if (j.contains("overrides")) {
    const auto& overrides = j.at("overrides");
    if (!overrides.is_array()) throw FormatError("overrides: expected an array");
    for (std::size_t k = 0; k < overrides.size(); ++k) {
      const std::string field = "overrides[" + std::to_string(k + 1) + "]";
      const auto& o = overrides[k];
      const std::size_t user = to_index(require(o, "user", field), field + ".user");
      const std::size_t epoch = to_index(require(o, "epoch", field), field + ".epoch");
      if (user >= s.n || epoch >= s.T) throw FormatError(field + ": user or epoch out of range");
      UserEpochType type;
      type.ratios = o.contains("ratios") ? type_from_json(o, s.m, field).ratios : s.truth[user][epoch].ratios;
      type.demand = demand_from_json(require(o, "demand", field), field + ".demand");
      if (!p.overrides.emplace(std::make_pair(user, epoch), std::move(type)).second) {
        throw FormatError(field + ": duplicate override");
      }
    }
  }
  validate_profile(s, p);
  return p;
}

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t k = 0; k < std::min(e.byte, text.size()); ++k) {
      if (text[k] == '\n') ++line;
    }
    throw FormatError(source + ":" + std::to_string(line) + ": " + e.what());
  }
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

Scenario read_scenario(const std::string& path) {
  const json j = parse_json_text(slurp(path), path);
  try {
    return scenario_from_json(j);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

ReportProfile read_profile(const std::string& path, const Scenario& s) {
  const json j = parse_json_text(slurp(path), path);
  try {
    return profile_from_json(j, s);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError(path + ": cannot open file for writing");
  out << j.dump(2) << '\n';
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "epoch,user,r,r_dec,R,R_dec,lambda_hat,u,u_dec,U,U_dec\n";
  for (std::size_t t = 0; t < trace.epochs_count(); ++t) {
    for (std::size_t i = 0; i < trace.users(); ++i) {
      out << t + 1 << ',' << i + 1 << ',' << to_string(trace.allocation[t][i]) << ','
          << to_decimal(trace.allocation[t][i]) << ',' << to_string(trace.cumulative[t][i]) << ','
          << to_decimal(trace.cumulative[t][i]) << ',' << to_string(trace.ratio_penalty[t][i]) << ','
          << to_string(trace.utility[t][i]) << ',' << to_decimal(trace.utility[t][i]) << ','
          << to_string(trace.cumulative_utility[t][i]) << ',' << to_decimal(trace.cumulative_utility[t][i])
          << '\n';
    }
  }
}

std::string ratio_text(const RatioEntry& r) {
  switch (r.kind) {
    case RatioEntry::Kind::Finite:
      return to_string(r.value);
    case RatioEntry::Kind::Infinite:
      return "inf";
    case RatioEntry::Kind::Undefined:
      break;
  }
  return "undefined";
}

json ratio_to_json(const RatioEntry& r) {
  json j{{"value", ratio_text(r)}};
  if (r.kind == RatioEntry::Kind::Finite) j["decimal"] = to_decimal(r.value);
  return j;
}

json outcome_to_json(const DeviationOutcome& o) {
  json j;
  j["coalition"] = json::array();
  for (auto u : o.coalition) j["coalition"].push_back(u + 1);
  j["gamma_max"] = ratio_to_json(o.max_ratio);
  j["argmax_epoch"] = o.argmax_epoch + 1;
  j["gamma"] = json::array();
  for (const auto& g : o.gamma) j["gamma"].push_back(ratio_text(g));
  j["profile"] = profile_to_json(o.profile());
  json totals = json::array();
  if (o.truthful.epochs_count() > 0) {
    const std::size_t last = o.truthful.epochs_count() - 1;
    for (std::size_t i = 0; i < o.truthful.users(); ++i) {
      totals.push_back({{"user", i + 1},
                        {"R", rational_to_json(o.truthful.cumulative[last][i])},
                        {"U", rational_to_json(o.truthful.cumulative_utility[last][i])},
                        {"R_hat", rational_to_json(o.deviated.cumulative[last][i])},
                        {"U_hat", rational_to_json(o.deviated.cumulative_utility[last][i])}});
    }
  }
  j["final_totals"] = std::move(totals);
  return j;
}

json intervals_to_json(const IntervalAnalysis& a) {
  json j = json::array();
  for (const auto& iv : a.intervals) {
    json e{{"start", iv.start + 1}, {"best_epoch", iv.best_epoch + 1}, {"best_ratio", ratio_text(iv.best_ratio)}};
    e["end"] = iv.end ? json(*iv.end + 1) : json(nullptr);
    j.push_back(std::move(e));
  }
  return j;
}

json report_to_json(const PropertyReport& r) {
  json j{{"name", r.name},
         {"passed", r.passed},
         {"applicable", r.applicable},
         {"checked", r.checked},
         {"vacuous", r.vacuous},
         {"detail", r.detail}};
  j["min_slack"] = r.min_slack ? rational_to_json(*r.min_slack) : json(nullptr);
  if (r.counterexample) {
    const auto& c = *r.counterexample;
    json ce{{"description", c.description}};
    if (c.epoch) ce["epoch"] = *c.epoch + 1;
    if (c.user) ce["user"] = *c.user + 1;
    if (c.other) ce["other"] = *c.other + 1;
    json values = json::object();
    for (const auto& [k, v] : c.values) values[k] = rational_to_json(v);
    ce["values"] = std::move(values);
    if (c.scenario) ce["scenario"] = scenario_to_json(*c.scenario);
    j["counterexample"] = std::move(ce);
  }
  return j;
}

json instance_to_json(const GeneratedInstance& g) {
  json j{{"name", g.name},
         {"predicted_ratio", rational_to_json(g.predicted_ratio)},
         {"predicted_ratio_decimal", to_decimal(g.predicted_ratio)},
         {"notes", g.notes}};
  if (g.limit) j["limit"] = *g.limit;
  return j;
}

}  // namespace fairshare
