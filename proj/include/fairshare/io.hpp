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

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fairshare/engine.hpp"
#include "fairshare/instances.hpp"
#include "fairshare/model.hpp"
#include "fairshare/properties.hpp"
#include "fairshare/strategy.hpp"

namespace fairshare {

/// Malformed input; the message names the offending field or line.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Users and epochs are 1-based in files and 0-based in memory. Rationals
/// are written as integers or "p/q" strings; readers also take decimal
/// strings and JSON numbers. Demands may be the string "unbounded".
nlohmann::json rational_to_json(const Rational& value);
Rational rational_from_json(const nlohmann::json& value, const std::string& field);

nlohmann::json scenario_to_json(const Scenario& s);
/// Accepts either "capacities" (one per epoch) or "resource_capacities"
/// (one row per epoch, one entry per resource). Validates the result.
Scenario scenario_from_json(const nlohmann::json& j);

nlohmann::json profile_to_json(const ReportProfile& p);
ReportProfile profile_from_json(const nlohmann::json& j, const Scenario& s);

/// Parses JSON text, reporting syntax errors with their line number.
nlohmann::json parse_json_text(const std::string& text, const std::string& source);

Scenario read_scenario(const std::string& path);
ReportProfile read_profile(const std::string& path, const Scenario& s);
void write_json(const std::string& path, const nlohmann::json& j);

/// One row per (epoch, user): exact and decimal columns side by side.
void write_trace_csv(std::ostream& out, const Trace& trace);

nlohmann::json ratio_to_json(const RatioEntry& r);
/// "10/9", "inf" or "undefined".
std::string ratio_text(const RatioEntry& r);
nlohmann::json outcome_to_json(const DeviationOutcome& o);
nlohmann::json intervals_to_json(const IntervalAnalysis& a);
nlohmann::json report_to_json(const PropertyReport& r);
nlohmann::json instance_to_json(const GeneratedInstance& g);

}  // namespace fairshare
