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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fairshare/properties.hpp"

namespace fairshare::cli {

enum ExitCode : int { kOk = 0, kPropertyFailure = 1, kUsageError = 2 };

/// One line of a suite run.
struct SuiteEntry {
  std::string label;
  PropertyReport report;
  /// The failure is the documented outcome (counts as success).
  bool expected_failure = false;
};

std::vector<SuiteEntry> suite_constructions();
std::vector<SuiteEntry> suite_random(std::uint64_t seeds, std::uint64_t first_seed = 0);
std::vector<SuiteEntry> suite_zero_ratio();

/// True when every entry passed or failed as expected.
bool suite_ok(const std::vector<SuiteEntry>& entries);

/// Full command-line entry point. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fairshare::cli
