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

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace fairshare {

/// Exact arbitrary-precision rational. Every quantity in the core is one of
/// these; conversion to floating point happens only when reporting.
using Rational = mpq_class;

/// Builds p/q in canonical form.
Rational make_rational(long p, long q = 1);

/// Parses "p/q", "p", or a plain decimal such as "0.125" (converted exactly).
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" rendering; integers render without a denominator.
std::string to_string(const Rational& value);

/// Decimal rendering with the given number of significant digits.
std::string to_decimal(const Rational& value, int significant_digits = 12);

double to_double(const Rational& value);

inline const Rational& min_of(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max_of(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// x^+ = max(x, 0).
inline Rational positive_part(const Rational& x) { return sgn(x) > 0 ? x : Rational(0); }

}  // namespace fairshare
