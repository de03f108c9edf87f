// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace peal {

/// Exact arbitrary-precision rational. Every belief, weight and coefficient
/// in the engine is one of these; doubles never enter the solve path.
using Rational = mpq_class;

/// Parses "3", "-3", "0.75", ".5", "3/4", "-7/10". Decimals become exact
/// fractions (0.7 -> 7/10). Returns nullopt on malformed text or a zero
/// denominator.
std::optional<Rational> parse_rational(std::string_view text);

/// Canonical exact text: "1/3", "-7/10", "1", "0".
std::string to_exact_string(const Rational& value);

/// Short exact text used in files: a terminating decimal when one exists
/// ("0.9", "-1"), a fraction otherwise ("1/3").
std::string to_compact_string(const Rational& value);

/// Presentation rounding: round half away from zero to `digits` decimals,
/// trailing zeros dropped ("0.33", "0.3", "1", "0.89").
std::string to_display_string(const Rational& value, int digits = 2);

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

} // namespace peal
