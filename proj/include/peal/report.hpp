// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "peal/blaf.hpp"
#include "peal/epistemic.hpp"

namespace peal {

enum class NumberStyle {
    Display, // two-digit half-up rounding
    Exact,   // exact rational text
};

std::string format_number(const Rational& value, NumberStyle style);

/// "[l, u]", or a single number when l == u.
std::string format_interval(const Interval& interval, NumberStyle style);

struct BeliefRow {
    ArgumentId id;
    Role role = Role::Evidence;
    Interval interval;
    std::string cell;      // what a reader sees for this argument
    bool directly_constrained = false;
};

/// One row per argument in graph order. Innocence shows its belief (the
/// upper bound) as a single number.
std::vector<BeliefRow> belief_rows(const BlafCase& legal_case, const Verdict& verdict, NumberStyle style);

/// Aligned two-column text table; directly constrained cells are starred.
std::string render_belief_table(const std::vector<BeliefRow>& rows);

} // namespace peal
