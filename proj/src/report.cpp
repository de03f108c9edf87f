// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include "peal/report.hpp"

#include <algorithm>

namespace peal {

std::string format_number(const Rational& value, NumberStyle style) {
    return style == NumberStyle::Exact ? to_exact_string(value) : to_display_string(value);
}

std::string format_interval(const Interval& interval, NumberStyle style) {
    if (interval.lower == interval.upper) {
        return format_number(interval.lower, style);
    }
    return "[" + format_number(interval.lower, style) + ", " + format_number(interval.upper, style) + "]";
}

std::vector<BeliefRow> belief_rows(const BlafCase& legal_case, const Verdict& verdict, NumberStyle style) {
    const auto constrained = legal_case.directly_constrained();
    std::vector<BeliefRow> rows;
    for (const auto& id : legal_case.graph().arguments()) {
        BeliefRow row;
        row.id = id;
        row.role = legal_case.role(id);
        row.interval = verdict.bounds.at(id);
        const bool innocence = legal_case.framework() == Framework::Blaf && id == kInnocence;
        row.cell = innocence ? format_number(row.interval.upper, style) : format_interval(row.interval, style);
        row.directly_constrained = constrained.count(id) != 0;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_belief_table(const std::vector<BeliefRow>& rows) {
    std::size_t width = 8;
    for (const auto& row : rows) {
        width = std::max(width, row.id.size());
    }
    std::string out = "argument" + std::string(width - 8 + 2, ' ') + "belief\n";
    for (const auto& row : rows) {
        out += row.id + std::string(width - row.id.size() + 2, ' ') + row.cell;
        if (row.directly_constrained) {
            out += " *";
        }
        out += "\n";
    }
    return out;
}

} // namespace peal
