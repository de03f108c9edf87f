// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Case structures and expected belief cells, written out by hand so that
// the bundled case files can be checked against them.

#include <string>
#include <utility>
#include <vector>

#include "peal/blaf.hpp"

namespace peal::testing {

inline Rational q(long num, long den = 1) { return make_rational(num, den); }

/// Hit-and-run: plaintiff's note T1 and camera E1 against the defendant,
/// the defendant's own statement T2 backed by the girlfriend's T3.
inline CaseSpec hit_and_run_spec() {
    CaseSpec spec;
    spec.framework = Framework::Blaf;
    spec.arguments = {
        {"Innocence", Role::Meta, {}},
        {"Einc", Role::Meta, {}},
        {"Eex", Role::Meta, {}},
        {"T1", Role::Evidence, "plaintiff noted the registration number"},
        {"T2", Role::Evidence, "defendant says he was at home"},
        {"T3", Role::Evidence, "girlfriend confirms the alibi"},
        {"E1", Role::Evidence, "security camera shows a look-alike"},
    };
    spec.edges = {
        {"Einc", "Innocence", -1}, {"Eex", "Innocence", 1}, {"T1", "Einc", q(9, 10)},
        {"E1", "Einc", 1},         {"T2", "Eex", 1},        {"T3", "T2", 1},
    };
    return spec;
}

inline const std::vector<std::vector<std::string>>& hit_and_run_cells() {
    static const std::vector<std::vector<std::string>> cells = {
        {"1", "[0, 1]", "[0, 1]", "[0, 1]", "[0, 1]", "[0, 1]", "[0, 1]"},
        {"1", "[0, 0.3]", "[0.7, 1]", "[0, 0.33]", "[0.7, 1]", "[0.7, 1]", "[0, 0.3]"},
        {"0.1", "[0.9, 1]", "[0, 0.1]", "[0, 1]", "[0, 0.1]", "[0, 0.1]", "[0.9, 1]"},
    };
    return cells;
}

/// Assumption sets per column (not cumulative).
inline const std::vector<std::vector<std::string>>& hit_and_run_columns() {
    static const std::vector<std::vector<std::string>> columns = {{}, {"p(T3) >= 0.7"}, {"p(E1) >= 0.9"}};
    return columns;
}

/// Robbery case on the extended scheme.
inline CaseSpec robbery_spec() {
    CaseSpec spec;
    spec.framework = Framework::Blaf;
    spec.arguments = {
        {"Innocence", Role::Meta, {}},
        {"Einc", Role::Meta, {}},
        {"Eex", Role::Meta, {}},
        {"Ec", Role::Meta, {}},
        {"Ed", Role::Meta, {}},
        {"Alibi", Role::Meta, {}},
        {"Ability", Role::Meta, {}},
        {"Motive", Role::Meta, {}},
        {"Opportunity", Role::Meta, {}},
        {"V1", Role::Evidence, "victim: defendant threatened him"},
        {"V2", Role::Evidence, "victim recognised voice and stature"},
        {"D1", Role::Evidence, "defendant admits the fight"},
        {"D2", Role::Evidence, "defendant says he was at the cinema"},
        {"W1", Role::Evidence, "waiter: defendant left at 23:00"},
        {"E1", Role::Evidence, "cinema employee recalls the defendant"},
    };
    spec.edges = {
        {"Einc", "Innocence", -1}, {"Eex", "Innocence", 1},    {"Ed", "Einc", 1},
        {"Ec", "Einc", 1},         {"Alibi", "Eex", 1},        {"Ability", "Eex", 1},
        {"V1", "Motive", q(4, 5)}, {"D1", "Motive", q(1, 10)}, {"W1", "Opportunity", q(1, 5)},
        {"V2", "Ed", q(1, 5)},     {"E1", "D2", q(3, 10)},     {"E1", "Alibi", q(3, 10)},
        {"D2", "Alibi", q(9, 10)},
    };
    spec.cs_groups = {CsGroup{"Ec", {{"Motive", q(3, 10)}, {"Opportunity", q(3, 10)}}}};
    return spec;
}

/// Cumulative assumptions added per column after the first.
inline const std::vector<std::vector<std::string>>& robbery_steps() {
    static const std::vector<std::vector<std::string>> steps = {
        {}, {"p(W1) = 1", "p(E1) = 1"}, {"p(D1) = 1"}, {"p(V2) = 1"}};
    return steps;
}

inline const std::vector<std::vector<std::string>>& robbery_cells() {
    static const std::vector<std::vector<std::string>> cells = {
        {"[0, 1]", "[0, 1]", "[0, 1]", "[0, 1]", "[0, 1]", "[0, 1]", "[0, 1]", "[0, 1]", "[0, 1]", "[0, 1]",
         "[0, 1]", "[0, 1]", "[0, 1]", "[0, 1]", "[0, 1]"},
        {"0.94", "[0.06, 0.7]", "[0.3, 0.94]", "[0.06, 0.7]", "[0, 0.7]", "[0.3, 0.94]", "[0, 0.94]", "[0, 1]",
         "[0.2, 1]", "[0, 1]", "[0, 1]", "[0, 1]", "[0.3, 1]", "1", "1"},
        {"0.91", "[0.09, 0.7]", "[0.3, 0.91]", "[0.09, 0.7]", "[0, 0.7]", "[0.3, 0.91]", "[0, 0.91]", "[0.1, 1]",
         "[0.2, 1]", "[0, 1]", "[0, 1]", "1", "[0.3, 1]", "1", "1"},
        {"0.8", "[0.2, 0.7]", "[0.3, 0.8]", "[0.09, 0.7]", "[0.2, 0.7]", "[0.3, 0.8]", "[0, 0.8]", "[0.1, 1]",
         "[0.2, 1]", "[0, 1]", "1", "1", "[0.3, 0.89]", "1", "1"},
    };
    return cells;
}

/// Two cameras jointly supporting a Camera hypothesis.
inline CaseSpec camera_spec() {
    CaseSpec spec;
    spec.framework = Framework::Blaf;
    spec.arguments = {
        {"Innocence", Role::Meta, {}},
        {"Einc", Role::Meta, {}},
        {"Eex", Role::Meta, {}},
        {"Camera", Role::Meta, "defendant at the scene per camera evidence"},
        {"Camera1", Role::Evidence, "first camera"},
        {"Camera2", Role::Evidence, "second camera"},
    };
    spec.edges = {{"Einc", "Innocence", -1}, {"Eex", "Innocence", 1}, {"Camera", "Einc", 1}};
    spec.cs_groups = {CsGroup{"Camera", {{"Camera1", q(1, 2)}, {"Camera2", q(1, 2)}}}};
    return spec;
}

/// A supports B, B attacks C, on a plain graph.
inline CaseSpec chain_spec() {
    CaseSpec spec;
    spec.framework = Framework::Plain;
    spec.arguments = {{"A", Role::Evidence, {}}, {"B", Role::Evidence, {}}, {"C", Role::Evidence, {}}};
    spec.edges = {{"A", "B", 1}, {"B", "C", -1}};
    return spec;
}

inline BlafCase with_assumptions(BlafCase c, const std::vector<std::string>& texts, std::size_t& next_id) {
    for (const auto& t : texts) {
        c = c.assume("a" + std::to_string(next_id++), t);
    }
    return c;
}

} // namespace peal::testing
