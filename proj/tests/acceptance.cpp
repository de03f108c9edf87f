// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <chrono>
#include <exception>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "peal/blaf.hpp"
#include "peal/case_document.hpp"
#include "peal/epistemic.hpp"
#include "peal/errors.hpp"
#include "peal/explainer.hpp"
#include "peal/report.hpp"
#include "peal/world_oracle.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace peal;
using peal::testing::q;

namespace {

using Clock = std::chrono::steady_clock;

double millis(Clock::time_point from, Clock::time_point to) {
    return std::chrono::duration<double, std::milli>(to - from).count();
}

struct Outcome {
    bool pass = true;
    std::vector<std::string> failures;
    std::string detail;

    void expect(bool condition, const std::string& what) {
        if (!condition) {
            pass = false;
            failures.push_back(what);
        }
    }
};

BlafCase bundled(const std::string& name) {
    return to_case(load_case_document(std::string(PEAL_CASES_DIR) + "/" + name));
}

std::vector<std::string> cells_of(const BlafCase& c, const Verdict& v) {
    std::vector<std::string> out;
    for (const auto& row : belief_rows(c, v, NumberStyle::Display)) {
        out.push_back(row.cell);
    }
    return out;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        out += (out.empty() ? "" : " | ") + p;
    }
    return out;
}

Outcome chain_example() {
    Outcome out;
    const auto start = Clock::now();
    auto c = bundled("chain.case");
    const auto cs = c.constraints();
    const auto bounds = entail_all(c.graph(), cs);
    out.expect(bounds.at("A") == Interval{0, q(1, 2)}, "A is " + format_interval(bounds.at("A"), NumberStyle::Exact));
    out.expect(bounds.at("B") == Interval{0, q(1, 2)}, "B is " + format_interval(bounds.at("B"), NumberStyle::Exact));
    out.expect(bounds.at("C") == Interval{q(1, 2), 1}, "C is " + format_interval(bounds.at("C"), NumberStyle::Exact));
    out.expect(satisfiable(c.graph(), cs).satisfiable, "base system unsatisfiable");
    const auto flipped = c.assume("x", "p(A) >= 1");
    out.expect(!satisfiable(flipped.graph(), flipped.constraints()).satisfiable, "p(A) >= 1 stays satisfiable");
    const double ms = millis(start, Clock::now());
    out.expect(ms < 10, "took " + std::to_string(ms) + " ms");
    out.detail = "A [0, 1/2], B [0, 1/2], C [1/2, 1]; p(A) >= 1 unsatisfiable; " +
                 std::to_string(static_cast<long>(ms * 1000)) + " us";
    return out;
}

Outcome hit_and_run_table() {
    Outcome out;
    const auto start = Clock::now();
    const auto base = bundled("example1.case");
    for (std::size_t col = 0; col < testing::hit_and_run_columns().size(); ++col) {
        std::size_t next = 1;
        const auto c = testing::with_assumptions(base, testing::hit_and_run_columns()[col], next);
        const auto v = beliefs(c);
        const auto got = cells_of(c, v);
        out.expect(got == testing::hit_and_run_cells()[col], "column " + std::to_string(col) + ": " + join(got));
        if (col == 1) {
            out.expect(v.bounds.at("T1").upper == q(1, 3), "T1 upper is not exactly 1/3");
        }
        if (col == 2) {
            out.expect(*v.innocence_belief == q(1, 10), "Innocence is not exactly 1/10");
        }
    }
    const double ms = millis(start, Clock::now());
    out.expect(ms < 50, "took " + std::to_string(ms) + " ms");
    out.detail = "3 columns byte-equal in " + std::to_string(static_cast<long>(ms)) +
                 " ms; T1 upper 1/3, Innocence 1/10";
    return out;
}

Outcome robbery_table() {
    Outcome out;
    const auto base = bundled("example2.case");

    // The weights are reconstructions: confirm every column with the
    // possible-world LP before trusting the marginal solver's rendering.
    {
        auto c = base;
        std::size_t next = 1;
        for (std::size_t col = 0; col < testing::robbery_steps().size(); ++col) {
            c = testing::with_assumptions(c, testing::robbery_steps()[col], next);
            Verdict v;
            v.bounds = oracle_entail_all(c.graph(), c.constraints());
            v.innocence_belief = v.bounds.at("Innocence").upper;
            auto got = cells_of(c, v);
            if (col == 0) {
                got[0] = format_interval(v.bounds.at("Innocence"), NumberStyle::Display);
            }
            out.expect(got == testing::robbery_cells()[col], "oracle column " + std::to_string(col) + ": " + join(got));
        }
    }

    const auto start = Clock::now();
    auto c = base;
    std::size_t next = 1;
    Verdict last;
    for (std::size_t col = 0; col < testing::robbery_steps().size(); ++col) {
        c = testing::with_assumptions(c, testing::robbery_steps()[col], next);
        last = beliefs(c);
        auto got = cells_of(c, last);
        if (col == 0) {
            got[0] = format_interval(last.bounds.at("Innocence"), NumberStyle::Display);
        }
        out.expect(got == testing::robbery_cells()[col], "column " + std::to_string(col) + ": " + join(got));
    }
    out.expect(last.bounds.at("D2").upper == q(8, 9), "D2 upper is not exactly 8/9");
    out.expect(last.bounds.at("Einc") == Interval{q(1, 5), q(7, 10)}, "Einc is not [1/5, 7/10]");
    const double ms = millis(start, Clock::now());
    out.expect(ms < 200, "took " + std::to_string(ms) + " ms");
    out.detail = "4 cumulative columns byte-equal in " + std::to_string(static_cast<long>(ms)) +
                 " ms, confirmed by the world LP; D2 upper 8/9";
    return out;
}

Outcome camera() {
    Outcome out;
    const auto base = bundled("camera.case");
    const auto both = beliefs(base.assume("c1", "p(Camera1) = 0.7").assume("c2", "p(Camera2) = 0.9"));
    out.expect(both.bounds.at("Camera").lower == q(4, 5),
               "joint lower " + to_exact_string(both.bounds.at("Camera").lower));
    const auto one = beliefs(base.assume("c1", "p(Camera1) = 1").assume("c2", "p(Camera2) = 0"));
    out.expect(one.bounds.at("Camera").lower == q(1, 2),
               "single lower " + to_exact_string(one.bounds.at("Camera").lower));
    out.detail = "Camera lower 4/5, then 1/2";
    return out;
}

Outcome oracle_equivalence() {
    Outcome out;
    const auto start = Clock::now();
    std::mt19937 rng(500);
    int satisfiable_count = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto inst = testing::random_graph_instance(rng, 6, 8, 6);
        const bool marginal = satisfiable(inst.graph, inst.constraints).satisfiable;
        const bool worlds = oracle_satisfiable(inst.graph, inst.constraints);
        if (marginal != worlds) {
            out.expect(false, "instance " + std::to_string(trial) + ": satisfiability differs");
            continue;
        }
        if (!marginal) {
            continue;
        }
        ++satisfiable_count;
        const auto oracle = oracle_entail_all(inst.graph, inst.constraints);
        const auto all = entail_all(inst.graph, inst.constraints);
        for (const auto& id : inst.graph.arguments()) {
            if (entail(inst.graph, inst.constraints, id) != oracle.at(id) || all.at(id) != oracle.at(id)) {
                out.expect(false, "instance " + std::to_string(trial) + ": bounds on " + id + " differ");
            }
        }
    }
    const double ms = millis(start, Clock::now());
    out.expect(ms < 60000, "took " + std::to_string(ms) + " ms");
    out.detail = "500 instances, " + std::to_string(satisfiable_count) + " satisfiable";
    return out;
}

Outcome meta_bounds() {
    Outcome out;
    std::mt19937 rng(200);
    int satisfiable_count = 0;
    int attempts = 0;
    int empty_cases = 0;
    while (satisfiable_count < 200 && attempts < 2000) {
        ++attempts;
        auto c = build_case(testing::random_legal_spec(rng, 3 + rng() % 10));
        const auto empty = beliefs(c);
        ++empty_cases;
        out.expect(*empty.innocence_belief == 1, "empty case " + std::to_string(attempts) + ": Innocence below 1");
        std::size_t k = 0;
        for (const auto& id : c.graph().arguments()) {
            if (c.role(id) != Role::Meta && rng() % 3 == 0) {
                c = c.assume("x" + std::to_string(k++),
                             "p(" + id + ") >= " + to_exact_string(testing::unit_rational(rng, 10)));
            }
        }
        Verdict v;
        try {
            v = beliefs(c);
        } catch (const UnsatisfiableError&) {
            continue;
        }
        ++satisfiable_count;
        const auto report = check_meta_bounds(c, v.bounds);
        for (const auto& check : report.checks) {
            out.expect(check.holds, "case " + std::to_string(attempts) + ": " + check.statement);
        }
    }
    out.expect(satisfiable_count == 200, "only " + std::to_string(satisfiable_count) + " satisfiable cases");
    out.detail = std::to_string(satisfiable_count) + " satisfiable cases, " + std::to_string(empty_cases) +
                 " empty cases with Innocence 1";
    return out;
}

Outcome performance() {
    Outcome out;
    std::mt19937 rng(2000);
    const auto c = testing::chained_legal_case(rng, 2000, 20);
    const auto cs = c.constraints();
    const auto start = Clock::now();
    const auto all = entail_all(c.graph(), cs);
    const auto middle = Clock::now();
    const auto one = entail(c.graph(), cs, "Einc");
    const auto end = Clock::now();
    const double all_ms = millis(start, middle);
    const double one_ms = millis(middle, end);
    out.expect(all.size() == c.graph().size(), "missing intervals");
    out.expect(all.at("Einc") == one, "entail_all and entail disagree on Einc");
    out.expect(all_ms < 2000, "entail_all took " + std::to_string(all_ms) + " ms");
    out.expect(one_ms < 500, "entail took " + std::to_string(one_ms) + " ms");
    std::ostringstream detail;
    detail << c.graph().size() << " arguments, " << c.assumptions().size() << " assumptions; entail_all "
           << static_cast<long>(all_ms) << " ms, entail " << static_cast<long>(one_ms) << " ms";
    out.detail = detail.str();
    return out;
}

void check_sound(const Explanation& e, const BeliefBounds& bounds, Outcome& out) {
    const Interval& solved = bounds.at(e.subject);
    for (const auto& r : e.reasons) {
        if (e.side == BoundSide::Lower) {
            out.expect(r.induced <= solved.lower, "unsound lower reason on " + e.subject);
        } else {
            out.expect(solved.upper <= r.induced, "unsound upper reason on " + e.subject);
        }
        for (const auto& d : r.details) {
            check_sound(d, bounds, out);
        }
    }
}

std::string render_all(const BlafCase& c, const Verdict& v) {
    std::string text = render_verdict(explain_verdict(c, v, default_threshold()), 8) + "\n";
    for (const auto& id : c.graph().arguments()) {
        text += render_tree(explain_lower(c, v.bounds, id, 4), 4);
        text += render_tree(explain_upper(c, v.bounds, id, 4), 4);
    }
    return text;
}

Outcome explanations() {
    Outcome out;
    std::vector<std::pair<BlafCase, Verdict>> solved;
    const auto hit_and_run = bundled("example1.case");
    const VerdictClass table_one[] = {VerdictClass::LackOfEvidence, VerdictClass::InnocentByExculpatory,
                                      VerdictClass::GuiltyByInculpatory};
    for (std::size_t col = 0; col < testing::hit_and_run_columns().size(); ++col) {
        std::size_t next = 1;
        auto c = testing::with_assumptions(hit_and_run, testing::hit_and_run_columns()[col], next);
        auto v = beliefs(c);
        out.expect(classify(v, default_threshold()) == table_one[col],
                   "hit-and-run column " + std::to_string(col) + " classified " +
                       std::string(to_string(classify(v, default_threshold()))));
        solved.emplace_back(std::move(c), std::move(v));
    }
    auto robbery = bundled("example2.case");
    std::size_t next = 1;
    for (std::size_t col = 0; col < testing::robbery_steps().size(); ++col) {
        robbery = testing::with_assumptions(robbery, testing::robbery_steps()[col], next);
        auto v = beliefs(robbery);
        out.expect(classify(v, default_threshold()) == VerdictClass::LackOfEvidence,
                   "robbery column " + std::to_string(col) + " classified " +
                       std::string(to_string(classify(v, default_threshold()))));
        solved.emplace_back(robbery, std::move(v));
    }
    for (const auto& [c, v] : solved) {
        const std::string first = render_all(c, v);
        const Verdict again = beliefs(c);
        out.expect(render_all(c, again) == first, "rendering changed between runs");
        for (const auto& id : c.graph().arguments()) {
            check_sound(explain_lower(c, v.bounds, id, 6), v.bounds, out);
            check_sound(explain_upper(c, v.bounds, id, 6), v.bounds, out);
        }
    }
    out.detail = "7 columns classified as narrated; renders byte-stable; all reasons sound";
    return out;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"chain-example", chain_example},
        {"hit-and-run-table", hit_and_run_table},
        {"robbery-table", robbery_table},
        {"camera-collective-support", camera},
        {"oracle-equivalence", oracle_equivalence},
        {"meta-bounds", meta_bounds},
        {"performance", performance},
        {"explanations", explanations},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome outcome;
        const auto start = Clock::now();
        try {
            outcome = run();
        } catch (const std::exception& e) {
            outcome.expect(false, std::string("exception: ") + e.what());
        }
        const long ms = static_cast<long>(millis(start, Clock::now()));
        if (outcome.pass) {
            std::cout << "PASS " << name << ": " << outcome.detail << " [" << ms << " ms]\n";
        } else {
            ++failed;
            std::cout << "FAIL " << name << ": " << outcome.failures.front();
            if (outcome.failures.size() > 1) {
                std::cout << " (+" << outcome.failures.size() - 1 << " more)";
            }
            std::cout << " [" << ms << " ms]\n";
        }
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
    return failed == 0 ? 0 : 1;
}
