// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "peal/epistemic.hpp"
#include "peal/errors.hpp"
#include "peal/world_oracle.hpp"
#include "support/generators.hpp"

using namespace peal;

namespace {

struct ChainExample {
    ArgGraph graph;
    ConstraintSet constraints;

    ChainExample() {
        for (const char* id : {"A", "B", "C"}) {
            graph.add_argument(id);
        }
        graph.add_edge("A", "B", 1);
        graph.add_edge("B", "C", -1);
        constraints.add(gen_support(graph.edges()[0]), Provenance{ConstraintOrigin::Support, "SE(A->B)", std::nullopt});
        constraints.add(gen_attack(graph.edges()[1]), Provenance{ConstraintOrigin::Attack, "ATT(B->C)", std::nullopt});
        add("c1", "0.5 <= p(C)");
    }

    void add(const std::string& id, std::string_view text) {
        for (auto& c : parse_constraint(text)) {
            constraints.add(std::move(c), Provenance{ConstraintOrigin::Assumption, id, std::nullopt});
        }
    }
};

Interval iv(Rational lo, Rational hi) { return Interval{std::move(lo), std::move(hi)}; }

} // namespace

TEST_CASE("three-argument chain: support then attack") {
    ChainExample ex;
    const auto bounds = entail_all(ex.graph, ex.constraints);
    CHECK(bounds.at("A") == iv(0, make_rational(1, 2)));
    CHECK(bounds.at("B") == iv(0, make_rational(1, 2)));
    CHECK(bounds.at("C") == iv(make_rational(1, 2), 1));
    CHECK(entail(ex.graph, ex.constraints, "B") == iv(0, make_rational(1, 2)));
    CHECK(oracle_entail_all(ex.graph, ex.constraints) == bounds);
}

TEST_CASE("three-argument chain becomes unsatisfiable with p(A) >= 1") {
    ChainExample ex;
    ex.add("c2", "p(A) >= 1");
    const auto sat = satisfiable(ex.graph, ex.constraints);
    CHECK_FALSE(sat.satisfiable);
    CHECK(sat.conflict == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK_FALSE(oracle_satisfiable(ex.graph, ex.constraints));
    try {
        (void)entail_all(ex.graph, ex.constraints);
        FAIL("expected unsatisfiable");
    } catch (const UnsatisfiableError& e) {
        CHECK(e.conflict() == std::vector<std::string>{"SE(A->B)", "ATT(B->C)", "assumption c1", "assumption c2"});
    }
    CHECK_THROWS_AS((void)entail(ex.graph, ex.constraints, "A"), UnsatisfiableError);
    CHECK_THROWS_AS((void)oracle_entail(ex.graph, ex.constraints, "A"), UnsatisfiableError);
}

TEST_CASE("entailment on an unknown argument") {
    ChainExample ex;
    CHECK_THROWS_AS((void)entail(ex.graph, ex.constraints, "Z"), UnknownArgument);
    CHECK_THROWS_AS((void)entail_all(ex.graph, ex.constraints).at("Z"), UnknownArgument);
}

TEST_CASE("satisfiable witness realises as a distribution") {
    ChainExample ex;
    const auto sat = satisfiable(ex.graph, ex.constraints);
    REQUIRE(sat.satisfiable);
    const auto dist = realize(sat.witness);
    CHECK(dist.total() == 1);
    for (std::size_t i = 0; i < sat.witness.size(); ++i) {
        CHECK(dist.marginal(i) == sat.witness[i]);
    }
}

TEST_CASE("realize rejects out-of-range marginals") {
    CHECK_THROWS_AS(realize({make_rational(3, 2)}), ValidationError);
    CHECK_THROWS_AS(realize({make_rational(-1, 2)}), ValidationError);
    CHECK_THROWS_AS(realize(std::vector<Rational>(kRealizeMaxArguments + 1, Rational(0))), ValidationError);
}

TEST_CASE("property: realize reproduces arbitrary marginals") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Rational> m(1 + rng() % 6);
        for (auto& v : m) {
            v = testing::unit_rational(rng, 9);
        }
        const auto dist = realize(m);
        CHECK(dist.total() == 1);
        for (const auto& p : dist.probability) {
            CHECK(p >= 0);
        }
        for (std::size_t i = 0; i < m.size(); ++i) {
            CHECK(dist.marginal(i) == m[i]);
        }
    }
}

TEST_CASE("oracle guard") {
    ArgGraph g;
    for (std::size_t i = 0; i <= kOracleMaxArguments; ++i) {
        g.add_argument("X" + std::to_string(i));
    }
    CHECK_THROWS_AS((void)oracle_satisfiable(g, ConstraintSet{}), ValidationError);
}

TEST_CASE("property: marginal LP agrees with the world LP") {
    std::mt19937 rng(1234);
    int sat = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const auto inst = testing::random_graph_instance(rng, 5, 6, 5);
        CAPTURE(trial);
        const auto marginal = satisfiable(inst.graph, inst.constraints);
        REQUIRE(marginal.satisfiable == oracle_satisfiable(inst.graph, inst.constraints));
        if (!marginal.satisfiable) {
            continue;
        }
        ++sat;
        CHECK(entail_all(inst.graph, inst.constraints) == oracle_entail_all(inst.graph, inst.constraints));
    }
    CHECK(sat > 30);
}

TEST_CASE("property: entail_all equals per-argument entail") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const auto inst = testing::random_graph_instance(rng, 7, 10, 4);
        if (!satisfiable(inst.graph, inst.constraints).satisfiable) {
            continue;
        }
        const auto all = entail_all(inst.graph, inst.constraints);
        for (const auto& id : inst.graph.arguments()) {
            CHECK(all.at(id) == entail(inst.graph, inst.constraints, id));
        }
    }
}

TEST_CASE("property: entail_all equals per-argument entail on chained legal cases") {
    std::mt19937 rng(101);
    for (int trial = 0; trial < 6; ++trial) {
        const auto legal = testing::chained_legal_case(rng, 40 + 10 * static_cast<std::size_t>(trial), 4 + trial);
        const auto cs = legal.constraints();
        const auto all = entail_all(legal.graph(), cs);
        CAPTURE(trial);
        for (const auto& id : legal.graph().arguments()) {
            CHECK(all.at(id) == entail(legal.graph(), cs, id));
        }
    }
}

TEST_CASE("entail_all reports the same conflict as satisfiable") {
    std::mt19937 rng(103);
    auto legal = testing::chained_legal_case(rng, 30, 5);
    legal = legal.assume("x1", "p(Einc) >= 0.8").assume("x2", "p(Eex) >= 0.8");
    const auto cs = legal.constraints();
    REQUIRE_FALSE(satisfiable(legal.graph(), cs).satisfiable);
    try {
        (void)entail_all(legal.graph(), cs);
        FAIL("expected UnsatisfiableError");
    } catch (const UnsatisfiableError& e) {
        CHECK(e.conflict() == describe_conflict(cs, satisfiable(legal.graph(), cs).conflict));
    }
}

TEST_CASE("property: adding constraints narrows every interval") {
    std::mt19937 rng(42);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto inst = testing::random_graph_instance(rng, 6, 8, 3);
        if (!satisfiable(inst.graph, inst.constraints).satisfiable) {
            continue;
        }
        const auto before = entail_all(inst.graph, inst.constraints);
        LinearConstraint c;
        c.terms[inst.graph.arguments()[rng() % inst.graph.size()]] = testing::small_rational(rng, 2, 2);
        c.bound = testing::small_rational(rng, 1, 3);
        inst.constraints.add(c, Provenance{ConstraintOrigin::Assumption, "extra", std::nullopt});
        if (!satisfiable(inst.graph, inst.constraints).satisfiable) {
            continue;
        }
        ++checked;
        const auto after = entail_all(inst.graph, inst.constraints);
        for (const auto& id : inst.graph.arguments()) {
            CHECK(before.at(id).contains(after.at(id)));
        }
    }
    CHECK(checked > 20);
}

TEST_CASE("property: witness satisfies every constraint and lies inside the bounds") {
    std::mt19937 rng(8);
    for (int trial = 0; trial < 80; ++trial) {
        const auto inst = testing::random_graph_instance(rng, 6, 8, 4);
        const auto sat = satisfiable(inst.graph, inst.constraints);
        if (!sat.satisfiable) {
            continue;
        }
        for (const auto& item : inst.constraints) {
            Rational lhs;
            for (const auto& [id, coef] : item.constraint.terms) {
                lhs += coef * sat.witness[inst.graph.index_of(id)];
            }
            CHECK(lhs <= item.constraint.bound);
        }
        const auto bounds = entail_all(inst.graph, inst.constraints);
        for (std::size_t i = 0; i < inst.graph.size(); ++i) {
            const auto& b = bounds.at(inst.graph.arguments()[i]);
            CHECK(b.lower <= sat.witness[i]);
            CHECK(sat.witness[i] <= b.upper);
        }
    }
}
