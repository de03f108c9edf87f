// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include "peal/epistemic.hpp"

#include <stdexcept>

#include "peal/errors.hpp"

namespace peal {

void BeliefBounds::set(const ArgumentId& id, Interval interval) {
    if (const auto it = index_.find(id); it != index_.end()) {
        entries_[it->second].second = std::move(interval);
        return;
    }
    index_.emplace(id, entries_.size());
    entries_.emplace_back(id, std::move(interval));
}

const Interval& BeliefBounds::at(const ArgumentId& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) {
        throw UnknownArgument(id);
    }
    return entries_[it->second].second;
}

lp::Problem marginal_problem(const ArgGraph& graph, const ConstraintSet& constraints) {
    lp::Problem problem;
    problem.num_vars = graph.size();
    problem.rows.reserve(constraints.size());
    for (const auto& item : constraints) {
        lp::Row row;
        row.bound = item.constraint.bound;
        for (const auto& [id, coef] : item.constraint.terms) {
            row.terms.push_back(lp::Term{graph.index_of(id), coef});
        }
        problem.rows.push_back(std::move(row));
    }
    return problem;
}

std::vector<std::string> describe_conflict(const ConstraintSet& constraints, const std::vector<std::size_t>& rows) {
    std::vector<std::string> labels;
    labels.reserve(rows.size());
    for (const auto r : rows) {
        labels.push_back(constraints[r].provenance.describe());
    }
    return labels;
}

Satisfiability satisfiable(const ArgGraph& graph, const ConstraintSet& constraints) {
    const auto outcome = lp::feasible(marginal_problem(graph, constraints));
    Satisfiability result;
    result.satisfiable = outcome.status == lp::Status::Feasible;
    result.witness = outcome.witness;
    result.conflict = outcome.conflict;
    return result;
}

namespace {

[[noreturn]] void raise_unsatisfiable(const lp::Problem& problem, const lp::Simplex& simplex,
                                      const ConstraintSet& constraints) {
    throw UnsatisfiableError(
        describe_conflict(constraints, lp::irreducible_conflict(problem, simplex.conflict())));
}

} // namespace

Interval entail(const ArgGraph& graph, const ConstraintSet& constraints, const ArgumentId& id) {
    const std::size_t var = graph.index_of(id);
    const auto problem = marginal_problem(graph, constraints);
    lp::Simplex simplex(problem);
    if (!simplex.check()) {
        raise_unsatisfiable(problem, simplex, constraints);
    }
    Interval interval;
    interval.lower = simplex.optimize(var, lp::Sense::Minimize);
    interval.upper = simplex.optimize(var, lp::Sense::Maximize);
    return interval;
}

BeliefBounds entail_all(const ArgGraph& graph, const ConstraintSet& constraints) {
    const auto problem = marginal_problem(graph, constraints);
    const auto solved = lp::decomposed_ranges(problem);
    if (!solved) {
        lp::Simplex simplex(problem);
        if (simplex.check()) {
            throw std::logic_error("decomposition reported infeasible on a feasible program");
        }
        raise_unsatisfiable(problem, simplex, constraints);
    }
    BeliefBounds bounds;
    for (std::size_t i = 0; i < graph.size(); ++i) {
        bounds.set(graph.arguments()[i], Interval{(*solved)[i].lower, (*solved)[i].upper});
    }
    return bounds;
}

} // namespace peal
