// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "peal/arg_graph.hpp"
#include "peal/constraint.hpp"
#include "peal/rational.hpp"
#include "peal/simplex.hpp"

namespace peal {

/// Closed belief interval [lower, upper] within [0, 1].
struct Interval {
    Rational lower;
    Rational upper;

    [[nodiscard]] bool contains(const Interval& inner) const {
        return lower <= inner.lower && inner.upper <= upper;
    }
    bool operator==(const Interval&) const = default;
};

/// Entailed interval per argument, in graph order.
class BeliefBounds {
  public:
    void set(const ArgumentId& id, Interval interval);
    [[nodiscard]] const Interval& at(const ArgumentId& id) const; // throws UnknownArgument
    [[nodiscard]] bool contains(const ArgumentId& id) const { return index_.count(id) != 0; }
    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] auto begin() const { return entries_.begin(); }
    [[nodiscard]] auto end() const { return entries_.end(); }

    bool operator==(const BeliefBounds& other) const { return entries_ == other.entries_; }

  private:
    std::vector<std::pair<ArgumentId, Interval>> entries_;
    std::unordered_map<ArgumentId, std::size_t> index_;
};

struct Satisfiability {
    bool satisfiable = false;
    std::vector<Rational> witness;      // marginals in graph order, when satisfiable
    std::vector<std::size_t> conflict;  // irreducible subset of constraint indices, when not
};

/// Marginal LP: one variable per argument in graph order, one row per constraint.
lp::Problem marginal_problem(const ArgGraph& graph, const ConstraintSet& constraints);

/// Decides satisfiability through the marginal LP. Any point of [0,1]^n is
/// the marginal vector of some product distribution, so constraints that
/// only mention marginals are satisfiable iff this LP is feasible.
Satisfiability satisfiable(const ArgGraph& graph, const ConstraintSet& constraints);

/// Exact [min, max] of p(id). Throws UnsatisfiableError (with provenance
/// labels of an irreducible conflict) when the constraints are unsatisfiable.
Interval entail(const ArgGraph& graph, const ConstraintSet& constraints, const ArgumentId& id);

/// Intervals for every argument, solved piecewise (see
/// lp::decomposed_ranges). Throws UnsatisfiableError as entail does.
BeliefBounds entail_all(const ArgGraph& graph, const ConstraintSet& constraints);

/// Provenance labels for a set of constraint indices.
std::vector<std::string> describe_conflict(const ConstraintSet& constraints, const std::vector<std::size_t>& rows);

} // namespace peal
