// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "peal/arg_graph.hpp"
#include "peal/constraint.hpp"
#include "peal/epistemic.hpp"
#include "peal/rational.hpp"

namespace peal {

/// Largest graph the possible-world oracle accepts (2^n world variables).
inline constexpr std::size_t kOracleMaxArguments = 16;

/// Largest graph realize() expands.
inline constexpr std::size_t kRealizeMaxArguments = 20;

/// Probability per possible world. World w is the set of arguments whose
/// graph index has its bit set in w.
struct WorldDistribution {
    std::size_t num_arguments = 0;
    std::vector<Rational> probability; // size 2^num_arguments

    /// P(A_i) = sum over worlds containing A_i.
    [[nodiscard]] Rational marginal(std::size_t argument) const;
    [[nodiscard]] Rational total() const;
};

/// Product distribution whose marginals equal `marginals` exactly.
/// Throws ValidationError for a value outside [0, 1] or too many arguments.
WorldDistribution realize(const std::vector<Rational>& marginals);

// The oracle works directly with probability functions over all 2^n
// possible worlds: one LP variable per world, sum P(w) = 1, and every
// constraint expanded through P(A) = sum_{w containing A} P(w). It runs its
// own revised simplex and shares no code with the marginal LP, so the two
// routes check each other. Each call throws ValidationError when the graph
// has more than kOracleMaxArguments arguments.

bool oracle_satisfiable(const ArgGraph& graph, const ConstraintSet& constraints);

/// Throws UnsatisfiableError when the world LP is infeasible.
Interval oracle_entail(const ArgGraph& graph, const ConstraintSet& constraints, const ArgumentId& id);

/// Throws UnsatisfiableError when the world LP is infeasible.
BeliefBounds oracle_entail_all(const ArgGraph& graph, const ConstraintSet& constraints);

} // namespace peal
