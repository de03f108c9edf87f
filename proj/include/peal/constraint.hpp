// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "peal/arg_graph.hpp"
#include "peal/rational.hpp"

namespace peal {

using LinearTerms = std::vector<std::pair<ArgumentId, Rational>>;

/// Canonical linear atomic constraint  sum_i coef_i * p(A_i) <= bound.
/// Coefficients are never zero; the map keeps terms in identifier order.
struct LinearConstraint {
    std::map<ArgumentId, Rational> terms;
    Rational bound;

    [[nodiscard]] bool trivially_true() const { return terms.empty() && bound >= 0; }
    [[nodiscard]] Rational coefficient(const ArgumentId& id) const;
    bool operator==(const LinearConstraint&) const = default;
};

/// Moves every probability term to the left and every constant to the right:
///   lhs_const + lhs_terms <= rhs_const + rhs_terms
/// becomes (lhs_terms - rhs_terms) <= rhs_const - lhs_const.
LinearConstraint canonicalize(const Rational& lhs_const, const LinearTerms& lhs_terms, const Rational& rhs_const,
                              const LinearTerms& rhs_terms);

enum class ConstraintOrigin {
    Inculpatory,       // IE: ceiling on Innocence from Einc
    Exculpatory,       // EE: floor on Innocence from Eex
    Support,           // SE
    Attack,            // weighted coherence
    CollectiveSupport, // CS
    Assumption,        // user-added
    Source,            // free-standing DSL text
};

std::string_view to_string(ConstraintOrigin origin);

struct SourceSpan {
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t length = 0;
    bool operator==(const SourceSpan&) const = default;
};

struct Provenance {
    ConstraintOrigin origin = ConstraintOrigin::Source;
    std::string label; // "IE", "SE(T1->Einc)", assumption id, ...
    std::optional<SourceSpan> span;

    [[nodiscard]] std::string describe() const;
    bool operator==(const Provenance&) const = default;
};

struct TaggedConstraint {
    LinearConstraint constraint;
    Provenance provenance;
    bool operator==(const TaggedConstraint&) const = default;
};

/// Ordered list of constraints, each carrying its provenance.
class ConstraintSet {
  public:
    void add(LinearConstraint constraint, Provenance provenance);
    void append(const ConstraintSet& other);

    [[nodiscard]] std::size_t size() const { return items_.size(); }
    [[nodiscard]] bool empty() const { return items_.empty(); }
    [[nodiscard]] const TaggedConstraint& operator[](std::size_t i) const { return items_[i]; }
    [[nodiscard]] auto begin() const { return items_.begin(); }
    [[nodiscard]] auto end() const { return items_.end(); }

    /// Throws UnknownArgument when a term mentions an argument outside `graph`.
    void validate_against(const ArgGraph& graph) const;

    bool operator==(const ConstraintSet&) const = default;

  private:
    std::vector<TaggedConstraint> items_;
};

// DSL
//   constraint := expr ("<=" | ">=" | "=") expr
//   expr       := [sign] term (("+" | "-") term)*
//   term       := rat | rat "*" atom | atom
//   atom       := "p(" ident ")"
//   rat        := decimal | int "/" int

/// Parses one DSL constraint. `>=` flips sides, `=` yields two constraints.
/// `origin` shifts reported positions for text embedded in a larger file.
/// Throws ParseError. Argument existence is checked later by validation.
std::vector<LinearConstraint> parse_constraint(std::string_view text, SourceSpan origin = {});

/// Normative textual form; parse_constraint(print_constraint(c)) == {c}.
std::string print_constraint(const LinearConstraint& constraint);

// Scheme generators.

/// Weighted coherence for an attack edge (w < 0): -w*p(A) + p(B) <= 1.
LinearConstraint gen_attack(const Edge& edge);

/// Support floor for a support edge (w > 0): w*p(A) - p(B) <= 0.
LinearConstraint gen_support(const Edge& edge);

/// Collective support: sum w_i*p(A_i) - p(B) <= 0, weights positive and
/// summing to at most 1.
LinearConstraint gen_collective_support(const std::vector<Neighbor>& group, const ArgumentId& target);

} // namespace peal
