// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "peal/arg_graph.hpp"
#include "peal/constraint.hpp"
#include "peal/epistemic.hpp"
#include "peal/errors.hpp"
#include "peal/rational.hpp"

namespace peal {

inline constexpr std::string_view kInnocence = "Innocence";
inline constexpr std::string_view kInculpatory = "Einc";
inline constexpr std::string_view kExculpatory = "Eex";

/// Optional meta-hypotheses refining the inculpatory/exculpatory split.
inline constexpr std::string_view kExtendedMeta[] = {"Ed", "Ec", "Motive", "Opportunity", "Alibi", "Ability"};

bool is_core_meta(std::string_view id);
bool is_extended_meta(std::string_view id);

enum class Role { Meta, SubHypothesis, Evidence };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

/// Blaf enforces the legal scheme; Plain accepts any weighted graph and
/// only generates edge constraints.
enum class Framework { Blaf, Plain };

struct ArgumentDecl {
    ArgumentId id;
    Role role = Role::Evidence;
    std::string label;
    bool operator==(const ArgumentDecl&) const = default;
};

/// Supporters whose weighted beliefs jointly floor `target`.
struct CsGroup {
    ArgumentId target;
    std::vector<Neighbor> members;
    bool operator==(const CsGroup&) const = default;
};

/// Unvalidated description of a case structure.
struct CaseSpec {
    Framework framework = Framework::Blaf;
    std::vector<ArgumentDecl> arguments;
    std::vector<Edge> edges;
    std::vector<CsGroup> cs_groups;
    bool operator==(const CaseSpec&) const = default;
};

/// A validation failure tied to one element of the case ("argument:X",
/// "edge:A->B", "cs:T"), so file loaders can point at the offending line.
class CaseValidationError : public ValidationError {
  public:
    CaseValidationError(const std::string& message, std::string subject)
        : ValidationError(message), subject_(std::move(subject)) {}
    [[nodiscard]] const std::string& subject() const { return subject_; }

  private:
    std::string subject_;
};

struct Assumption {
    std::string id;
    std::string text; // DSL source, empty when built from constraints directly
    std::vector<LinearConstraint> constraints;
    bool operator==(const Assumption&) const = default;
};

/// A validated case: graph, partition, generated scheme constraints and
/// user assumptions. Immutable; assume()/retract() return new versions.
class BlafCase {
  public:
    [[nodiscard]] Framework framework() const { return framework_; }
    [[nodiscard]] const ArgGraph& graph() const { return graph_; }
    [[nodiscard]] Role role(const ArgumentId& id) const;
    [[nodiscard]] const std::string& label(const ArgumentId& id) const;
    [[nodiscard]] const std::vector<CsGroup>& cs_groups() const { return cs_groups_; }
    [[nodiscard]] const ConstraintSet& scheme() const { return scheme_; }
    [[nodiscard]] const std::vector<Assumption>& assumptions() const { return assumptions_; }
    /// Edge replacements and similar non-fatal findings from construction.
    [[nodiscard]] const std::vector<std::string>& notes() const { return notes_; }

    /// Scheme constraints followed by assumption constraints.
    [[nodiscard]] ConstraintSet constraints() const;

    [[nodiscard]] bool is_cs_edge(const ArgumentId& source, const ArgumentId& target) const;
    [[nodiscard]] bool is_cs_member(const ArgumentId& id) const;
    [[nodiscard]] const Assumption* find_assumption(std::string_view id) const;
    /// Arguments mentioned by some assumption.
    [[nodiscard]] std::set<ArgumentId> directly_constrained() const;

    /// Throws UnknownArgument for a term outside the graph and
    /// ValidationError for a duplicate id.
    [[nodiscard]] BlafCase assume(Assumption assumption) const;
    /// Parses `dsl` and records it under `id`. Throws ParseError as well.
    [[nodiscard]] BlafCase assume(std::string id, std::string_view dsl) const;
    /// Throws ValidationError for an unknown id.
    [[nodiscard]] BlafCase retract(std::string_view id) const;

    bool operator==(const BlafCase& other) const {
        return framework_ == other.framework_ && graph_ == other.graph_ && roles_ == other.roles_ &&
               cs_groups_ == other.cs_groups_ && scheme_ == other.scheme_ && assumptions_ == other.assumptions_;
    }

  private:
    friend BlafCase build_case(const CaseSpec& spec);

    Framework framework_ = Framework::Blaf;
    ArgGraph graph_;
    std::map<ArgumentId, Role> roles_;
    std::map<ArgumentId, std::string> labels_;
    std::vector<CsGroup> cs_groups_;
    std::set<std::pair<ArgumentId, ArgumentId>> cs_edges_;
    ConstraintSet scheme_;
    std::vector<Assumption> assumptions_;
    std::vector<std::string> notes_;
};

/// Validates `spec` and generates its scheme constraints: for the legal
/// scheme IE and EE, then per edge in order SE (support) or weighted
/// coherence (attack) unless the edge belongs to a CS group, then one CS
/// constraint per group. Throws CaseValidationError.
BlafCase build_case(const CaseSpec& spec);

/// Shorthand for build_case on a spec whose framework is Blaf.
BlafCase build_blaf(CaseSpec spec);

/// Skeleton of the extended legal scheme: the three core meta-hypotheses,
/// the six extended ones, support edges Ed/Ec -> Einc and Alibi/Ability ->
/// Eex of weight 1, and a CS group {Motive, Opportunity} -> Ec with the
/// given weights. Throws CaseValidationError when the weights sum above 1.
CaseSpec build_extended_template(const Rational& motive_weight, const Rational& opportunity_weight);

/// Beliefs under presumption of innocence: the belief in Innocence is its
/// upper bound; every other argument gets its full interval.
struct Verdict {
    std::optional<Rational> innocence_belief; // absent for plain graphs
    BeliefBounds bounds;
};

/// Solves scheme + assumptions. Throws UnsatisfiableError whose conflict
/// names the provenance of an irreducible conflicting subset.
Verdict beliefs(const BlafCase& legal_case);

/// One checked inequality  lhs <= rhs.
struct BoundCheck {
    std::string name;
    std::string statement;
    Rational lhs;
    Rational rhs;
    bool holds = false;
};

struct MetaBoundReport {
    std::vector<BoundCheck> checks;
    [[nodiscard]] bool all_hold() const;
};

/// Consequences of IE/EE/SE that every satisfiable legal case obeys:
///   upper(Einc) <= 1 - lower(Eex),  upper(Eex) <= 1 - lower(Einc),
/// and for each support edge (a, E) into Einc (Eex) with weight w the
/// cross bound upper(other) <= 1 - w * lower(a).
MetaBoundReport check_meta_bounds(const BlafCase& legal_case, const BeliefBounds& bounds);

/// Solves, then checks.
MetaBoundReport check_meta_bounds(const BlafCase& legal_case);

} // namespace peal
