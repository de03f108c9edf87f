// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include "peal/blaf.hpp"

#include <algorithm>

namespace peal {

bool is_core_meta(std::string_view id) { return id == kInnocence || id == kInculpatory || id == kExculpatory; }

bool is_extended_meta(std::string_view id) {
    return std::find(std::begin(kExtendedMeta), std::end(kExtendedMeta), id) != std::end(kExtendedMeta);
}

std::string_view to_string(Role role) {
    switch (role) {
    case Role::Meta:
        return "meta";
    case Role::SubHypothesis:
        return "sub";
    case Role::Evidence:
        return "evidence";
    }
    return "?";
}

std::optional<Role> parse_role(std::string_view text) {
    if (text == "meta") {
        return Role::Meta;
    }
    if (text == "sub") {
        return Role::SubHypothesis;
    }
    if (text == "evidence") {
        return Role::Evidence;
    }
    return std::nullopt;
}

Role BlafCase::role(const ArgumentId& id) const {
    const auto it = roles_.find(id);
    if (it == roles_.end()) {
        throw UnknownArgument(id);
    }
    return it->second;
}

const std::string& BlafCase::label(const ArgumentId& id) const {
    static const std::string none;
    const auto it = labels_.find(id);
    return it == labels_.end() ? none : it->second;
}

ConstraintSet BlafCase::constraints() const {
    ConstraintSet all = scheme_;
    for (const auto& a : assumptions_) {
        for (const auto& c : a.constraints) {
            all.add(c, Provenance{ConstraintOrigin::Assumption, a.id, std::nullopt});
        }
    }
    return all;
}

bool BlafCase::is_cs_edge(const ArgumentId& source, const ArgumentId& target) const {
    return cs_edges_.count({source, target}) != 0;
}

bool BlafCase::is_cs_member(const ArgumentId& id) const {
    return std::any_of(cs_edges_.begin(), cs_edges_.end(), [&](const auto& e) { return e.first == id; });
}

const Assumption* BlafCase::find_assumption(std::string_view id) const {
    for (const auto& a : assumptions_) {
        if (a.id == id) {
            return &a;
        }
    }
    return nullptr;
}

std::set<ArgumentId> BlafCase::directly_constrained() const {
    std::set<ArgumentId> ids;
    for (const auto& a : assumptions_) {
        for (const auto& c : a.constraints) {
            for (const auto& [id, coef] : c.terms) {
                ids.insert(id);
            }
        }
    }
    return ids;
}

BlafCase BlafCase::assume(Assumption assumption) const {
    if (assumption.id.empty()) {
        throw ValidationError("assumption id must not be empty");
    }
    if (find_assumption(assumption.id) != nullptr) {
        throw ValidationError("assumption id '" + assumption.id + "' already in use");
    }
    for (const auto& c : assumption.constraints) {
        for (const auto& [id, coef] : c.terms) {
            if (!graph_.contains(id)) {
                throw UnknownArgument(id);
            }
        }
    }
    BlafCase next = *this;
    next.assumptions_.push_back(std::move(assumption));
    return next;
}

BlafCase BlafCase::assume(std::string id, std::string_view dsl) const {
    Assumption a;
    a.id = std::move(id);
    a.text = std::string(dsl);
    a.constraints = parse_constraint(dsl);
    return assume(std::move(a));
}

BlafCase BlafCase::retract(std::string_view id) const {
    BlafCase next = *this;
    const auto it = std::find_if(next.assumptions_.begin(), next.assumptions_.end(),
                                 [&](const Assumption& a) { return a.id == id; });
    if (it == next.assumptions_.end()) {
        throw ValidationError("no assumption with id '" + std::string(id) + "'");
    }
    next.assumptions_.erase(it);
    return next;
}

namespace {

std::string edge_subject(const ArgumentId& source, const ArgumentId& target) {
    return "edge:" + source + "->" + target;
}

[[noreturn]] void reject_edge(const Edge& e, const std::string& why) {
    throw CaseValidationError("edge " + e.source + " -> " + e.target + ": " + why, edge_subject(e.source, e.target));
}

void validate_core_meta(const std::map<ArgumentId, Role>& roles) {
    for (const auto core : {kInnocence, kInculpatory, kExculpatory}) {
        const auto it = roles.find(std::string(core));
        if (it == roles.end()) {
            throw CaseValidationError("legal scheme requires the meta-hypothesis " + std::string(core),
                                      "argument:" + std::string(core));
        }
        if (it->second != Role::Meta) {
            throw CaseValidationError(std::string(core) + " must be tagged meta", "argument:" + std::string(core));
        }
    }
}

void validate_legal_scheme(const CaseSpec& spec, const BlafCase& built) {
    const ArgGraph& g = built.graph();
    const auto inc = g.weight(std::string(kInculpatory), std::string(kInnocence));
    if (!inc) {
        throw CaseValidationError("meta-edge rule: missing edge Einc -> Innocence (weight -1)",
                                  edge_subject("Einc", "Innocence"));
    }
    if (*inc != -1) {
        throw CaseValidationError("meta-edge rule: w(Einc, Innocence) must be -1, found " + to_exact_string(*inc),
                                  edge_subject("Einc", "Innocence"));
    }
    const auto ex = g.weight(std::string(kExculpatory), std::string(kInnocence));
    if (!ex) {
        throw CaseValidationError("meta-edge rule: missing edge Eex -> Innocence (weight 1)",
                                  edge_subject("Eex", "Innocence"));
    }
    if (*ex != 1) {
        throw CaseValidationError("meta-edge rule: w(Eex, Innocence) must be 1, found " + to_exact_string(*ex),
                                  edge_subject("Eex", "Innocence"));
    }

    for (const auto& e : g.edges()) {
        const bool meta_edge = (e.source == kInculpatory || e.source == kExculpatory) && e.target == kInnocence;
        if (meta_edge) {
            continue;
        }
        if (e.source == kInnocence || e.target == kInnocence) {
            reject_edge(e, "only the meta edges Einc -> Innocence and Eex -> Innocence may touch Innocence");
        }
        if (e.source == kInculpatory || e.source == kExculpatory) {
            reject_edge(e, "Einc and Eex may only point to Innocence");
        }
        if (e.target == kInculpatory || e.target == kExculpatory) {
            if (e.weight < 0 || e.weight > 1) {
                reject_edge(e, "support edges into Einc/Eex need a weight in [0, 1], found " +
                                   to_exact_string(e.weight));
            }
        }
    }
    for (const auto& group : spec.cs_groups) {
        if (group.target == kInnocence) {
            throw CaseValidationError("collective support cannot target Innocence", "cs:" + group.target);
        }
        for (const auto& m : group.members) {
            if (is_core_meta(m.id)) {
                throw CaseValidationError("core meta-hypothesis " + m.id + " cannot be a collective supporter",
                                          "cs:" + group.target);
            }
        }
    }
}

} // namespace

BlafCase build_case(const CaseSpec& spec) {
    BlafCase built;
    built.framework_ = spec.framework;

    for (const auto& decl : spec.arguments) {
        if (!is_valid_argument_id(decl.id)) {
            throw CaseValidationError("invalid argument identifier '" + decl.id + "'", "argument:" + decl.id);
        }
        if (built.roles_.count(decl.id) != 0) {
            throw CaseValidationError("argument '" + decl.id + "' declared twice", "argument:" + decl.id);
        }
        built.graph_.add_argument(decl.id);
        built.roles_[decl.id] = decl.role;
        if (!decl.label.empty()) {
            built.labels_[decl.id] = decl.label;
        }
    }

    if (spec.framework == Framework::Blaf) {
        validate_core_meta(built.roles_);
    }

    for (const auto& e : spec.edges) {
        try {
            if (built.graph_.add_edge(e.source, e.target, e.weight) == EdgeInsert::Replaced) {
                built.notes_.push_back("edge " + e.source + " -> " + e.target + " redefined; weight " +
                                       to_exact_string(e.weight) + " kept");
            }
        } catch (const ValidationError& err) {
            throw CaseValidationError(err.what(), edge_subject(e.source, e.target));
        }
    }

    for (const auto& group : spec.cs_groups) {
        const std::string subject = "cs:" + group.target;
        if (!built.graph_.contains(group.target)) {
            throw CaseValidationError("collective support target '" + group.target + "' is not declared", subject);
        }
        if (group.members.empty()) {
            throw CaseValidationError("collective support group for " + group.target + " has no members", subject);
        }
        for (const auto& m : group.members) {
            if (!built.graph_.contains(m.id)) {
                throw CaseValidationError("collective supporter '" + m.id + "' is not declared", subject);
            }
            if (m.weight <= 0) {
                throw CaseValidationError("collective support weight of " + m.id + " must be positive", subject);
            }
            if (!built.cs_edges_.insert({m.id, group.target}).second) {
                throw CaseValidationError("edge " + m.id + " -> " + group.target +
                                              " belongs to more than one collective support group",
                                          subject);
            }
            if (const auto w = built.graph_.weight(m.id, group.target)) {
                if (*w != m.weight) {
                    throw CaseValidationError("edge " + m.id + " -> " + group.target + " has weight " +
                                                  to_exact_string(*w) + " but its collective support group says " +
                                                  to_exact_string(m.weight),
                                              subject);
                }
            } else {
                built.graph_.add_edge(m.id, group.target, m.weight);
            }
        }
        try {
            (void)gen_collective_support(group.members, group.target);
        } catch (const ValidationError& err) {
            throw CaseValidationError(err.what(), subject);
        }
        built.cs_groups_.push_back(group);
    }

    if (spec.framework == Framework::Blaf) {
        validate_legal_scheme(spec, built);
        const ArgumentId innocence(kInnocence);
        built.scheme_.add(gen_attack(Edge{std::string(kInculpatory), innocence, -1}),
                          Provenance{ConstraintOrigin::Inculpatory, "IE", std::nullopt});
        built.scheme_.add(gen_support(Edge{std::string(kExculpatory), innocence, 1}),
                          Provenance{ConstraintOrigin::Exculpatory, "EE", std::nullopt});
    }

    for (const auto& e : built.graph_.edges()) {
        if (spec.framework == Framework::Blaf && e.target == kInnocence) {
            continue;
        }
        if (built.is_cs_edge(e.source, e.target)) {
            continue;
        }
        const std::string pair = "(" + e.source + "->" + e.target + ")";
        if (e.is_support()) {
            built.scheme_.add(gen_support(e), Provenance{ConstraintOrigin::Support, "SE" + pair, std::nullopt});
        } else {
            built.scheme_.add(gen_attack(e), Provenance{ConstraintOrigin::Attack, "ATT" + pair, std::nullopt});
        }
    }
    for (const auto& group : built.cs_groups_) {
        built.scheme_.add(gen_collective_support(group.members, group.target),
                          Provenance{ConstraintOrigin::CollectiveSupport, "CS(" + group.target + ")", std::nullopt});
    }
    return built;
}

BlafCase build_blaf(CaseSpec spec) {
    spec.framework = Framework::Blaf;
    return build_case(spec);
}

CaseSpec build_extended_template(const Rational& motive_weight, const Rational& opportunity_weight) {
    CaseSpec spec;
    spec.framework = Framework::Blaf;
    for (const auto core : {kInnocence, kInculpatory, kExculpatory}) {
        spec.arguments.push_back({std::string(core), Role::Meta, {}});
    }
    for (const auto ext : kExtendedMeta) {
        spec.arguments.push_back({std::string(ext), Role::Meta, {}});
    }
    spec.edges = {
        {"Einc", "Innocence", -1}, {"Eex", "Innocence", 1}, {"Ed", "Einc", 1},
        {"Ec", "Einc", 1},         {"Alibi", "Eex", 1},     {"Ability", "Eex", 1},
    };
    spec.cs_groups.push_back(CsGroup{"Ec", {{"Motive", motive_weight}, {"Opportunity", opportunity_weight}}});
    (void)build_case(spec);
    return spec;
}

Verdict beliefs(const BlafCase& legal_case) {
    Verdict verdict;
    verdict.bounds = entail_all(legal_case.graph(), legal_case.constraints());
    if (legal_case.framework() == Framework::Blaf) {
        verdict.innocence_belief = verdict.bounds.at(std::string(kInnocence)).upper;
    }
    return verdict;
}

bool MetaBoundReport::all_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.holds; });
}

MetaBoundReport check_meta_bounds(const BlafCase& legal_case, const BeliefBounds& bounds) {
    MetaBoundReport report;
    if (legal_case.framework() != Framework::Blaf) {
        return report;
    }
    const std::string inc(kInculpatory);
    const std::string ex(kExculpatory);
    const auto& b_inc = bounds.at(inc);
    const auto& b_ex = bounds.at(ex);

    auto add = [&](std::string name, std::string statement, Rational lhs, Rational rhs) {
        const bool holds = lhs <= rhs;
        report.checks.push_back(BoundCheck{std::move(name), std::move(statement), std::move(lhs), std::move(rhs), holds});
    };
    add("exclusive:Einc", "upper(Einc) <= 1 - lower(Eex)", b_inc.upper, 1 - b_ex.lower);
    add("exclusive:Eex", "upper(Eex) <= 1 - lower(Einc)", b_ex.upper, 1 - b_inc.lower);

    for (const auto& e : legal_case.graph().edges()) {
        const bool into_inc = e.target == inc;
        const bool into_ex = e.target == ex;
        if ((!into_inc && !into_ex) || !e.is_support()) {
            continue;
        }
        const std::string& other = into_inc ? ex : inc;
        add("cross:" + e.source + "->" + e.target,
            "upper(" + other + ") <= 1 - w(" + e.source + "," + e.target + ") * lower(" + e.source + ")",
            bounds.at(other).upper, 1 - e.weight * bounds.at(e.source).lower);
    }
    return report;
}

MetaBoundReport check_meta_bounds(const BlafCase& legal_case) {
    return check_meta_bounds(legal_case, beliefs(legal_case).bounds);
}

} // namespace peal
