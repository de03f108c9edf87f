// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include "peal/explainer.hpp"

#include <algorithm>
#include <utility>

#include "peal/errors.hpp"

namespace peal {

std::string_view to_string(VerdictClass verdict) {
    switch (verdict) {
    case VerdictClass::LackOfEvidence:
        return "lack-of-evidence";
    case VerdictClass::InnocentByExculpatory:
        return "innocent-by-exculpatory";
    case VerdictClass::GuiltyByInculpatory:
        return "guilty-by-inculpatory";
    }
    return "?";
}

std::string_view to_string(BoundSide side) { return side == BoundSide::Lower ? "lower" : "upper"; }

std::string_view to_string(ReasonKind kind) {
    switch (kind) {
    case ReasonKind::Supporter:
        return "supporter";
    case ReasonKind::Attacker:
        return "attacker";
    case ReasonKind::SupportedChild:
        return "supported-child";
    case ReasonKind::CsGroup:
        return "cs-group";
    case ReasonKind::MetaChain:
        return "meta-chain";
    case ReasonKind::Assumption:
        return "assumption";
    }
    return "?";
}

Rational default_threshold() { return make_rational(3, 4); }

VerdictClass classify(const Verdict& verdict, const Rational& threshold) {
    const Rational half = make_rational(1, 2);
    if (threshold <= half || threshold >= 1) {
        throw ValidationError("threshold must lie strictly between 1/2 and 1, got " + to_exact_string(threshold));
    }
    const std::string inc(kInculpatory);
    const std::string ex(kExculpatory);
    if (!verdict.bounds.contains(inc) || !verdict.bounds.contains(ex)) {
        throw ValidationError("classification needs the meta-hypotheses Einc and Eex");
    }
    if (verdict.bounds.at(ex).lower > half) {
        return VerdictClass::InnocentByExculpatory;
    }
    if (verdict.bounds.at(inc).lower > threshold) {
        return VerdictClass::GuiltyByInculpatory;
    }
    return VerdictClass::LackOfEvidence;
}

bool operator==(const Reason& a, const Reason& b) {
    return a.kind == b.kind && a.arguments == b.arguments && a.weights == b.weights && a.bounds == b.bounds &&
           a.induced == b.induced &&
           a.assumption == b.assumption && a.assumption_text == b.assumption_text && a.cycle == b.cycle &&
           a.details == b.details;
}

bool operator==(const Explanation& a, const Explanation& b) {
    return a.subject == b.subject && a.side == b.side && a.bound == b.bound && a.status == b.status &&
           a.reasons == b.reasons && a.narrative == b.narrative;
}

namespace {

using PathKey = std::pair<ArgumentId, BoundSide>;

std::string symbol(BoundSide side) { return side == BoundSide::Lower ? "≥" : "≤"; }

std::string weight_suffix(const Rational& weight) {
    const Rational magnitude = abs(weight);
    return magnitude == 1 ? "" : ", weight " + to_display_string(magnitude);
}

class Explainer {
  public:
    Explainer(const BlafCase& legal_case, const BeliefBounds& solved) : case_(legal_case), solved_(solved) {}

    Explanation lower(const ArgumentId& id, std::size_t depth, std::vector<PathKey>& path) {
        Explanation e = start(id, BoundSide::Lower);
        if (e.bound == 0) {
            e.narrative = "trivial lower bound";
            return e;
        }
        std::vector<Reason> structural;
        for (const auto& edge : case_.graph().edges()) {
            if (edge.target != id || !edge.is_support() || case_.is_cs_edge(edge.source, edge.target)) {
                continue;
            }
            const Rational induced = edge.weight * solved_.at(edge.source).lower;
            if (induced > 0) {
                structural.push_back(make_reason(ReasonKind::Supporter, {edge.source}, {edge.weight}, induced));
            }
        }
        for (const auto& group : case_.cs_groups()) {
            if (group.target != id) {
                continue;
            }
            Reason r = make_reason(ReasonKind::CsGroup, {}, {}, 0);
            for (const auto& m : group.members) {
                r.arguments.push_back(m.id);
                r.weights.push_back(m.weight);
                r.induced += m.weight * solved_.at(m.id).lower;
            }
            if (r.induced > 0) {
                structural.push_back(std::move(r));
            }
        }
        keep_extreme(structural, /*maximum=*/true);
        append(e.reasons, std::move(structural));
        append(e.reasons, assumption_reasons(id, BoundSide::Lower));
        finish(e, depth, path);
        return e;
    }

    Explanation upper(const ArgumentId& id, std::size_t depth, std::vector<PathKey>& path) {
        Explanation e = start(id, BoundSide::Upper);
        if (e.bound == 1) {
            e.narrative = "trivial upper bound";
            return e;
        }
        if (case_.is_cs_member(id)) {
            e.status = ExplanationStatus::Unavailable;
            e.narrative = "explanation unavailable: collective-support interaction";
            return e;
        }
        const bool legal = case_.framework() == Framework::Blaf;
        std::vector<Reason> attackers;
        std::vector<Reason> children;
        for (const auto& edge : case_.graph().edges()) {
            if (edge.is_attack()) {
                const Rational magnitude = abs(edge.weight);
                if (edge.target == id) {
                    const Rational ceiling = 1 - magnitude * solved_.at(edge.source).lower;
                    if (ceiling < 1) {
                        attackers.push_back(make_reason(ReasonKind::Attacker, {edge.source}, {edge.weight}, ceiling));
                    }
                } else if (edge.source == id) {
                    const Rational ceiling = std::min(Rational(1), Rational((1 - solved_.at(edge.target).lower) / magnitude));
                    if (ceiling < 1) {
                        const bool meta = legal && id == kInculpatory && edge.target == kInnocence;
                        attackers.push_back(make_reason(meta ? ReasonKind::MetaChain : ReasonKind::Attacker,
                                                        {edge.target}, {edge.weight}, ceiling));
                    }
                }
            } else if (edge.source == id && !case_.is_cs_edge(edge.source, edge.target)) {
                const Rational ceiling = std::min(Rational(1), Rational(solved_.at(edge.target).upper / edge.weight));
                if (ceiling < 1) {
                    const bool meta = legal && id == kExculpatory && edge.target == kInnocence;
                    children.push_back(make_reason(meta ? ReasonKind::MetaChain : ReasonKind::SupportedChild,
                                                   {edge.target}, {edge.weight}, ceiling));
                }
            }
        }
        keep_extreme(attackers, /*maximum=*/false);
        keep_extreme(children, /*maximum=*/false);
        if (!attackers.empty() && !children.empty()) {
            const Rational& a = attackers.front().induced;
            const Rational& u = children.front().induced;
            if (u < a) {
                attackers.clear();
            } else if (a < u) {
                children.clear();
            }
        }
        append(e.reasons, std::move(attackers));
        append(e.reasons, std::move(children));
        append(e.reasons, assumption_reasons(id, BoundSide::Upper));
        finish(e, depth, path);
        return e;
    }

  private:
    Explanation start(const ArgumentId& id, BoundSide side) {
        const Interval& interval = solved_.at(id);
        Explanation e;
        e.subject = id;
        e.side = side;
        e.bound = side == BoundSide::Lower ? interval.lower : interval.upper;
        e.status = ExplanationStatus::Trivial;
        return e;
    }

    static Reason make_reason(ReasonKind kind, std::vector<ArgumentId> arguments, std::vector<Rational> weights,
                              Rational induced) {
        Reason r;
        r.kind = kind;
        r.arguments = std::move(arguments);
        r.weights = std::move(weights);
        r.induced = std::move(induced);
        return r;
    }

    static void append(std::vector<Reason>& into, std::vector<Reason> from) {
        for (auto& r : from) {
            into.push_back(std::move(r));
        }
    }

    /// Keeps the reasons achieving the extreme induced bound, ordered by
    /// their argument ids.
    static void keep_extreme(std::vector<Reason>& reasons, bool maximum) {
        if (reasons.empty()) {
            return;
        }
        Rational best = reasons.front().induced;
        for (const auto& r : reasons) {
            if (maximum ? r.induced > best : r.induced < best) {
                best = r.induced;
            }
        }
        std::erase_if(reasons, [&](const Reason& r) { return r.induced != best; });
        std::stable_sort(reasons.begin(), reasons.end(),
                         [](const Reason& a, const Reason& b) { return a.arguments < b.arguments; });
    }

    /// One-step propagation of each assumption over the solved bounds of
    /// the other arguments it mentions.
    std::vector<Reason> assumption_reasons(const ArgumentId& id, BoundSide side) {
        std::vector<Reason> out;
        for (const auto& assumption : case_.assumptions()) {
            std::optional<Rational> best;
            for (const auto& c : assumption.constraints) {
                const auto it = c.terms.find(id);
                if (it == c.terms.end()) {
                    continue;
                }
                const Rational& coef = it->second;
                if ((side == BoundSide::Lower) != (coef < 0)) {
                    continue;
                }
                Rational rest;
                for (const auto& [other, k] : c.terms) {
                    if (other != id) {
                        const Interval& b = solved_.at(other);
                        rest += std::min(k * b.lower, k * b.upper);
                    }
                }
                if (side == BoundSide::Lower) {
                    const Rational induced = (rest - c.bound) / -coef;
                    if (induced > 0 && (!best || induced > *best)) {
                        best = induced;
                    }
                } else {
                    const Rational induced = (c.bound - rest) / coef;
                    if (induced < 1 && (!best || induced < *best)) {
                        best = induced;
                    }
                }
            }
            if (best) {
                Reason r = make_reason(ReasonKind::Assumption, {}, {}, *best);
                r.assumption = assumption.id;
                r.assumption_text = assumption.text;
                if (r.assumption_text.empty()) {
                    for (const auto& c : assumption.constraints) {
                        r.assumption_text += (r.assumption_text.empty() ? "" : "; ") + print_constraint(c);
                    }
                }
                out.push_back(std::move(r));
            }
        }
        return out;
    }

    void finish(Explanation& e, std::size_t depth, std::vector<PathKey>& path) {
        if (e.reasons.empty()) {
            e.status = ExplanationStatus::Unexplained;
            e.narrative = "no single-step explanation: the bound arises from several constraints together";
            return;
        }
        e.status = ExplanationStatus::Explained;
        path.emplace_back(e.subject, e.side);
        for (auto& r : e.reasons) {
            for (const auto& key : detail_keys(r)) {
                const Interval& solved = solved_.at(key.first);
                r.bounds.push_back(key.second == BoundSide::Lower ? solved.lower : solved.upper);
                if (std::find(path.begin(), path.end(), key) != path.end()) {
                    r.cycle = true;
                } else if (depth > 1) {
                    r.details.push_back(key.second == BoundSide::Lower ? lower(key.first, depth - 1, path)
                                                                       : upper(key.first, depth - 1, path));
                }
            }
        }
        path.pop_back();
        e.narrative = render(e, 1);
    }

    /// Which bound of which argument a reason rests on.
    [[nodiscard]] std::vector<PathKey> detail_keys(const Reason& r) const {
        switch (r.kind) {
        case ReasonKind::Supporter:
        case ReasonKind::Attacker:
        case ReasonKind::CsGroup: {
            std::vector<PathKey> keys;
            for (const auto& id : r.arguments) {
                keys.emplace_back(id, BoundSide::Lower);
            }
            return keys;
        }
        case ReasonKind::SupportedChild:
            return {{r.arguments.front(), BoundSide::Upper}};
        case ReasonKind::MetaChain:
            // Einc is capped by a lower bound on Innocence, Eex by its upper bound.
            return {{r.arguments.front(), r.weights.front() < 0 ? BoundSide::Lower : BoundSide::Upper}};
        case ReasonKind::Assumption:
            return {};
        }
        return {};
    }

    const BlafCase& case_;
    const BeliefBounds& solved_;
};

std::string head(const Explanation& e) {
    std::string out = e.subject + " " + symbol(e.side) + " " + to_display_string(e.bound);
    if (e.status != ExplanationStatus::Explained) {
        out += " (" + e.narrative + ")";
    }
    return out;
}

std::string reasons_text(const Explanation& e, std::size_t depth);

std::string cited(const Reason& r, std::size_t i) {
    const BoundSide side = r.kind == ReasonKind::SupportedChild ||
                                   (r.kind == ReasonKind::MetaChain && r.weights.front() > 0)
                               ? BoundSide::Upper
                               : BoundSide::Lower;
    std::string inner = symbol(side) + " " + to_display_string(r.bounds[i]);
    if (r.kind != ReasonKind::MetaChain) {
        inner += weight_suffix(r.weights[i]);
    }
    return r.arguments[i] + " (" + inner + ")";
}

std::string reason_label(const Reason& r) {
    std::string out;
    switch (r.kind) {
    case ReasonKind::Assumption:
        return "by assumption " + r.assumption + " (" + r.assumption_text + ")";
    case ReasonKind::CsGroup:
        out = "via joint support (≥ " + to_display_string(r.induced) + ")";
        break;
    case ReasonKind::Supporter:
        out = "via " + cited(r, 0);
        break;
    case ReasonKind::Attacker:
        out = "against " + cited(r, 0);
        break;
    case ReasonKind::SupportedChild:
        out = "capped by " + cited(r, 0);
        break;
    case ReasonKind::MetaChain:
        out = (r.weights.front() < 0 ? "via " : "capped by ") + cited(r, 0);
        break;
    }
    if (r.cycle) {
        out += " (cycle)";
    }
    return out;
}

const Explanation* find_detail(const Reason& r, const ArgumentId& id) {
    for (const auto& d : r.details) {
        if (d.subject == id) {
            return &d;
        }
    }
    return nullptr;
}

std::string reason_text(const Reason& r, std::size_t depth) {
    if (r.kind == ReasonKind::CsGroup) {
        std::string out = reason_label(r) + " of [";
        for (std::size_t i = 0; i < r.arguments.size(); ++i) {
            out += (i > 0 ? "; " : "") + cited(r, i);
            if (const Explanation* d = find_detail(r, r.arguments[i]); d != nullptr && depth > 1) {
                out += reasons_text(*d, depth - 1);
            }
        }
        return out + "]";
    }
    std::string out = reason_label(r);
    if (depth > 1 && !r.details.empty()) {
        out += reasons_text(r.details.front(), depth - 1);
    }
    return out;
}

std::string reasons_text(const Explanation& e, std::size_t depth) {
    if (depth == 0 || e.reasons.empty()) {
        return "";
    }
    if (e.reasons.size() == 1) {
        return " " + reason_text(e.reasons.front(), depth);
    }
    std::string out = " [";
    for (std::size_t i = 0; i < e.reasons.size(); ++i) {
        out += (i > 0 ? "; " : "") + reason_text(e.reasons[i], depth);
    }
    return out + "]";
}

void tree_lines(const Explanation& e, std::size_t depth, std::size_t indent, std::string& out);

void reason_lines(const Reason& r, std::size_t depth, std::size_t indent, std::string& out) {
    const std::string pad(indent, ' ');
    if (r.kind == ReasonKind::CsGroup) {
        out += pad + reason_label(r) + "\n";
        for (std::size_t i = 0; i < r.arguments.size(); ++i) {
            out += pad + "  " + cited(r, i) + "\n";
            if (const Explanation* d = find_detail(r, r.arguments[i]); d != nullptr && depth > 1) {
                for (const auto& child : d->reasons) {
                    reason_lines(child, depth - 1, indent + 4, out);
                }
            }
        }
        return;
    }
    out += pad + reason_label(r) + "\n";
    if (depth > 1 && !r.details.empty()) {
        for (const auto& child : r.details.front().reasons) {
            reason_lines(child, depth - 1, indent + 2, out);
        }
    }
}

void tree_lines(const Explanation& e, std::size_t depth, std::size_t indent, std::string& out) {
    out += std::string(indent, ' ') + head(e) + "\n";
    if (depth == 0) {
        return;
    }
    for (const auto& r : e.reasons) {
        reason_lines(r, depth, indent + 2, out);
    }
}

} // namespace

Explanation explain_lower(const BlafCase& legal_case, const BeliefBounds& solved, const ArgumentId& id,
                          std::size_t depth) {
    (void)legal_case.graph().index_of(id);
    std::vector<PathKey> path;
    return Explainer(legal_case, solved).lower(id, depth, path);
}

Explanation explain_upper(const BlafCase& legal_case, const BeliefBounds& solved, const ArgumentId& id,
                          std::size_t depth) {
    (void)legal_case.graph().index_of(id);
    std::vector<PathKey> path;
    return Explainer(legal_case, solved).upper(id, depth, path);
}

std::string render(const Explanation& explanation, std::size_t depth) {
    return head(explanation) + reasons_text(explanation, depth);
}

std::string render_tree(const Explanation& explanation, std::size_t depth) {
    std::string out;
    tree_lines(explanation, depth, 0, out);
    return out;
}

VerdictReport explain_verdict(const BlafCase& legal_case, const Verdict& verdict, const Rational& threshold,
                              std::size_t depth) {
    VerdictReport report;
    report.verdict = classify(verdict, threshold);
    report.threshold = threshold;
    report.innocence = verdict.innocence_belief.value_or(verdict.bounds.at(std::string(kInnocence)).upper);
    report.inculpatory_lower = verdict.bounds.at(std::string(kInculpatory)).lower;
    report.exculpatory_lower = verdict.bounds.at(std::string(kExculpatory)).lower;
    if (report.verdict == VerdictClass::InnocentByExculpatory) {
        report.basis = explain_lower(legal_case, verdict.bounds, std::string(kExculpatory), depth);
    } else if (report.verdict == VerdictClass::GuiltyByInculpatory) {
        report.basis = explain_lower(legal_case, verdict.bounds, std::string(kInculpatory), depth);
    }
    return report;
}

std::string render_verdict(const VerdictReport& report, std::size_t depth) {
    switch (report.verdict) {
    case VerdictClass::InnocentByExculpatory:
        return "innocent: exculpatory evidence (Eex ≥ " + to_display_string(report.exculpatory_lower) + ")" +
               reasons_text(*report.basis, depth);
    case VerdictClass::GuiltyByInculpatory:
        return "guilty: inculpatory evidence (Einc ≥ " + to_display_string(report.inculpatory_lower) + ")" +
               reasons_text(*report.basis, depth);
    case VerdictClass::LackOfEvidence:
        break;
    }
    return "innocent: lack of evidence (Einc ≥ " + to_display_string(report.inculpatory_lower) +
           ", Eex ≥ " + to_display_string(report.exculpatory_lower) + ", threshold " +
           to_display_string(report.threshold) + ")";
}

} // namespace peal
