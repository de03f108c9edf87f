// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peal/blaf.hpp"
#include "peal/epistemic.hpp"
#include "peal/rational.hpp"

namespace peal {

enum class VerdictClass { LackOfEvidence, InnocentByExculpatory, GuiltyByInculpatory };

std::string_view to_string(VerdictClass verdict);

/// 3/4.
Rational default_threshold();

/// Exculpatory case first (lower(Eex) > 1/2), then inculpatory
/// (lower(Einc) > threshold), otherwise lack of evidence. Throws
/// ValidationError unless 1/2 < threshold < 1 and the bounds carry Einc
/// and Eex.
VerdictClass classify(const Verdict& verdict, const Rational& threshold);

enum class BoundSide { Lower, Upper };

std::string_view to_string(BoundSide side);

enum class ReasonKind {
    Supporter,      // SE edge s -> a, induces w * lower(s)
    Attacker,       // attack edge between a and t, caps a via lower(t)
    SupportedChild, // SE edge a -> b, caps a at upper(b) / w
    CsGroup,        // joint lower bound sum w_i * lower(m_i)
    MetaChain,      // Einc/Eex bounded through Innocence
    Assumption,     // user constraint bounding a directly
};

std::string_view to_string(ReasonKind kind);

struct Explanation;

struct Reason {
    ReasonKind kind = ReasonKind::Supporter;
    std::vector<ArgumentId> arguments;
    std::vector<Rational> weights; // edge weight per argument; empty for assumptions
    std::vector<Rational> bounds;  // solved bound of each argument on the side this reason uses
    Rational induced;              // bound this reason alone forces on the subject
    std::string assumption;        // assumption id, for Assumption reasons
    std::string assumption_text;
    bool cycle = false;                // expansion stopped: already on the path
    std::vector<Explanation> details; // explanations of the arguments' own bounds
};

enum class ExplanationStatus {
    Trivial,     // lower 0 or upper 1
    Explained,   // at least one reason
    Unavailable, // upper bound of a collective-support member
    Unexplained, // non-trivial, but no single-step rule applies
};

struct Explanation {
    ArgumentId subject;
    BoundSide side = BoundSide::Lower;
    Rational bound;
    ExplanationStatus status = ExplanationStatus::Trivial;
    std::vector<Reason> reasons;
    std::string narrative;
};

bool operator==(const Reason& a, const Reason& b);
bool operator==(const Explanation& a, const Explanation& b);

/// Reasons for the solved lower bound of `id`, expanded `depth` levels.
/// Throws UnknownArgument.
Explanation explain_lower(const BlafCase& legal_case, const BeliefBounds& solved, const ArgumentId& id,
                          std::size_t depth = 1);

/// Reasons for the solved upper bound of `id`, expanded `depth` levels.
/// Throws UnknownArgument.
Explanation explain_upper(const BlafCase& legal_case, const BeliefBounds& solved, const ArgumentId& id,
                          std::size_t depth = 1);

/// One line: "Eex ≥ 0.7 via T2 (≥ 0.7) via T3 (≥ 0.7)". Depth 0 prints the
/// bound only.
std::string render(const Explanation& explanation, std::size_t depth);

/// Indented multi-line form of the same tree.
std::string render_tree(const Explanation& explanation, std::size_t depth);

struct VerdictReport {
    VerdictClass verdict = VerdictClass::LackOfEvidence;
    Rational threshold;
    Rational innocence;
    Rational inculpatory_lower;
    Rational exculpatory_lower;
    std::optional<Explanation> basis; // lower bound on Eex or Einc, when decisive
};

VerdictReport explain_verdict(const BlafCase& legal_case, const Verdict& verdict, const Rational& threshold,
                              std::size_t depth = 8);

/// "innocent: exculpatory evidence (Eex ≥ 0.7) via T2 (≥ 0.7) ...".
std::string render_verdict(const VerdictReport& report, std::size_t depth);

} // namespace peal
