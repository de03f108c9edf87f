// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include "peal/constraint.hpp"

#include <cctype>

#include "peal/errors.hpp"

namespace peal {

Rational LinearConstraint::coefficient(const ArgumentId& id) const {
    const auto it = terms.find(id);
    return it == terms.end() ? Rational(0) : it->second;
}

LinearConstraint canonicalize(const Rational& lhs_const, const LinearTerms& lhs_terms, const Rational& rhs_const,
                              const LinearTerms& rhs_terms) {
    LinearConstraint c;
    for (const auto& [id, coef] : lhs_terms) {
        c.terms[id] += coef;
    }
    for (const auto& [id, coef] : rhs_terms) {
        c.terms[id] -= coef;
    }
    std::erase_if(c.terms, [](const auto& kv) { return kv.second == 0; });
    c.bound = rhs_const - lhs_const;
    return c;
}

std::string_view to_string(ConstraintOrigin origin) {
    switch (origin) {
    case ConstraintOrigin::Inculpatory:
        return "IE";
    case ConstraintOrigin::Exculpatory:
        return "EE";
    case ConstraintOrigin::Support:
        return "SE";
    case ConstraintOrigin::Attack:
        return "ATT";
    case ConstraintOrigin::CollectiveSupport:
        return "CS";
    case ConstraintOrigin::Assumption:
        return "assumption";
    case ConstraintOrigin::Source:
        return "source";
    }
    return "?";
}

std::string Provenance::describe() const {
    std::string text;
    if (origin == ConstraintOrigin::Assumption) {
        text = "assumption " + label;
    } else if (origin == ConstraintOrigin::Source) {
        text = label.empty() ? "constraint" : label;
    } else {
        text = label;
    }
    if (span) {
        text += " @" + std::to_string(span->line) + ":" + std::to_string(span->column);
    }
    return text;
}

void ConstraintSet::add(LinearConstraint constraint, Provenance provenance) {
    items_.push_back(TaggedConstraint{std::move(constraint), std::move(provenance)});
}

void ConstraintSet::append(const ConstraintSet& other) {
    items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

void ConstraintSet::validate_against(const ArgGraph& graph) const {
    for (const auto& item : items_) {
        for (const auto& [id, coef] : item.constraint.terms) {
            if (!graph.contains(id)) {
                throw UnknownArgument(id);
            }
        }
    }
}

namespace {

class ConstraintParser {
  public:
    ConstraintParser(std::string_view text, SourceSpan origin) : text_(text), line_(origin.line), column_(origin.column) {}

    std::vector<LinearConstraint> parse() {
        Side lhs = parse_expr();
        skip_ws();
        std::string op;
        if (consume("<=")) {
            op = "<=";
        } else if (consume(">=")) {
            op = ">=";
        } else if (consume("=")) {
            op = "=";
        } else {
            fail(at_end() ? "expected '<=', '>=' or '=' but input ended" : "expected '<=', '>=' or '='");
        }
        Side rhs = parse_expr();
        skip_ws();
        if (!at_end()) {
            fail("unexpected trailing input");
        }
        if (op == "<=") {
            return {canonicalize(lhs.constant, lhs.terms, rhs.constant, rhs.terms)};
        }
        if (op == ">=") {
            return {canonicalize(rhs.constant, rhs.terms, lhs.constant, lhs.terms)};
        }
        return {canonicalize(lhs.constant, lhs.terms, rhs.constant, rhs.terms),
                canonicalize(rhs.constant, rhs.terms, lhs.constant, lhs.terms)};
    }

  private:
    struct Side {
        Rational constant;
        LinearTerms terms;
    };

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, column_); }

    [[nodiscard]] bool at_end() const { return pos_ >= text_.size(); }
    [[nodiscard]] char peek() const { return at_end() ? '\0' : text_[pos_]; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) {
            advance();
        }
    }

    bool consume(std::string_view token) {
        if (text_.substr(pos_, token.size()) == token) {
            for (std::size_t i = 0; i < token.size(); ++i) {
                advance();
            }
            return true;
        }
        return false;
    }

    Side parse_expr() {
        Side side;
        skip_ws();
        int sign = 1;
        if (consume("-")) {
            sign = -1;
        } else {
            consume("+");
        }
        parse_term(side, sign);
        for (;;) {
            skip_ws();
            if (consume("+")) {
                parse_term(side, 1);
            } else if (consume("-")) {
                parse_term(side, -1);
            } else {
                break;
            }
        }
        return side;
    }

    void parse_term(Side& side, int sign) {
        skip_ws();
        if (at_end()) {
            fail("expected a term but input ended");
        }
        if (peek() == 'p') {
            side.terms.emplace_back(parse_atom(), Rational(sign));
            return;
        }
        Rational coef = parse_rat() * sign;
        skip_ws();
        if (consume("*")) {
            skip_ws();
            if (peek() != 'p') {
                fail("expected 'p(' after '*'");
            }
            side.terms.emplace_back(parse_atom(), coef);
        } else {
            side.constant += coef;
        }
    }

    ArgumentId parse_atom() {
        if (!consume("p(")) {
            fail("expected 'p('");
        }
        skip_ws();
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
            advance();
        }
        if (pos_ == start) {
            fail("expected an argument identifier");
        }
        ArgumentId id(text_.substr(start, pos_ - start));
        skip_ws();
        if (!consume(")")) {
            fail("expected ')'");
        }
        return id;
    }

    Rational parse_rat() {
        const std::size_t start = pos_;
        const auto start_line = line_;
        const auto start_col = column_;
        while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == '/')) {
            advance();
        }
        if (pos_ == start) {
            fail("expected a number or 'p('");
        }
        const auto value = parse_rational(text_.substr(start, pos_ - start));
        if (!value) {
            throw ParseError("malformed number '" + std::string(text_.substr(start, pos_ - start)) + "'", start_line,
                             start_col);
        }
        return *value;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_;
    std::size_t column_;
};

void append_coefficient(std::string& out, const Rational& magnitude) {
    if (magnitude != 1) {
        out += to_exact_string(magnitude);
        out += "*";
    }
}

} // namespace

std::vector<LinearConstraint> parse_constraint(std::string_view text, SourceSpan origin) {
    return ConstraintParser(text, origin).parse();
}

std::string print_constraint(const LinearConstraint& constraint) {
    std::string out;
    bool first = true;
    for (const auto& [id, coef] : constraint.terms) {
        const bool negative = coef < 0;
        if (first) {
            if (negative) {
                out += "-";
            }
        } else {
            out += negative ? " - " : " + ";
        }
        append_coefficient(out, abs(coef));
        out += "p(" + id + ")";
        first = false;
    }
    if (first) {
        out += "0";
    }
    out += " <= " + to_exact_string(constraint.bound);
    return out;
}

LinearConstraint gen_attack(const Edge& edge) {
    if (edge.weight >= 0) {
        throw ValidationError("attack constraint needs a negative weight on " + edge.source + " -> " + edge.target);
    }
    // p(B) <= 1 + w*p(A)
    return canonicalize(0, {{edge.target, 1}}, 1, {{edge.source, edge.weight}});
}

LinearConstraint gen_support(const Edge& edge) {
    if (edge.weight <= 0) {
        throw ValidationError("support constraint needs a positive weight on " + edge.source + " -> " + edge.target);
    }
    // w*p(A) <= p(B)
    return canonicalize(0, {{edge.source, edge.weight}}, 0, {{edge.target, 1}});
}

LinearConstraint gen_collective_support(const std::vector<Neighbor>& group, const ArgumentId& target) {
    if (group.empty()) {
        throw ValidationError("collective support group for " + target + " is empty");
    }
    Rational total;
    LinearTerms lhs;
    for (const auto& member : group) {
        if (member.weight <= 0) {
            throw ValidationError("collective support weight of " + member.id + " -> " + target + " must be positive");
        }
        total += member.weight;
        lhs.emplace_back(member.id, member.weight);
    }
    if (total > 1) {
        throw ValidationError("collective support weights into " + target + " sum to " + to_exact_string(total) +
                              ", exceeding 1");
    }
    return canonicalize(0, lhs, 0, {{target, 1}});
}

} // namespace peal
