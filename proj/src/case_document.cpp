// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include "peal/case_document.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "peal/constraint.hpp"

namespace peal {

namespace {

struct Token {
    std::string text;
    std::size_t column = 1; // 1-based
    bool quoted = false;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

class LineReader {
  public:
    LineReader(std::string_view line, std::size_t number) : line_(line), number_(number) {}

    [[noreturn]] void fail(const std::string& message, std::size_t column) const {
        throw ParseError(message, number_, column);
    }

    /// Splits on whitespace up to a `#` outside quotes. Quoted tokens
    /// support \" and \\ escapes.
    std::vector<Token> tokens() const {
        std::vector<Token> out;
        std::size_t i = 0;
        while (i < line_.size()) {
            if (is_space(line_[i])) {
                ++i;
                continue;
            }
            if (line_[i] == '#') {
                break;
            }
            Token t;
            t.column = i + 1;
            if (line_[i] == '"') {
                t.quoted = true;
                ++i;
                bool closed = false;
                while (i < line_.size()) {
                    const char c = line_[i];
                    if (c == '\\' && i + 1 < line_.size() && (line_[i + 1] == '"' || line_[i + 1] == '\\')) {
                        t.text += line_[i + 1];
                        i += 2;
                    } else if (c == '"') {
                        ++i;
                        closed = true;
                        break;
                    } else {
                        t.text += c;
                        ++i;
                    }
                }
                if (!closed) {
                    fail("unterminated string", t.column);
                }
            } else {
                while (i < line_.size() && !is_space(line_[i]) && line_[i] != '#') {
                    t.text += line_[i++];
                }
            }
            out.push_back(std::move(t));
        }
        return out;
    }

    [[nodiscard]] std::size_t end_column() const { return line_.size() + 1; }

  private:
    std::string_view line_;
    std::size_t number_;
};

Rational weight_token(const LineReader& reader, const Token& t) {
    const auto w = parse_rational(t.text);
    if (!w || t.quoted) {
        reader.fail("invalid weight '" + t.text + "'", t.column);
    }
    return *w;
}

void expect_count(const LineReader& reader, const std::vector<Token>& tokens, std::size_t min, std::size_t max,
                  const std::string& usage) {
    if (tokens.size() < min) {
        reader.fail("incomplete line, expected: " + usage, reader.end_column());
    }
    if (tokens.size() > max) {
        reader.fail("unexpected '" + tokens[max].text + "', expected: " + usage, tokens[max].column);
    }
}

std::string escape_label(const std::string& label) {
    std::string out = "\"";
    for (const char c : label) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out + "\"";
}

} // namespace

CaseDocument parse_case_document(std::string_view text) {
    CaseDocument doc;
    bool have_header = false;
    bool have_framework = false;
    bool ended = false;
    std::size_t number = 0;
    std::size_t last_line = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        const std::string_view line = text.substr(pos, eol - pos);
        const bool last = eol == text.size();
        pos = eol + 1;
        ++number;
        if (last && line.empty()) {
            break;
        }
        last_line = number;

        const LineReader reader(line, number);
        const auto tokens = reader.tokens();
        if (tokens.empty()) {
            continue;
        }
        const Token& head = tokens[0];
        if (ended) {
            reader.fail("content after 'end'", head.column);
        }
        if (!have_header) {
            if (head.text != "peal-case" || head.quoted) {
                reader.fail("expected 'peal-case <version>' header", head.column);
            }
            expect_count(reader, tokens, 2, 2, "peal-case <version>");
            if (tokens[1].text != std::to_string(kCaseSchemaVersion)) {
                reader.fail("unsupported schema version '" + tokens[1].text + "' (expected " +
                                std::to_string(kCaseSchemaVersion) + ")",
                            tokens[1].column);
            }
            have_header = true;
            continue;
        }

        if (head.text == "end" && !head.quoted) {
            expect_count(reader, tokens, 1, 1, "end");
            ended = true;
        } else if (head.text == "framework") {
            expect_count(reader, tokens, 2, 2, "framework blaf|plain");
            if (have_framework) {
                reader.fail("framework declared twice", head.column);
            }
            if (tokens[1].text == "blaf") {
                doc.spec.framework = Framework::Blaf;
            } else if (tokens[1].text == "plain") {
                doc.spec.framework = Framework::Plain;
            } else {
                reader.fail("unknown framework '" + tokens[1].text + "'", tokens[1].column);
            }
            have_framework = true;
        } else if (head.text == "option") {
            expect_count(reader, tokens, 3, 3, "option threshold <rational> | option oracle on|off");
            const Token& value = tokens[2];
            if (tokens[1].text == "threshold") {
                const auto t = parse_rational(value.text);
                if (!t) {
                    reader.fail("invalid threshold '" + value.text + "'", value.column);
                }
                doc.options.threshold = *t;
            } else if (tokens[1].text == "oracle") {
                if (value.text != "on" && value.text != "off") {
                    reader.fail("expected 'on' or 'off'", value.column);
                }
                doc.options.oracle = value.text == "on";
            } else {
                reader.fail("unknown option '" + tokens[1].text + "'", tokens[1].column);
            }
        } else if (head.text == "argument") {
            expect_count(reader, tokens, 3, 4, "argument <id> meta|sub|evidence [\"label\"]");
            const auto role = parse_role(tokens[2].text);
            if (!role) {
                reader.fail("unknown role '" + tokens[2].text + "'", tokens[2].column);
            }
            if (tokens.size() == 4 && !tokens[3].quoted) {
                reader.fail("label must be quoted", tokens[3].column);
            }
            doc.spec.arguments.push_back({tokens[1].text, *role, tokens.size() == 4 ? tokens[3].text : ""});
            doc.lines["argument:" + tokens[1].text] = number;
        } else if (head.text == "edge") {
            expect_count(reader, tokens, 5, 5, "edge <source> -> <target> <weight>");
            if (tokens[2].text != "->") {
                reader.fail("expected '->'", tokens[2].column);
            }
            const Rational w = weight_token(reader, tokens[4]);
            doc.spec.edges.push_back({tokens[1].text, tokens[3].text, w});
            doc.lines["edge:" + tokens[1].text + "->" + tokens[3].text] = number;
        } else if (head.text == "cs") {
            if (tokens.size() < 4) {
                reader.fail("incomplete line, expected: cs <target> <- <member>:<weight> ...", reader.end_column());
            }
            if (tokens[2].text != "<-") {
                reader.fail("expected '<-'", tokens[2].column);
            }
            CsGroup group{tokens[1].text, {}};
            for (std::size_t i = 3; i < tokens.size(); ++i) {
                const Token& m = tokens[i];
                const auto colon = m.text.find(':');
                if (colon == std::string::npos || colon == 0 || m.quoted) {
                    reader.fail("expected <member>:<weight>", m.column);
                }
                Token w{m.text.substr(colon + 1), m.column + colon + 1, false};
                group.members.push_back({m.text.substr(0, colon), weight_token(reader, w)});
            }
            doc.lines["cs:" + group.target] = number;
            doc.spec.cs_groups.push_back(std::move(group));
        } else if (head.text == "assume") {
            // assume <id>: <dsl>
            const std::size_t start = head.column - 1 + head.text.size();
            const std::size_t colon = line.find(':', start);
            if (colon == std::string_view::npos) {
                reader.fail("expected 'assume <id>: <constraint>'", reader.end_column());
            }
            std::size_t id_begin = start;
            while (id_begin < colon && is_space(line[id_begin])) {
                ++id_begin;
            }
            std::size_t id_end = colon;
            while (id_end > id_begin && is_space(line[id_end - 1])) {
                --id_end;
            }
            const std::string id(line.substr(id_begin, id_end - id_begin));
            if (!is_valid_argument_id(id)) {
                reader.fail("invalid assumption id '" + id + "'", id_begin + 1);
            }
            std::size_t body = colon + 1;
            while (body < line.size() && is_space(line[body])) {
                ++body;
            }
            std::size_t body_end = line.size();
            while (body_end > body && is_space(line[body_end - 1])) {
                --body_end;
            }
            const std::string dsl(line.substr(body, body_end - body));
            if (dsl.empty()) {
                reader.fail("missing constraint", body + 1);
            }
            (void)parse_constraint(dsl, SourceSpan{number, body + 1, dsl.size()});
            doc.assumptions.push_back({id, dsl});
            doc.lines["assumption:" + id] = number;
        } else {
            reader.fail("unknown directive '" + head.text + "'", head.column);
        }
    }

    if (!have_header) {
        throw ParseError("expected 'peal-case <version>' header", last_line + 1, 1);
    }
    if (!ended) {
        throw ParseError("unexpected end of file, missing 'end'", last_line + 1, 1);
    }
    return doc;
}

std::string print_case_document(const CaseDocument& doc) {
    std::ostringstream out;
    out << "peal-case " << doc.version << "\n";
    out << "framework " << (doc.spec.framework == Framework::Blaf ? "blaf" : "plain") << "\n";
    out << "option threshold " << to_exact_string(doc.options.threshold) << "\n";
    out << "option oracle " << (doc.options.oracle ? "on" : "off") << "\n";
    if (!doc.spec.arguments.empty()) {
        out << "\n";
    }
    for (const auto& a : doc.spec.arguments) {
        out << "argument " << a.id << " " << to_string(a.role);
        if (!a.label.empty()) {
            out << " " << escape_label(a.label);
        }
        out << "\n";
    }
    if (!doc.spec.edges.empty() || !doc.spec.cs_groups.empty()) {
        out << "\n";
    }
    for (const auto& e : doc.spec.edges) {
        out << "edge " << e.source << " -> " << e.target << " " << to_exact_string(e.weight) << "\n";
    }
    for (const auto& g : doc.spec.cs_groups) {
        out << "cs " << g.target << " <-";
        for (const auto& m : g.members) {
            out << " " << m.id << ":" << to_exact_string(m.weight);
        }
        out << "\n";
    }
    if (!doc.assumptions.empty()) {
        out << "\n";
    }
    for (const auto& a : doc.assumptions) {
        if (a.text.find('\n') != std::string::npos) {
            throw ValidationError("assumption " + a.id + " spans several lines");
        }
        out << "assume " << a.id << ": " << a.text << "\n";
    }
    out << "end\n";
    return out.str();
}

CaseDocument load_case_document(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_case_document(buffer.str());
}

void save_case_document(const CaseDocument& doc, const std::filesystem::path& path) {
    const std::string text = print_case_document(doc);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text)) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

BlafCase to_case(const CaseDocument& doc) {
    const auto line_of = [&](const std::string& subject) -> std::size_t {
        const auto it = doc.lines.find(subject);
        return it == doc.lines.end() ? 0 : it->second;
    };
    std::optional<BlafCase> built;
    try {
        built = build_case(doc.spec);
    } catch (const CaseValidationError& err) {
        throw CaseFileError(err.what(), err.subject(), line_of(err.subject()));
    }
    BlafCase c = std::move(*built);
    for (const auto& a : doc.assumptions) {
        const std::string subject = "assumption:" + a.id;
        try {
            c = c.assume(a.id, a.text);
        } catch (const ValidationError& err) {
            throw CaseFileError("assumption " + a.id + ": " + err.what(), subject, line_of(subject));
        }
    }
    return c;
}

} // namespace peal
