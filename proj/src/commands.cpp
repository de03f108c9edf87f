// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "peal/cli.hpp"
#include "peal/report.hpp"
#include "peal/world_oracle.hpp"

namespace peal {

namespace {

/// A parse error inside a named file.
struct FileParseError {
    std::string path;
    ParseError error;
};

CaseDocument read_case(const CliOptions& options) {
    try {
        return load_case_document(options.case_path);
    } catch (const ParseError& e) {
        throw FileParseError{options.case_path.string(), e};
    }
}

SessionLog read_log(const std::filesystem::path& path) {
    try {
        return SessionLog::load(path);
    } catch (const ParseError& e) {
        throw FileParseError{path.string(), e};
    }
}

Rational threshold_of(const CliOptions& options, const CaseDocument& doc) {
    return options.threshold ? *options.threshold : doc.options.threshold;
}

template <typename F>
int guarded(const CliOptions& options, std::ostream& err, F&& body) {
    const std::string path = options.case_path.string();
    try {
        return body();
    } catch (const FileParseError& e) {
        err << e.path << ":" << e.error.line() << ":" << e.error.column() << ": parse error: " << e.error.message()
            << "\n";
        return kExitParse;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const CaseFileError& e) {
        err << path;
        if (e.line() != 0) {
            err << ":" << e.line();
        }
        err << ": invalid case: " << e.message() << "\n";
        return kExitValidation;
    } catch (const UnsatisfiableError& e) {
        err << e.what() << "\n";
        return kExitUnsat;
    } catch (const ValidationError& e) {
        err << "invalid: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ReplayError& e) {
        err << "session replay failed: " << e.what() << "\n";
        return kExitCheck;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

std::string pad(const std::string& text, std::size_t width) {
    // Column widths count code points so that "≥" aligns like one character.
    std::size_t shown = 0;
    for (const unsigned char c : text) {
        shown += (c & 0xC0) != 0x80 ? 1 : 0;
    }
    return text + std::string(width > shown ? width - shown : 0, ' ');
}

std::string verdict_line(const BlafCase& legal_case, const Verdict& verdict, const Rational& threshold,
                         std::size_t depth) {
    return render_verdict(explain_verdict(legal_case, verdict, threshold, depth), depth);
}

} // namespace

std::string render_solve(const BlafCase& legal_case, const Verdict& verdict, const Rational& threshold, bool exact) {
    const auto exact_rows = belief_rows(legal_case, verdict, NumberStyle::Exact);
    const auto display_rows = belief_rows(legal_case, verdict, NumberStyle::Display);

    std::vector<std::vector<std::string>> table;
    table.push_back(exact ? std::vector<std::string>{"argument", "belief"}
                          : std::vector<std::string>{"argument", "belief", "exact"});
    bool starred = false;
    for (std::size_t i = 0; i < exact_rows.size(); ++i) {
        std::vector<std::string> row{exact_rows[i].id};
        if (!exact) {
            row.push_back(display_rows[i].cell);
        }
        row.push_back(exact_rows[i].cell);
        row.push_back(exact_rows[i].directly_constrained ? "*" : "");
        starred = starred || exact_rows[i].directly_constrained;
        table.push_back(std::move(row));
    }
    std::vector<std::size_t> widths(table[0].size(), 0);
    for (const auto& row : table) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    std::string out;
    for (const auto& row : table) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            line += c + 1 == row.size() ? row[c] : pad(row[c], widths[c] + 2);
        }
        while (!line.empty() && line.back() == ' ') {
            line.pop_back();
        }
        out += line + "\n";
    }
    if (starred) {
        out += "* directly constrained by an assumption\n";
    }
    if (legal_case.framework() == Framework::Blaf) {
        out += "verdict: " + verdict_line(legal_case, verdict, threshold, 0) + "\n";
    }
    return out;
}

std::string render_conflict(const BlafCase& legal_case, const SolveResult& result) {
    std::string out = "unsatisfiable: no probability function meets all constraints\n";
    out += "conflicting constraints:";
    for (std::size_t i = 0; i < result.conflict.size(); ++i) {
        out += (i == 0 ? " " : ", ") + result.conflict[i];
    }
    out += "\n";
    if (result.suspects.empty()) {
        out += "no assumption is involved\n";
        return out;
    }
    out += "suspect assumptions:\n";
    for (const auto& id : result.suspects) {
        const Assumption* a = legal_case.find_assumption(id);
        out += "  " + id;
        if (a != nullptr && !a->text.empty()) {
            out += ": " + a->text;
        }
        out += "\n";
    }
    return out;
}

int cmd_validate(const CliOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(options, err, [&] {
        const CaseDocument doc = read_case(options);
        const BlafCase c = to_case(doc);
        out << "valid: " << c.graph().size() << " arguments, " << c.graph().edges().size() << " edges, "
            << c.cs_groups().size() << " collective-support groups, " << c.scheme().size()
            << " scheme constraints, " << c.assumptions().size() << " assumptions\n";
        for (const auto& note : c.notes()) {
            out << "note: " << note << "\n";
        }
        return kExitOk;
    });
}

int cmd_solve(const CliOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(options, err, [&] {
        const CaseDocument doc = read_case(options);
        const Rational threshold = threshold_of(options, doc);
        std::optional<WhatIfSession> session;
        if (options.session) {
            session.emplace(WhatIfSession::replay(doc, read_log(*options.session)));
        } else {
            session.emplace(doc);
        }
        const BlafCase& c = session->current();
        const SolveResult& r = session->peek();
        if (!r.satisfiable) {
            out << render_conflict(c, r);
            return kExitUnsat;
        }
        out << render_solve(c, *r.verdict, threshold, options.exact);
        if (options.oracle) {
            if (c.graph().size() > kOracleMaxArguments) {
                out << "oracle: skipped, " << c.graph().size() << " arguments exceed the limit of "
                    << kOracleMaxArguments << "\n";
            } else if (oracle_entail_all(c.graph(), c.constraints()) == r.verdict->bounds) {
                out << "oracle: agrees on all " << c.graph().size() << " arguments\n";
            } else {
                out << "oracle: disagrees with the marginal solver\n";
                return kExitCheck;
            }
        }
        return kExitOk;
    });
}

int cmd_check(const CliOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(options, err, [&] {
        const CaseDocument doc = read_case(options);
        std::size_t total = 0;
        std::size_t failed = 0;
        const auto report = [&](bool pass, const std::string& name, const std::string& detail) {
            ++total;
            failed += pass ? 0 : 1;
            out << (pass ? "pass " : "fail ") << name << ": " << detail << "\n";
        };
        const auto summary = [&] { out << "summary: " << total << " checks, " << failed << " failed\n"; };

        std::optional<BlafCase> built;
        try {
            built = to_case(doc);
        } catch (const CaseFileError& e) {
            report(false, "validation",
                   (e.line() != 0 ? "line " + std::to_string(e.line()) + ": " : std::string()) + e.message());
            summary();
            return kExitValidation;
        } catch (const ValidationError& e) {
            report(false, "validation", e.what());
            summary();
            return kExitValidation;
        }
        const BlafCase& c = *built;
        report(true, "validation",
               std::to_string(c.graph().size()) + " arguments, " + std::to_string(c.scheme().size()) +
                   " scheme constraints");

        const SolveResult r = solve_case(c);
        if (!r.satisfiable) {
            std::string labels;
            for (const auto& l : r.conflict) {
                labels += (labels.empty() ? "" : ", ") + l;
            }
            report(false, "satisfiable", "conflicting constraints " + labels);
            summary();
            return kExitUnsat;
        }
        report(true, "satisfiable", std::to_string(c.assumptions().size()) + " assumptions");

        if (c.framework() == Framework::Blaf) {
            for (const auto& check : check_meta_bounds(c, r.verdict->bounds).checks) {
                report(check.holds, check.name,
                       check.statement + " (" + to_exact_string(check.lhs) + " <= " + to_exact_string(check.rhs) +
                           ")");
            }
            if (c.assumptions().empty()) {
                const Rational& belief = *r.verdict->innocence_belief;
                report(belief == 1, "presumption", "belief in Innocence is " + to_exact_string(belief));
            }
        }

        if (options.oracle || doc.options.oracle) {
            const std::size_t n = c.graph().size();
            if (n > kOracleMaxArguments) {
                out << "skip oracle: " << n << " arguments exceed the limit of " << kOracleMaxArguments << "\n";
            } else {
                const BeliefBounds oracle = oracle_entail_all(c.graph(), c.constraints());
                std::vector<std::string> differing;
                for (const auto& [id, interval] : r.verdict->bounds) {
                    if (!(oracle.at(id) == interval)) {
                        differing.push_back(id);
                    }
                }
                std::string detail = differing.empty()
                                         ? "marginal and world LP agree on all " + std::to_string(n) + " arguments"
                                         : "marginal and world LP differ on";
                for (const auto& id : differing) {
                    detail += " " + id;
                }
                report(differing.empty(), "oracle", detail);
            }
        }
        summary();
        return failed == 0 ? kExitOk : kExitCheck;
    });
}

int cmd_explain(const CliOptions& options, const std::string& argument, BoundSide side, std::size_t depth, bool tree,
                std::ostream& out, std::ostream& err) {
    return guarded(options, err, [&] {
        const CaseDocument doc = read_case(options);
        std::optional<WhatIfSession> session;
        if (options.session) {
            session.emplace(WhatIfSession::replay(doc, read_log(*options.session)));
        } else {
            session.emplace(doc);
        }
        const BlafCase& c = session->current();
        const SolveResult& r = session->peek();
        if (!r.satisfiable) {
            out << render_conflict(c, r);
            return kExitUnsat;
        }
        if (argument.empty()) {
            if (c.framework() != Framework::Blaf) {
                throw ValidationError("a verdict needs a legal case; name an argument to explain");
            }
            const auto report = explain_verdict(c, *r.verdict, threshold_of(options, doc), depth);
            if (tree && report.basis) {
                out << render_verdict(report, 0) << "\n" << render_tree(*report.basis, depth);
            } else {
                out << render_verdict(report, depth) << "\n";
            }
            return kExitOk;
        }
        const Explanation e = side == BoundSide::Lower ? explain_lower(c, r.verdict->bounds, argument, depth)
                                                       : explain_upper(c, r.verdict->bounds, argument, depth);
        out << (tree ? render_tree(e, depth) : render(e, depth) + "\n");
        return kExitOk;
    });
}

namespace {

constexpr const char* kWhatIfHelp = "commands:\n"
                                    "  assume [<id>:] <constraint>   push an assumption\n"
                                    "  retract <id>                  remove an assumption\n"
                                    "  undo                          revert the last assume or retract\n"
                                    "  solve                         print beliefs and log the result\n"
                                    "  explain <arg> [lower|upper] [depth]\n"
                                    "  verdict                       classify and explain\n"
                                    "  list                          show the assumption stack\n"
                                    "  save-session <path>           write the session log\n"
                                    "  snapshot <path>               write the case with current assumptions\n"
                                    "  quit\n";

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace

bool whatif_step(WhatIfSession& session, const std::string& raw, const Rational& threshold, bool exact,
                 std::ostream& out) {
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') {
        return true;
    }
    const auto space = line.find_first_of(" \t");
    const std::string command = line.substr(0, space);
    const std::string rest = space == std::string::npos ? "" : trim(std::string_view(line).substr(space));
    std::istringstream words(rest);
    std::vector<std::string> args;
    for (std::string w; words >> w;) {
        args.push_back(w);
    }
    const auto need_satisfiable = [&]() -> const SolveResult* {
        const SolveResult& r = session.peek();
        if (!r.satisfiable) {
            out << render_conflict(session.current(), r);
            return nullptr;
        }
        return &r;
    };

    try {
        if (command == "quit" || command == "exit") {
            return false;
        } else if (command == "help") {
            out << kWhatIfHelp;
        } else if (command == "assume") {
            if (rest.empty()) {
                throw ValidationError("usage: assume [<id>:] <constraint>");
            }
            std::optional<std::string> id;
            std::string text = rest;
            if (const auto colon = rest.find(':'); colon != std::string::npos) {
                id = trim(std::string_view(rest).substr(0, colon));
                text = trim(std::string_view(rest).substr(colon + 1));
                if (!is_valid_argument_id(*id)) {
                    throw ValidationError("invalid assumption id '" + *id + "'");
                }
            }
            const std::string assigned = session.assume(text, id);
            out << "assumed " << assigned << ": " << text << "\n";
        } else if (command == "retract") {
            if (args.size() != 1) {
                throw ValidationError("usage: retract <id>");
            }
            session.retract(args[0]);
            out << "retracted " << args[0] << "\n";
        } else if (command == "undo") {
            out << (session.undo() ? "undone\n" : "nothing to undo\n");
        } else if (command == "solve") {
            const SolveResult& r = session.solve();
            out << (r.satisfiable ? render_solve(session.current(), *r.verdict, threshold, exact)
                                  : render_conflict(session.current(), r));
        } else if (command == "explain") {
            if (args.empty() || args.size() > 3) {
                throw ValidationError("usage: explain <arg> [lower|upper] [depth]");
            }
            BoundSide side = BoundSide::Lower;
            if (args.size() >= 2) {
                if (args[1] == "upper") {
                    side = BoundSide::Upper;
                } else if (args[1] != "lower") {
                    throw ValidationError("bound must be 'lower' or 'upper'");
                }
            }
            std::size_t depth = 8;
            if (args.size() == 3) {
                if (args[2].empty() || !std::all_of(args[2].begin(), args[2].end(), ::isdigit) ||
                    args[2].size() > 4) {
                    throw ValidationError("depth must be a small non-negative integer");
                }
                depth = std::stoul(args[2]);
            }
            if (const SolveResult* r = need_satisfiable()) {
                const auto e = side == BoundSide::Lower ? explain_lower(session.current(), r->verdict->bounds,
                                                                        args[0], depth)
                                                        : explain_upper(session.current(), r->verdict->bounds,
                                                                        args[0], depth);
                out << render(e, depth) << "\n";
            }
        } else if (command == "verdict") {
            if (session.current().framework() != Framework::Blaf) {
                throw ValidationError("a verdict needs a legal case");
            }
            if (const SolveResult* r = need_satisfiable()) {
                out << verdict_line(session.current(), *r->verdict, threshold, 8) << "\n";
            }
        } else if (command == "list") {
            if (session.stack().empty()) {
                out << "no assumptions\n";
            }
            for (const auto& a : session.stack()) {
                out << a.id << ": " << a.text << "\n";
            }
        } else if (command == "save-session") {
            if (rest.empty()) {
                throw ValidationError("usage: save-session <path>");
            }
            session.log().save(rest);
            out << "saved " << session.log().size() << " log entries to " << rest << "\n";
        } else if (command == "snapshot") {
            if (rest.empty()) {
                throw ValidationError("usage: snapshot <path>");
            }
            save_case_document(session.snapshot(), rest);
            out << "saved case with " << session.stack().size() << " assumptions to " << rest << "\n";
        } else {
            out << "error: unknown command '" << command << "' (try help)\n";
        }
    } catch (const ParseError& e) {
        out << "error: " << e.line() << ":" << e.column() << ": " << e.message() << "\n";
    } catch (const std::exception& e) {
        out << "error: " << e.what() << "\n";
    }
    return true;
}

int cmd_whatif(const CliOptions& options, std::istream& in, std::ostream& out, std::ostream& err) {
    return guarded(options, err, [&] {
        const CaseDocument doc = read_case(options);
        const Rational threshold = threshold_of(options, doc);
        std::optional<WhatIfSession> session;
        std::size_t persisted = 0;
        if (options.session && std::filesystem::exists(*options.session)) {
            session.emplace(WhatIfSession::replay(doc, read_log(*options.session)));
            persisted = session->log().size();
            out << "replayed " << persisted << " log entries from " << options.session->string() << "\n";
        } else {
            session.emplace(doc);
        }
        for (std::string line; std::getline(in, line);) {
            const bool more = whatif_step(*session, line, threshold, options.exact, out);
            if (options.session && session->log().size() > persisted) {
                std::ofstream log(*options.session, std::ios::app | std::ios::binary);
                const auto& entries = session->log().entries();
                for (; persisted < entries.size(); ++persisted) {
                    log << to_json_line(entries[persisted]) << "\n";
                }
                if (!log) {
                    throw std::runtime_error("cannot append to " + options.session->string());
                }
            }
            if (!more) {
                break;
            }
        }
        return kExitOk;
    });
}

} // namespace peal
