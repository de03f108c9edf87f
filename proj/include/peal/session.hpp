// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peal/blaf.hpp"
#include "peal/case_document.hpp"
#include "peal/errors.hpp"

namespace peal {

enum class SessionAction { Assume, Retract, Solve };

std::string_view to_string(SessionAction action);

/// One line of a session log.
struct LogEntry {
    std::string timestamp; // UTC, ISO 8601
    SessionAction action = SessionAction::Solve;
    std::string id;                      // assume, retract
    std::string text;                    // assume
    std::optional<std::size_t> position; // assume: stack index it was inserted at
    bool satisfiable = true;             // solve
    std::optional<Rational> innocence;   // solve: belief in Innocence, when satisfiable and legal
    std::vector<std::string> conflict;   // solve: provenance labels, when unsatisfiable

    /// Equality ignores the timestamp.
    [[nodiscard]] bool same_action(const LogEntry& other) const;
};

/// Append-only record of a what-if session, one JSON object per line.
class SessionLog {
  public:
    void append(LogEntry entry) { entries_.push_back(std::move(entry)); }
    [[nodiscard]] const std::vector<LogEntry>& entries() const { return entries_; }
    [[nodiscard]] std::size_t size() const { return entries_.size(); }

    /// Throws ParseError naming the offending line.
    static SessionLog parse(std::string_view jsonl);
    [[nodiscard]] std::string to_jsonl() const;

    static SessionLog load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

  private:
    std::vector<LogEntry> entries_;
};

std::string to_json_line(const LogEntry& entry);
LogEntry parse_log_line(std::string_view line, std::size_t line_number = 1);

/// Current UTC time, second resolution.
std::string utc_timestamp();

struct SolveResult {
    bool satisfiable = false;
    std::optional<Verdict> verdict;    // when satisfiable
    std::vector<std::string> conflict; // provenance labels, when not
    std::vector<std::string> suspects; // assumption ids among the conflict
};

/// Solves and turns unsatisfiability into a result instead of an error.
SolveResult solve_case(const BlafCase& legal_case);

/// A recorded solve did not reproduce.
class ReplayError : public Error {
  public:
    ReplayError(const std::string& message, std::size_t entry) : Error(message), entry_(entry) {}
    [[nodiscard]] std::size_t entry() const { return entry_; }

  private:
    std::size_t entry_;
};

/// Ordered, retractable stack of assumptions over a base document. The
/// document's own assumptions form the initial stack.
class WhatIfSession {
  public:
    using Clock = std::function<std::string()>;

    /// Throws as to_case.
    explicit WhatIfSession(CaseDocument base, Clock clock = utc_timestamp);

    [[nodiscard]] const CaseDocument& base() const { return base_; }
    [[nodiscard]] const BlafCase& current() const { return current_; }
    [[nodiscard]] const std::vector<AssumptionDecl>& stack() const { return stack_; }
    [[nodiscard]] const SessionLog& log() const { return log_; }

    /// Pushes an assumption and returns its id (generated as a1, a2, ...
    /// unless given). Throws ParseError, UnknownArgument, or
    /// ValidationError for a duplicate id; the session is unchanged then.
    std::string assume(std::string_view text, std::optional<std::string> id = std::nullopt);
    /// Throws ValidationError for an id not on the stack.
    void retract(std::string_view id);
    /// Reverts the last assume or retract (undo is not itself undone) and
    /// logs the inverse action. Returns false when there is nothing to undo.
    bool undo();

    /// Solves the current state and logs the outcome.
    const SolveResult& solve();
    /// Outcome of the current state without logging it.
    const SolveResult& peek();

    /// Base structure with the current stack as its assumptions.
    [[nodiscard]] CaseDocument snapshot() const;

    /// Re-executes `log` from `base`. Throws ReplayError when a recorded
    /// solve outcome differs, and the usual errors for invalid actions.
    static WhatIfSession replay(CaseDocument base, const SessionLog& log, Clock clock = utc_timestamp);

  private:
    struct Step {
        SessionAction action;
        AssumptionDecl decl;
        std::size_t position;
    };

    void insert(AssumptionDecl decl, std::size_t position);
    void remove(std::size_t position);
    void rebuild();
    [[nodiscard]] std::string fresh_id();

    CaseDocument base_;
    Clock clock_;
    BlafCase structure_;
    BlafCase current_;
    std::vector<AssumptionDecl> stack_;
    std::vector<Step> history_;
    SessionLog log_;
    std::optional<SolveResult> cached_;
    std::size_t next_id_ = 1;
};

} // namespace peal
