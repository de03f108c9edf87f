// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "peal/explainer.hpp"
#include "peal/rational.hpp"
#include "peal/session.hpp"

namespace peal {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,      // bad arguments or unreadable files
    kExitParse = 2,      // malformed case, constraint or session text
    kExitValidation = 3, // well-formed but invalid case or command
    kExitUnsat = 4,      // constraints admit no probability function
    kExitCheck = 5,      // a consistency check failed
};

struct CliOptions {
    std::filesystem::path case_path;
    std::optional<Rational> threshold; // overrides the document option
    bool exact = false;                // exact rationals only
    bool oracle = false;               // also run the world oracle
    std::optional<std::filesystem::path> session;
};

/// Table with display and exact columns (or exact only), starred rows for
/// directly constrained arguments, and the verdict for legal cases.
std::string render_solve(const BlafCase& legal_case, const Verdict& verdict, const Rational& threshold, bool exact);

/// "unsatisfiable: ..." followed by the suspect assumptions.
std::string render_conflict(const BlafCase& legal_case, const SolveResult& result);

int cmd_validate(const CliOptions& options, std::ostream& out, std::ostream& err);

/// With a session log, replays it over the case first.
int cmd_solve(const CliOptions& options, std::ostream& out, std::ostream& err);

/// Validation, meta-bound checks and, when enabled, marginal-vs-oracle
/// agreement. One "pass|fail <name>: <detail>" line per check.
int cmd_check(const CliOptions& options, std::ostream& out, std::ostream& err);

/// Explains one bound, or the verdict when `argument` is empty.
int cmd_explain(const CliOptions& options, const std::string& argument, BoundSide side, std::size_t depth, bool tree,
                std::ostream& out, std::ostream& err);

/// Interactive loop reading commands from `in` until EOF or `quit`. With a
/// session path, an existing log there is replayed first and every new
/// entry is appended to it.
int cmd_whatif(const CliOptions& options, std::istream& in, std::ostream& out, std::ostream& err);

/// Runs one what-if command against `session`. Returns false on `quit`.
/// Errors are reported on `out` and never end the loop.
bool whatif_step(WhatIfSession& session, const std::string& line, const Rational& threshold, bool exact,
                 std::ostream& out);

/// Full command line, argv[0] included.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace peal
