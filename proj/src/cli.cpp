// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <iostream>

#include <CLI11.hpp>

#include "peal/cli.hpp"

namespace peal {

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Probabilistic epistemic argumentation for legal cases", "peal"};
    app.require_subcommand(1);

    CliOptions options;
    std::string threshold_text;
    std::string session_path;
    std::string argument;
    std::string bound = "lower";
    std::size_t depth = 8;
    bool tree = false;

    const auto common = [&](CLI::App* sub, bool with_session) {
        sub->add_option("case,--case", options.case_path, "case file")->required();
        sub->add_option("--threshold", threshold_text, "verdict threshold T, 1/2 < T < 1");
        sub->add_flag("--exact", options.exact, "exact rationals instead of two-digit decimals");
        sub->add_flag("--oracle", options.oracle, "cross-check with the possible-world LP");
        if (with_session) {
            sub->add_option("--session", session_path, "session log (JSON lines)");
        }
    };

    auto* validate = app.add_subcommand("validate", "parse and validate a case file");
    common(validate, false);
    auto* solve = app.add_subcommand("solve", "print the belief table");
    common(solve, true);
    auto* whatif = app.add_subcommand("whatif", "interactive assumption loop on standard input");
    common(whatif, true);
    auto* check = app.add_subcommand("check", "validation, meta-bound and oracle checks");
    common(check, false);
    auto* explain = app.add_subcommand("explain", "explain a bound, or the verdict");
    common(explain, true);
    explain->add_option("--argument", argument, "argument to explain (verdict when omitted)");
    explain->add_option("--bound", bound, "lower or upper")->check(CLI::IsMember({"lower", "upper"}));
    explain->add_option("--depth", depth, "expansion depth")->check(CLI::Range(0, 1000));
    explain->add_flag("--tree", tree, "indented tree instead of one line");

    std::vector<std::string> reversed(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(reversed.begin(), reversed.end());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (!threshold_text.empty()) {
        const auto t = parse_rational(threshold_text);
        if (!t) {
            err << "--threshold: not a rational number: " << threshold_text << "\n";
            return kExitUsage;
        }
        options.threshold = *t;
    }
    if (!session_path.empty()) {
        options.session = session_path;
    }

    if (validate->parsed()) {
        return cmd_validate(options, out, err);
    }
    if (solve->parsed()) {
        return cmd_solve(options, out, err);
    }
    if (whatif->parsed()) {
        return cmd_whatif(options, in, out, err);
    }
    if (check->parsed()) {
        return cmd_check(options, out, err);
    }
    return cmd_explain(options, argument, bound == "upper" ? BoundSide::Upper : BoundSide::Lower, depth, tree, out,
                       err);
}

} // namespace peal
