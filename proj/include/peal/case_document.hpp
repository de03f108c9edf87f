// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "peal/blaf.hpp"
#include "peal/errors.hpp"
#include "peal/rational.hpp"

namespace peal {

inline constexpr int kCaseSchemaVersion = 1;

struct AssumptionDecl {
    std::string id;
    std::string text; // constraint DSL
    bool operator==(const AssumptionDecl&) const = default;
};

struct CaseOptions {
    Rational threshold = make_rational(3, 4);
    bool oracle = false;
    bool operator==(const CaseOptions&) const = default;
};

/// Text form of a case:
///
///   peal-case 1
///   framework blaf
///   option threshold 3/4
///   option oracle off
///   argument T1 evidence "plaintiff noted the registration number"
///   edge T1 -> Einc 0.9
///   cs Ec <- Motive:3/10 Opportunity:3/10
///   assume a1: p(T3) >= 0.7
///   end
///
/// `#` starts a comment. Weights are exact rationals or decimals. The
/// closing `end` line makes a truncated file detectable.
struct CaseDocument {
    int version = kCaseSchemaVersion;
    CaseSpec spec;
    std::vector<AssumptionDecl> assumptions;
    CaseOptions options;

    /// Line of each declaration by validation subject ("argument:X",
    /// "edge:A->B", "cs:T", "assumption:a1"). Not part of equality.
    std::map<std::string, std::size_t> lines;

    bool operator==(const CaseDocument& other) const {
        return version == other.version && spec == other.spec && assumptions == other.assumptions &&
               options == other.options;
    }
};

/// A case that parses but does not validate, located in its source.
/// Line 0 means the problem is not tied to one line (a missing
/// declaration, for instance).
class CaseFileError : public ValidationError {
  public:
    CaseFileError(const std::string& message, std::string subject, std::size_t line)
        : ValidationError(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
          message_(message), subject_(std::move(subject)), line_(line) {}

    [[nodiscard]] const std::string& message() const { return message_; }
    [[nodiscard]] const std::string& subject() const { return subject_; }
    [[nodiscard]] std::size_t line() const { return line_; }

  private:
    std::string message_;
    std::string subject_;
    std::size_t line_;
};

/// Throws ParseError (with line/column) on malformed text or a schema
/// version other than kCaseSchemaVersion. Does not validate the case.
CaseDocument parse_case_document(std::string_view text);

/// Canonical text; parse_case_document(print_case_document(d)) == d.
std::string print_case_document(const CaseDocument& doc);

/// Throws std::runtime_error when unreadable, then as parse_case_document.
CaseDocument load_case_document(const std::filesystem::path& path);
void save_case_document(const CaseDocument& doc, const std::filesystem::path& path);

/// Validates the structure and applies the assumptions in order. Throws
/// CaseFileError, or ParseError for assumption text (positioned in the
/// file when the document carries line information).
BlafCase to_case(const CaseDocument& doc);

} // namespace peal
