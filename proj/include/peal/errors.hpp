// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace peal {

/// Base of every engine error.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed text (DSL or case file). Line and column are 1-based.
class ParseError : public Error {
  public:
    ParseError(std::string message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          message_(std::move(message)), line_(line), column_(column) {}

    [[nodiscard]] const std::string& message() const { return message_; }
    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] std::size_t column() const { return column_; }

  private:
    std::string message_;
    std::size_t line_;
    std::size_t column_;
};

/// A structurally invalid graph, constraint or case.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// A constraint or query mentions an argument the graph does not have.
class UnknownArgument : public ValidationError {
  public:
    explicit UnknownArgument(const std::string& id) : ValidationError("unknown argument '" + id + "'"), id_(id) {}
    [[nodiscard]] const std::string& id() const { return id_; }

  private:
    std::string id_;
};

/// The constraint system admits no probability function. `conflict` holds
/// provenance labels of a conflicting subset of constraints.
class UnsatisfiableError : public Error {
  public:
    explicit UnsatisfiableError(std::vector<std::string> conflict)
        : Error(describe(conflict)), conflict_(std::move(conflict)) {}

    [[nodiscard]] const std::vector<std::string>& conflict() const { return conflict_; }

  private:
    static std::string describe(const std::vector<std::string>& conflict) {
        std::string text = "constraints are unsatisfiable";
        if (!conflict.empty()) {
            text += "; conflicting:";
            for (const auto& c : conflict) {
                text += " " + c;
            }
        }
        return text;
    }

    std::vector<std::string> conflict_;
};

} // namespace peal
