// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "peal/rational.hpp"

namespace peal::lp {

struct Term {
    std::size_t var;
    Rational coef;
};

/// sum coef * x[var] <= bound
struct Row {
    std::vector<Term> terms;
    Rational bound;
};

/// Every variable carries the implicit box 0 <= x <= 1, so the feasible
/// region is a polytope and no objective is unbounded.
struct Problem {
    std::size_t num_vars = 0;
    std::vector<Row> rows;
};

enum class Status { Feasible, Infeasible };
enum class Sense { Minimize, Maximize };

struct Outcome {
    Status status = Status::Infeasible;
    std::optional<Rational> optimum; // set by optimize()
    std::vector<Rational> witness;   // feasible point, when status == Feasible
    std::vector<std::size_t> conflict; // row indices, when status == Infeasible
};

/// Incremental bounded-variable simplex over exact rationals.
///
/// Rows become slack variables s_k = sum a_ki x_i with s_k <= b_k; the
/// tableau keeps each basic variable as a sparse combination of the
/// nonbasic ones, and nonbasic variables always sit on one of their bounds.
/// Entering and leaving choices follow Bland's smallest-index rule, so
/// both the feasibility search and the optimisation terminate and are
/// deterministic.
///
/// After a successful check() the assignment stays feasible through any
/// number of optimize() calls, each of which starts from the basis the
/// previous one left behind.
class Simplex {
  public:
    explicit Simplex(const Problem& problem);

    /// Searches for a feasible assignment. On failure conflict() names
    /// the rows of an infeasible subsystem.
    bool check();

    /// Optimal value of x[var]; requires a prior successful check().
    Rational optimize(std::size_t var, Sense sense);

    [[nodiscard]] const Rational& value(std::size_t var) const { return value_[var]; }
    [[nodiscard]] std::vector<Rational> witness() const;
    [[nodiscard]] const std::vector<std::size_t>& conflict() const { return conflict_; }
    [[nodiscard]] std::size_t num_vars() const { return num_structural_; }
    [[nodiscard]] std::uint64_t pivots() const { return pivots_; }

  private:
    using Var = std::uint32_t;

    struct Entry {
        Var var;
        Rational coef;
    };

    struct TableauRow {
        Var basic;
        std::vector<Entry> entries; // sorted by var
    };

    [[nodiscard]] const Rational* coef_in(std::size_t row, Var var) const;
    const std::vector<Var>& column(Var var);
    [[nodiscard]] bool below_lower(Var v) const;
    [[nodiscard]] bool above_upper(Var v) const;
    [[nodiscard]] bool can_increase(Var v) const;
    [[nodiscard]] bool can_decrease(Var v) const;
    void update(Var nonbasic, const Rational& delta);
    void pivot_and_update(Var leaving, Var entering, const Rational& target);
    void pivot(std::size_t row, Var entering);

    std::size_t num_structural_ = 0;
    std::vector<Rational> value_;
    std::vector<char> has_lower_;
    std::vector<char> has_upper_;
    std::vector<Rational> lower_;
    std::vector<Rational> upper_;
    std::vector<TableauRow> rows_;
    std::vector<std::int64_t> row_of_; // -1 when nonbasic
    std::vector<std::vector<Var>> columns_; // rows that may mention a nonbasic var
    std::vector<std::uint64_t> row_mark_;
    std::uint64_t stamp_ = 0;
    std::vector<std::size_t> conflict_;
    std::uint64_t pivots_ = 0;
};

/// One-shot feasibility. An infeasible outcome carries an irreducible
/// conflicting subset of rows: dropping any one of them makes that subset
/// feasible.
Outcome feasible(const Problem& problem);

/// One-shot optimisation of a single variable. Throws UnsatisfiableError
/// when the problem has no feasible point.
Outcome optimize(const Problem& problem, std::size_t var, Sense sense);

/// Greedy deletion filter: shrinks an infeasible subset of rows to an
/// irreducible one.
std::vector<std::size_t> irreducible_conflict(const Problem& problem, std::vector<std::size_t> rows);

struct Range {
    Rational lower;
    Rational upper;
    bool operator==(const Range&) const = default;
};

/// Minimum and maximum of every variable on one checked instance. Each
/// objective starts from the basis the previous one left; a bound of 0 or
/// 1 already attained by an earlier optimal point is taken without a solve.
std::vector<Range> ranges(Simplex& simplex);

/// Exact range of every variable, or nullopt when the problem is
/// infeasible.
///
/// The variable/row incidence graph is cut at articulation variables into
/// pieces that share at most one variable with each other and form a tree.
/// The projection of a subtree onto a shared variable is an interval, so
/// intervals passed along the tree in both directions give each shared
/// variable its exact global range, and each piece is then solved on its
/// own with its shared variables boxed to those ranges.
std::optional<std::vector<Range>> decomposed_ranges(const Problem& problem);

} // namespace peal::lp
