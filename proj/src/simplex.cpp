// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include "peal/simplex.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "peal/errors.hpp"

namespace peal::lp {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

} // namespace

Simplex::Simplex(const Problem& problem) : num_structural_(problem.num_vars) {
    const std::size_t n = problem.num_vars;
    const std::size_t m = problem.rows.size();
    const std::size_t total = n + m;
    if (total >= kNone) {
        throw std::length_error("linear program too large");
    }
    value_.assign(total, Rational(0));
    has_lower_.assign(total, 0);
    has_upper_.assign(total, 0);
    lower_.assign(total, Rational(0));
    upper_.assign(total, Rational(0));
    row_of_.assign(total, -1);
    columns_.assign(total, {});

    for (std::size_t i = 0; i < n; ++i) {
        has_lower_[i] = 1;
        has_upper_[i] = 1;
        upper_[i] = 1;
    }

    rows_.reserve(m);
    row_mark_.assign(m, 0);
    for (std::size_t k = 0; k < m; ++k) {
        const Var slack = static_cast<Var>(n + k);
        has_upper_[slack] = 1;
        upper_[slack] = problem.rows[k].bound;

        std::map<Var, Rational> merged;
        for (const auto& term : problem.rows[k].terms) {
            if (term.var >= n) {
                throw std::out_of_range("row " + std::to_string(k) + " references variable " +
                                        std::to_string(term.var) + " of " + std::to_string(n));
            }
            merged[static_cast<Var>(term.var)] += term.coef;
        }
        TableauRow row{slack, {}};
        for (auto& [var, coef] : merged) {
            if (coef != 0) {
                row.entries.push_back(Entry{var, std::move(coef)});
                columns_[var].push_back(static_cast<Var>(k));
            }
        }
        row_of_[slack] = static_cast<std::int64_t>(k);
        rows_.push_back(std::move(row));
    }
}

const Rational* Simplex::coef_in(std::size_t row, Var var) const {
    const auto& entries = rows_[row].entries;
    const auto it = std::lower_bound(entries.begin(), entries.end(), var,
                                     [](const Entry& e, Var v) { return e.var < v; });
    if (it == entries.end() || it->var != var) {
        return nullptr;
    }
    return &it->coef;
}

const std::vector<Simplex::Var>& Simplex::column(Var var) {
    // Drops stale and duplicate row references left behind by pivots.
    ++stamp_;
    auto& col = columns_[var];
    std::size_t keep = 0;
    for (const Var r : col) {
        if (row_mark_[r] != stamp_ && coef_in(r, var) != nullptr) {
            row_mark_[r] = stamp_;
            col[keep++] = r;
        }
    }
    col.resize(keep);
    return col;
}

bool Simplex::below_lower(Var v) const { return has_lower_[v] && value_[v] < lower_[v]; }
bool Simplex::above_upper(Var v) const { return has_upper_[v] && value_[v] > upper_[v]; }
bool Simplex::can_increase(Var v) const { return !has_upper_[v] || value_[v] < upper_[v]; }
bool Simplex::can_decrease(Var v) const { return !has_lower_[v] || value_[v] > lower_[v]; }

void Simplex::update(Var nonbasic, const Rational& delta) {
    value_[nonbasic] += delta;
    Rational step;
    for (const Var r : column(nonbasic)) {
        step = *coef_in(r, nonbasic) * delta;
        value_[rows_[r].basic] += step;
    }
}

void Simplex::pivot_and_update(Var leaving, Var entering, const Rational& target) {
    const auto r = static_cast<std::size_t>(row_of_[leaving]);
    const Rational theta = (target - value_[leaving]) / *coef_in(r, entering);
    value_[leaving] = target;
    value_[entering] += theta;
    Rational step;
    for (const Var other : column(entering)) {
        if (other == r) {
            continue;
        }
        step = *coef_in(other, entering) * theta;
        value_[rows_[other].basic] += step;
    }
    pivot(r, entering);
}

void Simplex::pivot(std::size_t r, Var entering) {
    ++pivots_;
    TableauRow& prow = rows_[r];
    const Var leaving = prow.basic;
    const Rational a = *coef_in(r, entering);

    // leaving = a*entering + sum c*v   =>   entering = leaving/a - sum (c/a)*v
    std::vector<Entry> solved;
    solved.reserve(prow.entries.size());
    bool placed = false;
    const Rational inv = 1 / a;
    for (auto& e : prow.entries) {
        if (e.var == entering) {
            continue;
        }
        if (!placed && leaving < e.var) {
            solved.push_back(Entry{leaving, inv});
            placed = true;
        }
        solved.push_back(Entry{e.var, -e.coef * inv});
    }
    if (!placed) {
        solved.push_back(Entry{leaving, inv});
    }

    const std::vector<Var> touched = column(entering);
    prow.basic = entering;
    prow.entries = std::move(solved);
    row_of_[entering] = static_cast<std::int64_t>(r);
    row_of_[leaving] = -1;
    columns_[leaving].push_back(static_cast<Var>(r));
    columns_[entering].clear();

    const auto& src = rows_[r].entries;
    std::vector<Entry> merged;
    Rational scaled;
    for (const Var other : touched) {
        if (other == r) {
            continue;
        }
        auto& dst = rows_[other].entries;
        const Rational c = *coef_in(other, entering);
        merged.clear();
        merged.reserve(dst.size() + src.size());
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < dst.size() || j < src.size()) {
            if (i < dst.size() && dst[i].var == entering) {
                ++i;
                continue;
            }
            if (j == src.size() || (i < dst.size() && dst[i].var < src[j].var)) {
                merged.push_back(std::move(dst[i]));
                ++i;
            } else if (i == dst.size() || src[j].var < dst[i].var) {
                scaled = c * src[j].coef;
                merged.push_back(Entry{src[j].var, scaled});
                columns_[src[j].var].push_back(other);
                ++j;
            } else {
                scaled = c * src[j].coef;
                dst[i].coef += scaled;
                if (dst[i].coef != 0) {
                    merged.push_back(std::move(dst[i]));
                }
                ++i;
                ++j;
            }
        }
        dst.swap(merged);
    }
}

bool Simplex::check() {
    conflict_.clear();
    for (;;) {
        Var basic = kNone;
        for (const auto& row : rows_) {
            if (row.basic < basic && (below_lower(row.basic) || above_upper(row.basic))) {
                basic = row.basic;
            }
        }
        if (basic == kNone) {
            return true;
        }

        const auto r = static_cast<std::size_t>(row_of_[basic]);
        const bool raise = below_lower(basic);
        Var entering = kNone;
        for (const auto& e : rows_[r].entries) {
            const bool positive = e.coef > 0;
            if (raise ? (positive ? can_increase(e.var) : can_decrease(e.var))
                      : (positive ? can_decrease(e.var) : can_increase(e.var))) {
                entering = e.var;
                break;
            }
        }
        if (entering == kNone) {
            // The row, read as an identity over the slack definitions,
            // cannot be met within the bounds of the variables it mentions.
            auto note = [this](Var v) {
                if (v >= num_structural_) {
                    conflict_.push_back(v - num_structural_);
                }
            };
            note(basic);
            for (const auto& e : rows_[r].entries) {
                note(e.var);
            }
            std::sort(conflict_.begin(), conflict_.end());
            return false;
        }
        pivot_and_update(basic, entering, raise ? lower_[basic] : upper_[basic]);
    }
}

Rational Simplex::optimize(std::size_t target, Sense sense) {
    const Var t = static_cast<Var>(target);
    const int s = sense == Sense::Maximize ? 1 : -1;
    for (;;) {
        Var entering = kNone;
        int dir = 0;
        if (row_of_[t] < 0) {
            if (s > 0 ? can_increase(t) : can_decrease(t)) {
                entering = t;
                dir = s;
            }
        } else {
            for (const auto& e : rows_[row_of_[t]].entries) {
                const int gain = sgn(e.coef) * s;
                if (gain > 0 && can_increase(e.var)) {
                    entering = e.var;
                    dir = 1;
                    break;
                }
                if (gain < 0 && can_decrease(e.var)) {
                    entering = e.var;
                    dir = -1;
                    break;
                }
            }
        }
        if (entering == kNone) {
            return value_[t];
        }

        std::optional<Rational> theta;
        Var leaving = kNone;
        if (dir > 0 && has_upper_[entering]) {
            theta = upper_[entering] - value_[entering];
        } else if (dir < 0 && has_lower_[entering]) {
            theta = value_[entering] - lower_[entering];
        }
        Rational limit;
        for (const Var r : column(entering)) {
            const Var b = rows_[r].basic;
            const int rate = sgn(*coef_in(r, entering)) * dir;
            if (rate > 0 && has_upper_[b]) {
                limit = (upper_[b] - value_[b]) / abs(*coef_in(r, entering));
            } else if (rate < 0 && has_lower_[b]) {
                limit = (value_[b] - lower_[b]) / abs(*coef_in(r, entering));
            } else {
                continue;
            }
            if (!theta || limit < *theta || (limit == *theta && leaving != kNone && b < leaving)) {
                theta = limit;
                leaving = b;
            }
        }
        if (!theta) {
            throw std::logic_error("unbounded direction in a box-bounded program");
        }
        if (leaving == kNone) {
            update(entering, dir > 0 ? *theta : Rational(-*theta));
        } else {
            const int rate = sgn(*coef_in(static_cast<std::size_t>(row_of_[leaving]), entering)) * dir;
            pivot_and_update(leaving, entering, rate > 0 ? upper_[leaving] : lower_[leaving]);
        }
    }
}

std::vector<Rational> Simplex::witness() const {
    return {value_.begin(), value_.begin() + static_cast<std::ptrdiff_t>(num_structural_)};
}

namespace {

Problem subproblem(const Problem& problem, const std::vector<std::size_t>& rows) {
    Problem sub;
    sub.num_vars = problem.num_vars;
    sub.rows.reserve(rows.size());
    for (const auto r : rows) {
        sub.rows.push_back(problem.rows[r]);
    }
    return sub;
}

} // namespace

std::vector<std::size_t> irreducible_conflict(const Problem& problem, std::vector<std::size_t> rows) {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    for (std::size_t i = 0; i < rows.size();) {
        std::vector<std::size_t> without = rows;
        without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
        Simplex trial(subproblem(problem, without));
        if (!trial.check()) {
            rows = std::move(without);
        } else {
            ++i;
        }
    }
    return rows;
}

Outcome feasible(const Problem& problem) {
    Simplex simplex(problem);
    Outcome out;
    if (simplex.check()) {
        out.status = Status::Feasible;
        out.witness = simplex.witness();
    } else {
        out.status = Status::Infeasible;
        out.conflict = irreducible_conflict(problem, simplex.conflict());
    }
    return out;
}

Outcome optimize(const Problem& problem, std::size_t var, Sense sense) {
    if (var >= problem.num_vars) {
        throw std::out_of_range("objective variable out of range");
    }
    Simplex simplex(problem);
    if (!simplex.check()) {
        std::vector<std::string> labels;
        for (const auto r : irreducible_conflict(problem, simplex.conflict())) {
            labels.push_back("row " + std::to_string(r));
        }
        throw UnsatisfiableError(std::move(labels));
    }
    Outcome out;
    out.status = Status::Feasible;
    out.optimum = simplex.optimize(var, sense);
    out.witness = simplex.witness();
    return out;
}

} // namespace peal::lp
