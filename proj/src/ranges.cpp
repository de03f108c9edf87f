// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include "peal/simplex.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace peal::lp {

std::vector<Range> ranges(Simplex& simplex) {
    const std::size_t n = simplex.num_vars();
    std::vector<char> reaches_zero(n, 0);
    std::vector<char> reaches_one(n, 0);
    auto record = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            const int s = sgn(simplex.value(i));
            if (s == 0) {
                reaches_zero[i] = 1;
            } else if (simplex.value(i) == 1) {
                reaches_one[i] = 1;
            }
        }
    };
    record();

    std::vector<Range> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (reaches_zero[i]) {
            out[i].lower = 0;
        } else {
            out[i].lower = simplex.optimize(i, Sense::Minimize);
            record();
        }
        if (reaches_one[i]) {
            out[i].upper = 1;
        } else {
            out[i].upper = simplex.optimize(i, Sense::Maximize);
            record();
        }
    }
    return out;
}

namespace {

constexpr std::size_t kNoNode = static_cast<std::size_t>(-1);

class UnionFind {
  public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

  private:
    std::vector<std::size_t> parent_;
};

struct Sparse {
    std::vector<std::pair<std::size_t, Rational>> terms; // merged, nonzero, sorted by var
    Rational bound;
};

// Unions the rows of each biconnected component of the bipartite
// variable/row graph (rows are nodes n..n+m-1).
void join_biconnected(const std::vector<std::vector<std::size_t>>& adj, std::size_t n, UnionFind& rows) {
    const std::size_t total = adj.size();
    std::vector<std::size_t> disc(total, kNoNode);
    std::vector<std::size_t> low(total, 0);
    std::size_t clock = 0;
    struct Frame {
        std::size_t node;
        std::size_t parent;
        std::size_t next;
    };
    std::vector<Frame> frames;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    auto row_of = [n](const std::pair<std::size_t, std::size_t>& e) { return (e.first >= n ? e.first : e.second) - n; };

    for (std::size_t start = 0; start < total; ++start) {
        if (disc[start] != kNoNode || adj[start].empty()) {
            continue;
        }
        disc[start] = low[start] = clock++;
        frames.push_back(Frame{start, kNoNode, 0});
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.next < adj[f.node].size()) {
                const std::size_t w = adj[f.node][f.next++];
                if (w == f.parent) {
                    continue;
                }
                if (disc[w] == kNoNode) {
                    edges.emplace_back(f.node, w);
                    disc[w] = low[w] = clock++;
                    frames.push_back(Frame{w, f.node, 0});
                } else if (disc[w] < disc[f.node]) {
                    edges.emplace_back(f.node, w);
                    low[f.node] = std::min(low[f.node], disc[w]);
                }
                continue;
            }
            const std::size_t node = f.node;
            frames.pop_back();
            if (frames.empty()) {
                break;
            }
            const std::size_t p = frames.back().node;
            low[p] = std::min(low[p], low[node]);
            if (low[node] >= disc[p]) {
                const std::size_t anchor = row_of(edges.back());
                for (;;) {
                    const auto e = edges.back();
                    edges.pop_back();
                    rows.unite(row_of(e), anchor);
                    if (e.first == p && e.second == node) {
                        break;
                    }
                }
            }
        }
    }
}

struct Piece {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> vars; // sorted
};

class Decomposition {
  public:
    Decomposition(std::size_t n, std::vector<Sparse> rows) : n_(n), rows_(std::move(rows)) {}

    std::optional<std::vector<Range>> solve();

  private:
    // Range of `target` within piece `p` with the listed variables boxed.
    // nullopt when infeasible.
    std::optional<Range> project(std::size_t p, std::size_t target, const std::map<std::size_t, Range>& boxes) const;
    std::optional<std::vector<Range>> solve_piece(std::size_t p, const std::map<std::size_t, Range>& boxes) const;
    Problem piece_problem(std::size_t p, const std::map<std::size_t, Range>& boxes) const;

    std::size_t n_;
    std::vector<Sparse> rows_;
    std::vector<Piece> pieces_;
};

Problem Decomposition::piece_problem(std::size_t p, const std::map<std::size_t, Range>& boxes) const {
    const auto& piece = pieces_[p];
    auto local = [&piece](std::size_t v) {
        return static_cast<std::size_t>(std::lower_bound(piece.vars.begin(), piece.vars.end(), v) - piece.vars.begin());
    };
    Problem problem;
    problem.num_vars = piece.vars.size();
    for (const auto r : piece.rows) {
        Row row;
        row.bound = rows_[r].bound;
        for (const auto& [v, coef] : rows_[r].terms) {
            row.terms.push_back(Term{local(v), coef});
        }
        problem.rows.push_back(std::move(row));
    }
    for (const auto& [v, box] : boxes) {
        if (box.lower > 0) {
            problem.rows.push_back(Row{{Term{local(v), Rational(-1)}}, -box.lower});
        }
        if (box.upper < 1) {
            problem.rows.push_back(Row{{Term{local(v), Rational(1)}}, box.upper});
        }
    }
    return problem;
}

std::optional<Range> Decomposition::project(std::size_t p, std::size_t target,
                                            const std::map<std::size_t, Range>& boxes) const {
    const auto& vars = pieces_[p].vars;
    Simplex simplex(piece_problem(p, boxes));
    if (!simplex.check()) {
        return std::nullopt;
    }
    const auto t = static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), target) - vars.begin());
    Range range;
    range.lower = simplex.optimize(t, Sense::Minimize);
    range.upper = simplex.optimize(t, Sense::Maximize);
    return range;
}

std::optional<std::vector<Range>> Decomposition::solve_piece(std::size_t p,
                                                             const std::map<std::size_t, Range>& boxes) const {
    Simplex simplex(piece_problem(p, boxes));
    if (!simplex.check()) {
        return std::nullopt;
    }
    return ranges(simplex);
}

bool meet(Range& into, const Range& other) {
    if (other.lower > into.lower) {
        into.lower = other.lower;
    }
    if (other.upper < into.upper) {
        into.upper = other.upper;
    }
    return into.lower <= into.upper;
}

Range full_box() { return Range{Rational(0), Rational(1)}; }

std::optional<std::vector<Range>> Decomposition::solve() {
    const std::size_t m = rows_.size();
    std::vector<std::vector<std::size_t>> adj(n_ + m);
    for (std::size_t r = 0; r < m; ++r) {
        for (const auto& term : rows_[r].terms) {
            adj[term.first].push_back(n_ + r);
            adj[n_ + r].push_back(term.first);
        }
    }
    UnionFind uf(m);
    join_biconnected(adj, n_, uf);

    std::vector<std::size_t> piece_of_root(m, kNoNode);
    for (std::size_t r = 0; r < m; ++r) {
        if (rows_[r].terms.empty()) {
            if (rows_[r].bound < 0) {
                return std::nullopt;
            }
            continue;
        }
        const std::size_t root = uf.find(r);
        if (piece_of_root[root] == kNoNode) {
            piece_of_root[root] = pieces_.size();
            pieces_.emplace_back();
        }
        auto& piece = pieces_[piece_of_root[root]];
        piece.rows.push_back(r);
        for (const auto& term : rows_[r].terms) {
            piece.vars.push_back(term.first);
        }
    }
    std::vector<std::vector<std::size_t>> pieces_of_var(n_);
    for (std::size_t p = 0; p < pieces_.size(); ++p) {
        auto& vars = pieces_[p].vars;
        std::sort(vars.begin(), vars.end());
        vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
        for (const auto v : vars) {
            pieces_of_var[v].push_back(p);
        }
    }

    // Root each tree of pieces and shared variables; record the visit order.
    const std::size_t k = pieces_.size();
    std::vector<std::size_t> parent_var(k, kNoNode);
    std::vector<std::size_t> parent_piece(n_, kNoNode);
    std::vector<std::vector<std::size_t>> child_vars(k);
    std::vector<std::vector<std::size_t>> child_pieces(n_);
    std::vector<char> seen(k, 0);
    std::vector<std::size_t> order;
    order.reserve(k);
    for (std::size_t root = 0; root < k; ++root) {
        if (seen[root]) {
            continue;
        }
        seen[root] = 1;
        std::size_t head = order.size();
        order.push_back(root);
        while (head < order.size()) {
            const std::size_t p = order[head++];
            for (const auto v : pieces_[p].vars) {
                if (v == parent_var[p] || pieces_of_var[v].size() < 2) {
                    continue;
                }
                parent_piece[v] = p;
                child_vars[p].push_back(v);
                for (const auto q : pieces_of_var[v]) {
                    if (q == p) {
                        continue;
                    }
                    if (seen[q]) {
                        throw std::logic_error("decomposition is not a tree");
                    }
                    seen[q] = 1;
                    parent_var[q] = v;
                    child_pieces[v].push_back(q);
                    order.push_back(q);
                }
            }
        }
    }

    // up[p]: projection onto parent_var[p] of the subtree below it.
    std::vector<Range> up(k, full_box());
    // below[v]: meet of up[] over the child pieces of v.
    std::vector<Range> below(n_, full_box());
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t p = *it;
        std::map<std::size_t, Range> boxes;
        for (const auto v : child_vars[p]) {
            below[v] = full_box();
            for (const auto c : child_pieces[v]) {
                if (!meet(below[v], up[c])) {
                    return std::nullopt;
                }
            }
            boxes.emplace(v, below[v]);
        }
        if (parent_var[p] == kNoNode) {
            continue;
        }
        auto range = project(p, parent_var[p], boxes);
        if (!range) {
            return std::nullopt;
        }
        up[p] = std::move(*range);
    }

    // global[v]: exact range of a shared variable.
    std::vector<Range> global(n_, full_box());
    // above[v]: projection onto v of everything outside v's child subtrees.
    std::vector<Range> above(n_, full_box());
    for (const std::size_t p : order) {
        const std::size_t pv = parent_var[p];
        Range from_parent = full_box();
        if (pv != kNoNode) {
            from_parent = above[pv];
            for (const auto c : child_pieces[pv]) {
                if (c != p && !meet(from_parent, up[c])) {
                    return std::nullopt;
                }
            }
        }
        for (const auto v : child_vars[p]) {
            std::map<std::size_t, Range> boxes;
            if (pv != kNoNode) {
                boxes.emplace(pv, from_parent);
            }
            for (const auto w : child_vars[p]) {
                if (w != v) {
                    boxes.emplace(w, below[w]);
                }
            }
            auto range = project(p, v, boxes);
            if (!range) {
                return std::nullopt;
            }
            above[v] = std::move(*range);
            global[v] = above[v];
            if (!meet(global[v], below[v])) {
                return std::nullopt;
            }
        }
    }

    std::vector<Range> out(n_, full_box());
    for (std::size_t p = 0; p < k; ++p) {
        std::map<std::size_t, Range> boxes;
        for (const auto v : pieces_[p].vars) {
            if (pieces_of_var[v].size() > 1) {
                boxes.emplace(v, global[v]);
            }
        }
        const auto solved = solve_piece(p, boxes);
        if (!solved) {
            return std::nullopt;
        }
        const auto& vars = pieces_[p].vars;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (pieces_of_var[vars[i]].size() < 2) {
                out[vars[i]] = (*solved)[i];
            } else {
                out[vars[i]] = global[vars[i]];
            }
        }
    }
    return out;
}

} // namespace

std::optional<std::vector<Range>> decomposed_ranges(const Problem& problem) {
    const std::size_t n = problem.num_vars;
    std::vector<Sparse> rows;
    rows.reserve(problem.rows.size());
    for (std::size_t k = 0; k < problem.rows.size(); ++k) {
        std::map<std::size_t, Rational> merged;
        for (const auto& term : problem.rows[k].terms) {
            if (term.var >= n) {
                throw std::out_of_range("row " + std::to_string(k) + " references variable " +
                                        std::to_string(term.var) + " of " + std::to_string(n));
            }
            merged[term.var] += term.coef;
        }
        Sparse row;
        row.bound = problem.rows[k].bound;
        for (auto& [var, coef] : merged) {
            if (coef != 0) {
                row.terms.emplace_back(var, std::move(coef));
            }
        }
        rows.push_back(std::move(row));
    }
    return Decomposition(n, std::move(rows)).solve();
}

} // namespace peal::lp
