// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include "peal/world_oracle.hpp"

#include <bit>
#include <optional>
#include <stdexcept>

#include "peal/errors.hpp"

namespace peal {

Rational WorldDistribution::marginal(std::size_t argument) const {
    Rational sum;
    for (std::size_t w = 0; w < probability.size(); ++w) {
        if ((w >> argument) & 1U) {
            sum += probability[w];
        }
    }
    return sum;
}

Rational WorldDistribution::total() const {
    Rational sum;
    for (const auto& p : probability) {
        sum += p;
    }
    return sum;
}

WorldDistribution realize(const std::vector<Rational>& marginals) {
    if (marginals.size() > kRealizeMaxArguments) {
        throw ValidationError("realize supports at most " + std::to_string(kRealizeMaxArguments) + " arguments");
    }
    for (const auto& m : marginals) {
        if (m < 0 || m > 1) {
            throw ValidationError("marginal " + to_exact_string(m) + " lies outside [0, 1]");
        }
    }
    WorldDistribution dist;
    dist.num_arguments = marginals.size();
    dist.probability.assign(std::size_t{1} << marginals.size(), Rational(1));
    for (std::size_t w = 0; w < dist.probability.size(); ++w) {
        for (std::size_t i = 0; i < marginals.size(); ++i) {
            dist.probability[w] *= ((w >> i) & 1U) ? marginals[i] : Rational(1 - marginals[i]);
        }
    }
    return dist;
}

namespace {

/// Two-phase revised simplex over the world variables, with an explicit
/// dense basis inverse. Columns are ordered worlds, then slacks, then
/// artificials; world columns are never materialised except when entering.
class WorldLp {
  public:
    WorldLp(const ArgGraph& graph, const ConstraintSet& constraints) : n_(graph.size()) {
        if (n_ > kOracleMaxArguments) {
            throw ValidationError("possible-world oracle supports at most " + std::to_string(kOracleMaxArguments) +
                                  " arguments, graph has " + std::to_string(n_));
        }
        worlds_ = std::size_t{1} << n_;
        m_ = constraints.size();
        rows_ = m_ + 1;
        coef_.assign(m_, std::vector<Rational>(n_));
        sign_.assign(m_, 1);
        rhs_.assign(rows_, Rational(0));
        for (std::size_t r = 0; r < m_; ++r) {
            const auto& c = constraints[r].constraint;
            for (const auto& [id, a] : c.terms) {
                coef_[r][graph.index_of(id)] += a;
            }
            sign_[r] = c.bound < 0 ? -1 : 1;
            rhs_[r] = sign_[r] * c.bound;
        }
        rhs_[m_] = 1;

        const std::size_t columns = worlds_ + m_ + rows_;
        in_basis_.assign(columns, 0);
        basis_.resize(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            basis_[r] = (r < m_ && sign_[r] > 0) ? slack(r) : artificial(r);
            in_basis_[basis_[r]] = 1;
        }
        binv_.assign(rows_, std::vector<Rational>(rows_));
        for (std::size_t r = 0; r < rows_; ++r) {
            binv_[r][r] = 1;
        }
        xb_ = rhs_;
        scratch_.resize(worlds_);
    }

    bool feasible() {
        if (!phase_one_done_) {
            phase_one_done_ = true;
            objective_ = Objective{Phase::One, 0, 1};
            run();
            Rational infeasibility;
            for (std::size_t r = 0; r < rows_; ++r) {
                if (is_artificial(basis_[r])) {
                    infeasibility += xb_[r];
                }
            }
            feasible_ = infeasibility == 0;
            if (feasible_) {
                drive_out_artificials();
            }
        }
        return feasible_;
    }

    Rational optimize(std::size_t target, bool maximize) {
        if (!feasible()) {
            throw UnsatisfiableError({});
        }
        objective_ = Objective{Phase::Two, target, maximize ? -1 : 1};
        run();
        Rational value;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (basis_[r] < worlds_ && ((basis_[r] >> target) & 1U)) {
                value += xb_[r];
            }
        }
        return value;
    }

  private:
    enum class Phase { One, Two };

    struct Objective {
        Phase phase;
        std::size_t target;
        int sign; // phase two minimises sign * P(target)
    };

    [[nodiscard]] std::size_t slack(std::size_t r) const { return worlds_ + r; }
    [[nodiscard]] std::size_t artificial(std::size_t r) const { return worlds_ + m_ + r; }
    [[nodiscard]] bool is_artificial(std::size_t j) const { return j >= worlds_ + m_; }

    [[nodiscard]] int cost(std::size_t j) const {
        if (objective_.phase == Phase::One) {
            return is_artificial(j) ? 1 : 0;
        }
        if (j < worlds_ && ((j >> objective_.target) & 1U)) {
            return objective_.sign;
        }
        return 0;
    }

    [[nodiscard]] std::vector<Rational> column(std::size_t j) const {
        std::vector<Rational> a(rows_);
        if (j < worlds_) {
            for (std::size_t r = 0; r < m_; ++r) {
                for (std::size_t i = 0; i < n_; ++i) {
                    if ((j >> i) & 1U) {
                        a[r] += coef_[r][i];
                    }
                }
                a[r] *= sign_[r];
            }
            a[m_] = 1;
        } else if (!is_artificial(j)) {
            const std::size_t r = j - worlds_;
            a[r] = sign_[r];
        } else {
            a[j - worlds_ - m_] = 1;
        }
        return a;
    }

    /// Per-argument contribution of `weights` (a row vector over the
    /// constraint rows) to a world column: weights . A_w = sum_{i in w} z_i + weights[m].
    [[nodiscard]] std::vector<Rational> argument_weights(const std::vector<Rational>& weights) const {
        std::vector<Rational> z(n_);
        for (std::size_t r = 0; r < m_; ++r) {
            if (weights[r] == 0) {
                continue;
            }
            const Rational wr = weights[r] * sign_[r];
            for (std::size_t i = 0; i < n_; ++i) {
                if (coef_[r][i] != 0) {
                    z[i] += wr * coef_[r][i];
                }
            }
        }
        return z;
    }

    /// Smallest-index column with negative reduced cost.
    std::optional<std::size_t> entering() {
        std::vector<Rational> y(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            const int c = cost(basis_[r]);
            if (c == 0) {
                continue;
            }
            for (std::size_t k = 0; k < rows_; ++k) {
                y[k] += c * binv_[r][k];
            }
        }
        const auto z = argument_weights(y);
        const auto world = scaled_pricing(z, y[m_]) ? price_worlds_scaled() : price_worlds_exact(z, y[m_]);
        if (world) {
            return world;
        }
        for (std::size_t r = 0; r < m_; ++r) {
            if (!in_basis_[slack(r)] && sign_[r] * y[r] > 0) {
                return slack(r);
            }
        }
        return std::nullopt;
    }

    /// Scales z and y_m to integers over a common denominator. Returns
    /// false when the subset sums might not fit in 128 bits.
    bool scaled_pricing(const std::vector<Rational>& z, const Rational& ym) {
        mpz_class den = 1;
        auto absorb = [&](const Rational& v) { mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t()); };
        for (const auto& v : z) {
            absorb(v);
        }
        absorb(ym);
        const std::size_t limit_bits = 120 - std::bit_width(n_ + 2);
        if (mpz_sizeinbase(den.get_mpz_t(), 2) > limit_bits) {
            return false;
        }
        auto to_i128 = [&](const Rational& v, __int128& out) {
            const mpz_class scaled = v.get_num() * (den / v.get_den());
            if (mpz_sizeinbase(scaled.get_mpz_t(), 2) > limit_bits) {
                return false;
            }
            const mpz_class mag = abs(scaled);
            const mpz_class high = mag >> 64;
            const mpz_class low = mag - (high << 64);
            out = (static_cast<__int128>(high.get_ui()) << 64) | static_cast<__int128>(low.get_ui());
            if (sgn(scaled) < 0) {
                out = -out;
            }
            return true;
        };
        scaled_z_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            if (!to_i128(z[i], scaled_z_[i])) {
                return false;
            }
        }
        return to_i128(ym, scaled_ym_) && to_i128(Rational(1), scaled_den_);
    }

    std::optional<std::size_t> price_worlds_scaled() {
        scratch_i128_.resize(worlds_);
        scratch_i128_[0] = 0;
        for (std::size_t w = 0; w < worlds_; ++w) {
            if (w > 0) {
                scratch_i128_[w] = scratch_i128_[w & (w - 1)] + scaled_z_[static_cast<std::size_t>(std::countr_zero(w))];
            }
            if (in_basis_[w]) {
                continue;
            }
            if (cost(w) * scaled_den_ - scratch_i128_[w] - scaled_ym_ < 0) {
                return w;
            }
        }
        return std::nullopt;
    }

    std::optional<std::size_t> price_worlds_exact(const std::vector<Rational>& z, const Rational& ym) {
        Rational reduced;
        scratch_[0] = 0;
        for (std::size_t w = 0; w < worlds_; ++w) {
            if (w > 0) {
                scratch_[w] = scratch_[w & (w - 1)] + z[static_cast<std::size_t>(std::countr_zero(w))];
            }
            if (in_basis_[w]) {
                continue;
            }
            reduced = cost(w) - scratch_[w] - ym;
            if (reduced < 0) {
                return w;
            }
        }
        return std::nullopt;
    }

    void pivot(std::size_t p, std::size_t q, const std::vector<Rational>& u) {
        const Rational up = u[p];
        for (auto& v : binv_[p]) {
            v /= up;
        }
        xb_[p] /= up;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == p || u[r] == 0) {
                continue;
            }
            const Rational f = u[r];
            for (std::size_t k = 0; k < rows_; ++k) {
                if (binv_[p][k] != 0) {
                    binv_[r][k] -= f * binv_[p][k];
                }
            }
            xb_[r] -= f * xb_[p];
        }
        in_basis_[basis_[p]] = 0;
        in_basis_[q] = 1;
        basis_[p] = q;
    }

    [[nodiscard]] std::vector<Rational> transformed(std::size_t q) const {
        const auto a = column(q);
        std::vector<Rational> u(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t k = 0; k < rows_; ++k) {
                if (a[k] != 0 && binv_[r][k] != 0) {
                    u[r] += binv_[r][k] * a[k];
                }
            }
        }
        return u;
    }

    void run() {
        for (;;) {
            const auto q = entering();
            if (!q) {
                return;
            }
            const auto u = transformed(*q);
            std::optional<std::size_t> leave;
            Rational best;
            Rational ratio;
            for (std::size_t r = 0; r < rows_; ++r) {
                if (u[r] <= 0) {
                    continue;
                }
                ratio = xb_[r] / u[r];
                if (!leave || ratio < best || (ratio == best && basis_[r] < basis_[*leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (!leave) {
                throw std::logic_error("world LP unbounded");
            }
            pivot(*leave, *q, u);
        }
    }

    void drive_out_artificials() {
        for (std::size_t p = 0; p < rows_; ++p) {
            if (!is_artificial(basis_[p])) {
                continue;
            }
            std::optional<std::size_t> replacement;
            const auto z = argument_weights(binv_[p]);
            scratch_[0] = 0;
            for (std::size_t w = 0; w < worlds_ && !replacement; ++w) {
                if (w > 0) {
                    scratch_[w] = scratch_[w & (w - 1)] + z[static_cast<std::size_t>(std::countr_zero(w))];
                }
                if (!in_basis_[w] && scratch_[w] + binv_[p][m_] != 0) {
                    replacement = w;
                }
            }
            for (std::size_t r = 0; r < m_ && !replacement; ++r) {
                if (!in_basis_[slack(r)] && binv_[p][r] != 0) {
                    replacement = slack(r);
                }
            }
            if (replacement) {
                pivot(p, *replacement, transformed(*replacement));
            }
            // Otherwise the row is redundant and its artificial stays at 0.
        }
    }

    std::size_t n_;
    std::size_t worlds_ = 0;
    std::size_t m_ = 0;
    std::size_t rows_ = 0;
    std::vector<std::vector<Rational>> coef_;
    std::vector<int> sign_;
    std::vector<Rational> rhs_;
    std::vector<std::size_t> basis_;
    std::vector<char> in_basis_;
    std::vector<std::vector<Rational>> binv_;
    std::vector<Rational> xb_;
    std::vector<Rational> scratch_;
    std::vector<__int128> scratch_i128_;
    std::vector<__int128> scaled_z_;
    __int128 scaled_ym_ = 0;
    __int128 scaled_den_ = 1;
    Objective objective_{Phase::One, 0, 1};
    bool phase_one_done_ = false;
    bool feasible_ = false;
};

} // namespace

bool oracle_satisfiable(const ArgGraph& graph, const ConstraintSet& constraints) {
    WorldLp lp(graph, constraints);
    return lp.feasible();
}

Interval oracle_entail(const ArgGraph& graph, const ConstraintSet& constraints, const ArgumentId& id) {
    const std::size_t index = graph.index_of(id);
    WorldLp lp(graph, constraints);
    Interval interval;
    interval.lower = lp.optimize(index, false);
    interval.upper = lp.optimize(index, true);
    return interval;
}

BeliefBounds oracle_entail_all(const ArgGraph& graph, const ConstraintSet& constraints) {
    WorldLp lp(graph, constraints);
    BeliefBounds bounds;
    for (std::size_t i = 0; i < graph.size(); ++i) {
        Interval interval;
        interval.lower = lp.optimize(i, false);
        interval.upper = lp.optimize(i, true);
        bounds.set(graph.arguments()[i], std::move(interval));
    }
    return bounds;
}

} // namespace peal
