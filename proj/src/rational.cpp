// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include "peal/rational.hpp"

#include <cctype>

namespace peal {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (const char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

mpz_class pow10(std::size_t n) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, n);
    return p;
}

} // namespace

std::optional<Rational> parse_rational(std::string_view text) {
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    if (text.empty()) {
        return std::nullopt;
    }

    Rational result;
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto num = text.substr(0, slash);
        const auto den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            return std::nullopt;
        }
        const mpz_class d(std::string(den), 10);
        if (d == 0) {
            return std::nullopt;
        }
        result = Rational(mpz_class(std::string(num), 10), d);
    } else {
        const auto dot = text.find('.');
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
        if (dot != std::string_view::npos && frac.empty()) {
            return std::nullopt;
        }
        if (whole.empty() && frac.empty()) {
            return std::nullopt;
        }
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) {
            return std::nullopt;
        }
        mpz_class num(whole.empty() ? std::string("0") : std::string(whole), 10);
        mpz_class den = pow10(frac.size());
        num *= den;
        if (!frac.empty()) {
            num += mpz_class(std::string(frac), 10);
        }
        result = Rational(num, den);
    }
    result.canonicalize();
    if (negative) {
        result = -result;
    }
    return result;
}

std::string to_exact_string(const Rational& value) { return value.get_str(); }

std::string to_compact_string(const Rational& value) {
    mpz_class den = value.get_den();
    std::size_t twos = 0;
    std::size_t fives = 0;
    while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
        den /= 2;
        ++twos;
    }
    while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
        den /= 5;
        ++fives;
    }
    if (den != 1) {
        return value.get_str();
    }
    const std::size_t digits = std::max(twos, fives);
    if (digits == 0) {
        return value.get_num().get_str();
    }
    const mpz_class scaled = value.get_num() * pow10(digits) / value.get_den();
    const bool negative = scaled < 0;
    std::string body = mpz_class(abs(scaled)).get_str();
    if (body.size() <= digits) {
        body.insert(0, digits + 1 - body.size(), '0');
    }
    body.insert(body.size() - digits, ".");
    return negative ? "-" + body : body;
}

std::string to_display_string(const Rational& value, int digits) {
    const mpz_class scale = pow10(static_cast<std::size_t>(digits));
    const bool negative = value < 0;
    const Rational magnitude = abs(value);
    // round half up on the magnitude
    mpz_class twice = 2 * magnitude.get_num() * scale + magnitude.get_den();
    mpz_class rounded;
    mpz_fdiv_q(rounded.get_mpz_t(), twice.get_mpz_t(), mpz_class(2 * magnitude.get_den()).get_mpz_t());

    std::string body = rounded.get_str();
    if (body.size() <= static_cast<std::size_t>(digits)) {
        body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    }
    if (digits > 0) {
        body.insert(body.size() - static_cast<std::size_t>(digits), ".");
        while (body.back() == '0') {
            body.pop_back();
        }
        if (body.back() == '.') {
            body.pop_back();
        }
    }
    if (negative && rounded != 0) {
        body.insert(0, "-");
    }
    return body;
}

} // namespace peal
