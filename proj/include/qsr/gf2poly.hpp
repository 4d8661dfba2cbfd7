// Copyright 2026 The qsr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QSR_GF2POLY_HPP
#define QSR_GF2POLY_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsr/text.hpp"

namespace qsr {

/// Binary Laurent polynomial in the delay variable D, stored as its sorted support.
class LaurentPoly {
  public:
    LaurentPoly() = default;

    /// Builds from a list of exponents. Repeated exponents cancel in pairs.
    LaurentPoly(std::initializer_list<int> exponents) : LaurentPoly(std::vector<int>(exponents)) {
    }
    explicit LaurentPoly(std::vector<int> exponents) : support_(std::move(exponents)) {
        canonicalize();
    }

    static LaurentPoly zero() {
        return {};
    }
    static LaurentPoly one() {
        return monomial(0);
    }
    static LaurentPoly monomial(int e) {
        LaurentPoly p;
        p.support_.push_back(e);
        return p;
    }

    const std::vector<int> &support() const {
        return support_;
    }
    size_t weight() const {
        return support_.size();
    }
    bool is_zero() const {
        return support_.empty();
    }
    bool is_one() const {
        return support_.size() == 1 && support_[0] == 0;
    }
    bool is_monomial() const {
        return support_.size() == 1;
    }
    bool coeff(int e) const {
        return std::binary_search(support_.begin(), support_.end(), e);
    }

    int deg() const {
        if (support_.empty()) {
            throw std::domain_error("degree of zero");
        }
        return support_.back();
    }
    int del() const {
        if (support_.empty()) {
            throw std::domain_error("degree of zero");
        }
        return support_.front();
    }
    /// deg - del, the width of the support. Zero for the zero polynomial.
    int span() const {
        return support_.empty() ? 0 : support_.back() - support_.front();
    }

    /// D^c times this polynomial.
    LaurentPoly shifted(int c) const {
        LaurentPoly r = *this;
        for (int &e : r.support_) {
            e += c;
        }
        return r;
    }

    /// f(D^-1).
    LaurentPoly reciprocal() const {
        LaurentPoly r;
        r.support_.reserve(support_.size());
        for (auto it = support_.rbegin(); it != support_.rend(); ++it) {
            r.support_.push_back(-*it);
        }
        return r;
    }

    LaurentPoly &operator+=(const LaurentPoly &other) {
        std::vector<int> out;
        out.reserve(support_.size() + other.support_.size());
        std::set_symmetric_difference(
            support_.begin(), support_.end(), other.support_.begin(), other.support_.end(), std::back_inserter(out));
        support_ = std::move(out);
        return *this;
    }
    LaurentPoly operator+(const LaurentPoly &other) const {
        LaurentPoly r = *this;
        r += other;
        return r;
    }
    LaurentPoly operator*(const LaurentPoly &other) const {
        if (is_zero() || other.is_zero()) {
            return {};
        }
        if (other.is_monomial()) {
            return shifted(other.support_[0]);
        }
        if (is_monomial()) {
            return other.shifted(support_[0]);
        }
        std::vector<int> sums;
        sums.reserve(support_.size() * other.support_.size());
        for (int a : support_) {
            for (int b : other.support_) {
                sums.push_back(a + b);
            }
        }
        return LaurentPoly(std::move(sums));
    }
    LaurentPoly &operator*=(const LaurentPoly &other) {
        *this = *this * other;
        return *this;
    }
    bool operator==(const LaurentPoly &other) const = default;
    bool operator<(const LaurentPoly &other) const {
        return support_ < other.support_;
    }

    /// Terms in ascending exponent order, e.g. "D^-1+1+D^2". Zero prints as "0".
    std::string str() const {
        if (support_.empty()) {
            return "0";
        }
        std::string out;
        for (int e : support_) {
            if (!out.empty()) {
                out += '+';
            }
            if (e == 0) {
                out += '1';
            } else if (e == 1) {
                out += 'D';
            } else {
                out += "D^" + std::to_string(e);
            }
        }
        return out;
    }

    static LaurentPoly parse(std::string_view text);

  private:
    void canonicalize() {
        std::sort(support_.begin(), support_.end());
        std::vector<int> out;
        out.reserve(support_.size());
        for (size_t k = 0; k < support_.size();) {
            size_t j = k;
            while (j < support_.size() && support_[j] == support_[k]) {
                j++;
            }
            if ((j - k) & 1) {
                out.push_back(support_[k]);
            }
            k = j;
        }
        support_ = std::move(out);
    }

    std::vector<int> support_;
};

inline std::ostream &operator<<(std::ostream &out, const LaurentPoly &p) {
    return out << p.str();
}

/// Parses "1+D+D^2", "D^-1+1", "0". Whitespace is ignored; repeated terms cancel.
/// Columns in errors are 1-based positions within `text`.
inline LaurentPoly LaurentPoly::parse(std::string_view text) {
    std::vector<int> exps;
    size_t k = 0;
    auto skip_ws = [&]() {
        while (k < text.size() && std::isspace((unsigned char)text[k])) {
            k++;
        }
    };
    auto col = [&]() {
        return (int)k + 1;
    };
    skip_ws();
    if (k == text.size()) {
        throw ParseError("empty polynomial", 0, 1);
    }
    bool saw_zero = false;
    size_t terms = 0;
    while (true) {
        skip_ws();
        if (k == text.size()) {
            throw ParseError("expected a term", 0, col());
        }
        char c = text[k];
        if (c == '1') {
            k++;
            exps.push_back(0);
        } else if (c == '0') {
            k++;
            saw_zero = true;
        } else if (c == 'D') {
            k++;
            skip_ws();
            if (k < text.size() && text[k] == '^') {
                k++;
                skip_ws();
                int start = col();
                bool neg = false;
                if (k < text.size() && text[k] == '-') {
                    neg = true;
                    k++;
                    skip_ws();
                }
                if (k == text.size() || !std::isdigit((unsigned char)text[k])) {
                    throw ParseError("expected exponent after '^'", 0, col());
                }
                int64_t v = 0;
                while (k < text.size() && std::isdigit((unsigned char)text[k])) {
                    v = v * 10 + (text[k] - '0');
                    if (v > 1000000) {
                        throw ParseError("exponent out of range", 0, start);
                    }
                    k++;
                }
                exps.push_back(neg ? -(int)v : (int)v);
            } else {
                exps.push_back(1);
            }
        } else {
            throw ParseError("unexpected character '" + std::string(1, c) + "' in polynomial", 0, col());
        }
        terms++;
        skip_ws();
        if (k == text.size()) {
            break;
        }
        if (text[k] != '+') {
            throw ParseError("expected '+' between terms, got '" + std::string(1, text[k]) + "'", 0, col());
        }
        k++;
    }
    if (saw_zero && terms > 1) {
        throw ParseError("'0' must stand alone", 0, 1);
    }
    return LaurentPoly(std::move(exps));
}

inline LaurentPoly add(const LaurentPoly &a, const LaurentPoly &b) {
    return a + b;
}
inline LaurentPoly mul(const LaurentPoly &a, const LaurentPoly &b) {
    return a * b;
}
inline int deg(const LaurentPoly &p) {
    return p.deg();
}
inline int del(const LaurentPoly &p) {
    return p.del();
}
inline LaurentPoly reciprocal_substitute(const LaurentPoly &p) {
    return p.reciprocal();
}

/// max{deg p, |del p|} clamped at zero; 0 for the zero polynomial.
inline int abs_deg_poly(const LaurentPoly &p) {
    if (p.is_zero()) {
        return 0;
    }
    return std::max({0, p.deg(), -p.del()});
}

namespace detail {
inline void require_polynomial(const LaurentPoly &p, const char *what) {
    if (!p.is_zero() && p.del() < 0) {
        throw std::domain_error(std::string(what) + " has negative exponents");
    }
}
}  // namespace detail

/// Ordinary polynomial division: a = q*b + r with deg r < deg b.
inline std::pair<LaurentPoly, LaurentPoly> poly_divmod(const LaurentPoly &a, const LaurentPoly &b) {
    if (b.is_zero()) {
        throw std::domain_error("division by zero");
    }
    detail::require_polynomial(a, "dividend");
    detail::require_polynomial(b, "divisor");
    std::vector<int> q;
    LaurentPoly r = a;
    int db = b.deg();
    while (!r.is_zero() && r.deg() >= db) {
        int s = r.deg() - db;
        q.push_back(s);
        r += b.shifted(s);
    }
    return {LaurentPoly(std::move(q)), r};
}

inline LaurentPoly poly_gcd(LaurentPoly a, LaurentPoly b) {
    detail::require_polynomial(a, "gcd operand");
    detail::require_polynomial(b, "gcd operand");
    while (!b.is_zero()) {
        LaurentPoly r = poly_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

/// Shifts a nonzero polynomial so its lowest exponent is 0.
inline LaurentPoly delay_free_part(const LaurentPoly &p) {
    return p.is_zero() ? p : p.shifted(-p.del());
}

/// num/den over GF(2)(D) in lowest terms. The denominator has constant term 1;
/// any D^c factor of it is moved into the numerator.
class RationalTransfer {
  public:
    RationalTransfer() : den_(LaurentPoly::one()) {
    }
    RationalTransfer(const LaurentPoly &p) : num_(p), den_(LaurentPoly::one()) {
    }
    RationalTransfer(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) {
            throw std::domain_error("zero denominator");
        }
        reduce();
    }

    static RationalTransfer zero() {
        return {};
    }
    static RationalTransfer one() {
        return RationalTransfer(LaurentPoly::one());
    }

    const LaurentPoly &num() const {
        return num_;
    }
    const LaurentPoly &den() const {
        return den_;
    }
    bool is_zero() const {
        return num_.is_zero();
    }
    bool is_polynomial() const {
        return den_.is_one();
    }

    RationalTransfer operator+(const RationalTransfer &o) const {
        if (den_ == o.den_) {
            return RationalTransfer(num_ + o.num_, den_);
        }
        return RationalTransfer(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    RationalTransfer &operator+=(const RationalTransfer &o) {
        return *this = *this + o;
    }
    RationalTransfer operator*(const RationalTransfer &o) const {
        if (is_zero() || o.is_zero()) {
            return {};
        }
        if (is_polynomial() && o.is_polynomial()) {
            return RationalTransfer(num_ * o.num_);
        }
        return RationalTransfer(num_ * o.num_, den_ * o.den_);
    }
    RationalTransfer &operator*=(const RationalTransfer &o) {
        return *this = *this * o;
    }
    RationalTransfer inverse() const {
        if (is_zero()) {
            throw std::domain_error("inverse of zero");
        }
        return RationalTransfer(den_, num_);
    }
    RationalTransfer operator/(const RationalTransfer &o) const {
        return *this * o.inverse();
    }
    RationalTransfer reciprocal() const {
        return RationalTransfer(num_.reciprocal(), den_.reciprocal());
    }
    RationalTransfer shifted(int c) const {
        RationalTransfer r = *this;
        r.num_ = r.num_.shifted(c);
        return r;
    }
    bool operator==(const RationalTransfer &o) const = default;

    /// "num" for polynomials, otherwise "num/(den)".
    std::string str() const {
        if (is_polynomial()) {
            return num_.str();
        }
        return num_.str() + "/(" + den_.str() + ")";
    }

    /// Accepts "p", "p/q", "(p)/(q)". Columns are relative to `text`.
    static RationalTransfer parse(std::string_view text);

  private:
    void reduce() {
        int c = den_.del();
        den_ = den_.shifted(-c);
        num_ = num_.shifted(-c);
        if (num_.is_zero()) {
            den_ = LaurentPoly::one();
            return;
        }
        int shift = num_.del();
        LaurentPoly g = poly_gcd(num_.shifted(-shift), den_);
        if (!g.is_one()) {
            num_ = poly_divmod(num_.shifted(-shift), g).first.shifted(shift);
            den_ = poly_divmod(den_, g).first;
        }
    }

    LaurentPoly num_;
    LaurentPoly den_;
};

inline std::ostream &operator<<(std::ostream &out, const RationalTransfer &r) {
    return out << r.str();
}

inline RationalTransfer RationalTransfer::parse(std::string_view text) {
    auto parse_part = [](std::string_view part, int offset) {
        size_t a = 0;
        while (a < part.size() && std::isspace((unsigned char)part[a])) {
            a++;
        }
        size_t b = part.size();
        while (b > a && std::isspace((unsigned char)part[b - 1])) {
            b--;
        }
        if (b > a && part[a] == '(') {
            if (part[b - 1] != ')') {
                throw ParseError("unbalanced parenthesis", 0, offset + (int)a + 1);
            }
            a++;
            b--;
        }
        try {
            return LaurentPoly::parse(part.substr(a, b - a));
        } catch (const ParseError &e) {
            throw e.at(0, offset + (int)a);
        }
    };
    size_t slash = text.find('/');
    if (slash == std::string_view::npos) {
        return RationalTransfer(parse_part(text, 0));
    }
    LaurentPoly num = parse_part(text.substr(0, slash), 0);
    LaurentPoly den = parse_part(text.substr(slash + 1), (int)slash + 1);
    if (den.is_zero()) {
        throw ParseError("zero denominator", 0, (int)slash + 2);
    }
    return RationalTransfer(num, den);
}

/// Causal power series of r, exact for every exponent <= horizon.
inline LaurentPoly series_expand(const RationalTransfer &r, int horizon) {
    if (horizon < 0) {
        throw std::domain_error("negative horizon");
    }
    const LaurentPoly &den = r.den();
    if (!den.coeff(0) || den.del() != 0) {
        throw std::domain_error("not delay-free");
    }
    std::vector<int> out;
    LaurentPoly rem = r.num();
    while (!rem.is_zero() && rem.del() <= horizon) {
        int e = rem.del();
        out.push_back(e);
        rem += den.shifted(e);
    }
    return LaurentPoly(std::move(out));
}

/// Truncation keeping exponents <= horizon.
inline LaurentPoly truncate(const LaurentPoly &p, int horizon) {
    std::vector<int> out;
    for (int e : p.support()) {
        if (e <= horizon) {
            out.push_back(e);
        }
    }
    return LaurentPoly(std::move(out));
}

}  // namespace qsr

#endif
