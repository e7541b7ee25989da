#pragma once

#include "ktg/rational.hpp"

#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace ktg {

// Formal parameters are interned by name; coefficients become polynomials in
// them, so "for all parameters" statements are exact polynomial identities.
using VarId = int;

namespace detail {
struct VarTable {
    std::vector<std::string> names;
    std::map<std::string, VarId> ids;
    std::mutex mu;
};
inline VarTable& var_table() {
    static VarTable t;
    return t;
}
}  // namespace detail

inline VarId intern_var(const std::string& name) {
    auto& t = detail::var_table();
    std::lock_guard lock(t.mu);
    auto it = t.ids.find(name);
    if (it != t.ids.end()) return it->second;
    VarId id = static_cast<VarId>(t.names.size());
    t.names.push_back(name);
    t.ids.emplace(name, id);
    return id;
}

inline std::string var_name(VarId id) {
    auto& t = detail::var_table();
    std::lock_guard lock(t.mu);
    return t.names.at(static_cast<size_t>(id));
}

// Monomial: sorted (variable, exponent) pairs, exponents > 0.
struct Monomial {
    std::vector<std::pair<VarId, int>> factors;

    int degree() const {
        int d = 0;
        for (auto& [v, e] : factors) d += e;
        return d;
    }
    auto operator<=>(const Monomial&) const = default;

    static Monomial one() { return {}; }
    static Monomial var(VarId v) { return Monomial{{{v, 1}}}; }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        auto a = factors.begin(), ae = factors.end();
        auto b = o.factors.begin(), be = o.factors.end();
        while (a != ae && b != be) {
            if (a->first < b->first) r.factors.push_back(*a++);
            else if (b->first < a->first) r.factors.push_back(*b++);
            else { r.factors.emplace_back(a->first, a->second + b->second); ++a; ++b; }
        }
        r.factors.insert(r.factors.end(), a, ae);
        r.factors.insert(r.factors.end(), b, be);
        return r;
    }
};

// Sparse multivariate polynomial over Rational.
class Poly {
public:
    Poly() = default;
    Poly(int c) { if (c != 0) terms_.emplace(Monomial::one(), Rational(c)); }
    Poly(const Rational& c) { if (c != 0) terms_.emplace(Monomial::one(), c); }

    static Poly variable(const std::string& name) {
        Poly p;
        p.terms_.emplace(Monomial::var(intern_var(name)), Rational(1));
        return p;
    }
    static Poly variable(VarId v) {
        Poly p;
        p.terms_.emplace(Monomial::var(v), Rational(1));
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.factors.empty());
    }
    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (!is_constant()) throw std::domain_error("polynomial is not constant");
        return terms_.begin()->second;
    }
    int degree() const {
        int d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

    const std::map<Monomial, Rational>& terms() const { return terms_; }

    Poly& operator+=(const Poly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { a += b; return a; }
    friend Poly operator-(Poly a, const Poly& b) { a -= b; return a; }
    friend Poly operator-(const Poly& a) { Poly r; r -= a; return r; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }

    friend Poly operator*(const Rational& c, Poly p) {
        if (c == 0) return Poly();
        for (auto& [m, v] : p.terms_) v *= c;
        return p;
    }

    bool operator==(const Poly& o) const { return terms_ == o.terms_; }
    bool operator<(const Poly& o) const { return terms_ < o.terms_; }

    Poly substitute(VarId v, const Poly& value) const {
        Poly r;
        for (auto& [m, c] : terms_) {
            Poly term(c);
            Poly power(1);
            Monomial rest;
            for (auto& [var, exp] : m.factors) {
                if (var == v) {
                    for (int i = 0; i < exp; ++i) power *= value;
                } else {
                    rest.factors.emplace_back(var, exp);
                }
            }
            Poly mono;
            mono.terms_.emplace(rest, Rational(1));
            r += term * mono * power;
        }
        return r;
    }

    // Decomposes an affine (degree <= 1) polynomial as constant + sum c_v * v.
    // Throws if the polynomial has a term of higher degree.
    std::pair<Rational, std::map<VarId, Rational>> affine_parts() const {
        Rational cst(0);
        std::map<VarId, Rational> lin;
        for (auto& [m, c] : terms_) {
            if (m.factors.empty()) cst = c;
            else if (m.degree() == 1) lin[m.factors[0].first] = c;
            else throw std::domain_error("polynomial is not affine");
        }
        return {cst, lin};
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (auto& [m, c] : terms_) {
            std::string t;
            if (m.factors.empty()) {
                t = to_string(c);
            } else {
                if (c == -1) t = "-";
                else if (c != 1) t = to_string(c) + "*";
                bool fv = true;
                for (auto& [v, e] : m.factors) {
                    if (!fv) t += "*";
                    fv = false;
                    t += var_name(v);
                    if (e > 1) t += "^" + std::to_string(e);
                }
            }
            if (!first && !t.empty() && t[0] != '-') out += "+";
            out += t;
            first = false;
        }
        return out;
    }

private:
    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    std::map<Monomial, Rational> terms_;
};

}  // namespace ktg
