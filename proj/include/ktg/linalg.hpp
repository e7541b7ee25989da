#pragma once

#include "ktg/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace ktg {

// Sparse vector over Rational: sorted (column, coefficient) pairs, no zeros.
struct SparseVec {
    std::vector<std::pair<int, Rational>> terms;

    bool empty() const { return terms.empty(); }

    const Rational* coeff(int col) const {
        auto it = std::lower_bound(terms.begin(), terms.end(), col,
                                   [](const auto& t, int c) { return t.first < c; });
        if (it != terms.end() && it->first == col) return &it->second;
        return nullptr;
    }

    void set(int col, const Rational& c) {
        auto it = std::lower_bound(terms.begin(), terms.end(), col,
                                   [](const auto& t, int cc) { return t.first < cc; });
        if (it != terms.end() && it->first == col) {
            if (c == 0) terms.erase(it);
            else it->second = c;
        } else if (c != 0) {
            terms.insert(it, {col, c});
        }
    }

    SparseVec& scale(const Rational& c) {
        if (c == 0) { terms.clear(); return *this; }
        for (auto& t : terms) t.second *= c;
        return *this;
    }

    // *this += c * other
    void add_scaled(const SparseVec& other, const Rational& c) {
        if (c == 0 || other.terms.empty()) return;
        std::vector<std::pair<int, Rational>> out;
        out.reserve(terms.size() + other.terms.size());
        auto a = terms.begin(), ae = terms.end();
        auto b = other.terms.begin(), be = other.terms.end();
        while (a != ae && b != be) {
            if (a->first < b->first) out.push_back(*a++);
            else if (b->first < a->first) { out.emplace_back(b->first, c * b->second); ++b; }
            else {
                Rational v = a->second + c * b->second;
                if (v != 0) out.emplace_back(a->first, std::move(v));
                ++a; ++b;
            }
        }
        for (; a != ae; ++a) out.push_back(*a);
        for (; b != be; ++b) out.emplace_back(b->first, c * b->second);
        terms = std::move(out);
    }

    bool operator==(const SparseVec& o) const { return terms == o.terms; }
};

// Incrementally built reduced row echelon form. Pivot rule is fixed: the pivot
// of each row is its leftmost column; among candidate rows, the first inserted
// wins. The fully reduced form is the canonical RREF of the row space, so the
// result is independent of insertion order anyway; the rule only fixes the
// intermediate computation.
class Echelon {
public:
    // Returns true if the row was independent of the current span.
    bool add_row(SparseVec row) {
        reduce_in_place(row);
        if (row.empty()) return false;
        int p = row.terms.front().first;
        Rational inv = Rational(1) / row.terms.front().second;
        row.scale(inv);
        // eliminate this column from existing pivot rows (keeps full RREF)
        for (auto& [c, r] : pivots_) {
            const Rational* v = r.coeff(p);
            if (v) r.add_scaled(row, -*v);
        }
        pivots_.emplace(p, std::move(row));
        return true;
    }

    int rank() const { return static_cast<int>(pivots_.size()); }

    const std::map<int, SparseVec>& pivot_rows() const { return pivots_; }

    bool is_pivot(int col) const { return pivots_.count(col) != 0; }

    // Normal form of v modulo the row space: pivot columns eliminated.
    SparseVec reduce(SparseVec v) const {
        reduce_in_place(v);
        return v;
    }

    bool contains(SparseVec v) const { return reduce(std::move(v)).empty(); }

private:
    void reduce_in_place(SparseVec& v) const {
        // repeatedly kill the leftmost pivot column present in v
        size_t i = 0;
        while (i < v.terms.size()) {
            auto it = pivots_.find(v.terms[i].first);
            if (it == pivots_.end()) { ++i; continue; }
            Rational c = v.terms[i].second;
            v.add_scaled(it->second, -c);
            // entries before position i are untouched (pivot rows start at their pivot)
        }
    }

    std::map<int, SparseVec> pivots_;  // pivot column -> row, pivot coefficient 1
};

// Affine solution set of a linear system: { particular + span(directions) }.
struct AffineSolution {
    bool solvable = false;
    std::vector<Rational> particular;                // size nvars
    std::vector<std::vector<Rational>> directions;   // nullspace basis vectors
};

// Rows are (coefficients, rhs). Unknowns are columns 0..nvars-1.
inline AffineSolution solve_affine(const std::vector<std::pair<SparseVec, Rational>>& rows,
                                   int nvars) {
    Echelon ech;
    for (const auto& [coeffs, rhs] : rows) {
        SparseVec r = coeffs;
        r.set(nvars, rhs);  // augmented column
        ech.add_row(std::move(r));
    }
    AffineSolution sol;
    if (ech.is_pivot(nvars)) return sol;  // inconsistent
    sol.solvable = true;
    sol.particular.assign(nvars, Rational(0));
    for (const auto& [p, row] : ech.pivot_rows()) {
        const Rational* b = row.coeff(nvars);
        if (b) sol.particular[p] = *b;  // free vars at 0; rhs moved across
    }
    for (int f = 0; f < nvars; ++f) {
        if (ech.is_pivot(f)) continue;
        std::vector<Rational> dir(nvars, Rational(0));
        dir[f] = 1;
        for (const auto& [p, row] : ech.pivot_rows()) {
            const Rational* c = row.coeff(f);
            if (c) dir[p] = -*c;
        }
        sol.directions.push_back(std::move(dir));
    }
    return sol;
}

// Fraction-free Gaussian elimination rank of a dense integer matrix.
inline int bareiss_rank(std::vector<std::vector<Integer>> m) {
    if (m.empty()) return 0;
    size_t rows = m.size(), cols = m[0].size();
    Integer prev(1);
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        for (size_t i = r + 1; i < rows; ++i) {
            for (size_t j = c + 1; j < cols; ++j) {
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / prev;
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        ++r;
    }
    return static_cast<int>(r);
}

namespace detail {

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline uint64_t powmod(uint64_t a, uint64_t e, uint64_t p) {
    uint64_t r = 1;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline uint64_t invmod(uint64_t a, uint64_t p) { return powmod(a, p - 2, p); }

inline uint64_t rational_mod(const Rational& r, uint64_t p) {
    Integer num = boost::multiprecision::numerator(r);
    Integer den = boost::multiprecision::denominator(r);
    bool neg = num < 0;
    if (neg) num = -num;
    uint64_t n = static_cast<uint64_t>(num % p);
    uint64_t d = static_cast<uint64_t>(den % p);
    if (d == 0) throw std::domain_error("denominator divisible by modulus");
    uint64_t v = mulmod(n, invmod(d, p), p);
    return neg && v != 0 ? p - v : v;
}

}  // namespace detail

// Independent rank oracle: mixes the rows by a random square matrix with small
// rational entries, then computes the rank of the projected matrix by dense
// elimination modulo a large prime. A modular rank can only come out too low,
// and the deterministic rank only too high relative to truth, so agreement of
// the two routes is strong evidence both are exact.
inline int randomized_rank(const std::vector<SparseVec>& rows, int ncols, uint64_t seed) {
    constexpr uint64_t P = 2305843009213693951ull;  // 2^61 - 1, prime
    size_t m = rows.size();
    if (m == 0 || ncols == 0) return 0;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coef(1, 19);
    std::uniform_int_distribution<int> sign(0, 1);

    // mixed[i] = sum_j P_ij * rows[j] over Z_p, P_ij random nonzero rationals
    // (realized as random small integers divided by a shared random unit).
    std::vector<std::vector<uint64_t>> mixed(m, std::vector<uint64_t>(ncols, 0));
    for (size_t j = 0; j < m; ++j) {
        std::vector<std::pair<int, uint64_t>> rj;
        rj.reserve(rows[j].terms.size());
        for (const auto& [c, v] : rows[j].terms) rj.emplace_back(c, detail::rational_mod(v, P));
        for (size_t i = 0; i < m; ++i) {
            uint64_t pij = static_cast<uint64_t>(coef(rng));
            if (sign(rng)) pij = P - pij;
            for (const auto& [c, v] : rj) {
                mixed[i][c] = (mixed[i][c] + detail::mulmod(pij, v, P)) % P;
            }
        }
    }

    // dense elimination mod P, rightmost-column-first pivot order (deliberately
    // different from the deterministic route)
    int rank = 0;
    size_t r = 0;
    for (int c = ncols - 1; c >= 0 && r < m; --c) {
        size_t piv = r;
        while (piv < m && mixed[piv][c] == 0) ++piv;
        if (piv == m) continue;
        std::swap(mixed[r], mixed[piv]);
        uint64_t inv = detail::invmod(mixed[r][c], P);
        for (size_t i = r + 1; i < m; ++i) {
            if (mixed[i][c] == 0) continue;
            uint64_t f = detail::mulmod(mixed[i][c], inv, P);
            for (int j = c; j >= 0; --j) {
                if (mixed[r][j] == 0) continue;
                uint64_t sub = detail::mulmod(f, mixed[r][j], P);
                mixed[i][j] = (mixed[i][j] + P - sub) % P;
            }
        }
        ++rank;
        ++r;
    }
    return rank;
}

}  // namespace ktg
