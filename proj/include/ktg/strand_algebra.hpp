#pragma once

#include "ktg/poly.hpp"
#include "ktg/relations.hpp"

#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace ktg {

// Raw stacking of two diagrams on the same strand skeleton: b on top of a
// (products read bottom to top).
template <class K>
LinComb<K> stack(const LinComb<K>& a, const LinComb<K>& b) {
    if (a.is_zero() || b.is_zero())
        return LinComb<K>(a.is_zero() ? b.skeleton() : a.skeleton());
    if (!same_skeleton(a.skeleton(), b.skeleton()))
        throw std::invalid_argument("stacking over different skeletons");
    LinComb<K> out(a.skeleton());
    for (auto& [da, ca] : a.terms()) {
        for (auto& [db, cb] : b.terms()) {
            std::vector<Chord> chords = da.chords();
            for (auto c : db.chords()) {
                c.a.pos += da.count_on(c.a.edge);
                c.b.pos += da.count_on(c.b.edge);
                chords.push_back(c);
            }
            out.accumulate(ChordDiagram(a.skeleton(), chords), ca * cb);
        }
    }
    return out;
}

// Single chord between strands i and j (i == j allowed: a self-chord with the
// i endpoint below the j endpoint).
inline RatComb t(int i, int j, int n) {
    auto s = strands_skeleton(n);
    if (i < 1 || j < 1 || i > n || j > n) throw std::invalid_argument("strand index out of range");
    std::vector<Chord> cs;
    if (i == j) cs.push_back({{i, 0}, {i, 1}});
    else cs.push_back({{i, 0}, {j, 0}});
    return RatComb(ChordDiagram(s, cs));
}

// Graded element of the strand algebra, truncated at a fixed degree, each
// homogeneous part kept in reduced normal form.
template <class K>
class Series {
public:
    Series() = default;
    Series(int strands, int maxdeg) : n_(strands), maxdeg_(maxdeg), skel_(strands_skeleton(strands)) {}

    static Series one(int strands, int maxdeg) {
        Series s(strands, maxdeg);
        s.parts_[0] = LinComb<K>(empty_diagram(s.skel_), K(1));
        return s;
    }

    int strands() const { return n_; }
    int maxdeg() const { return maxdeg_; }
    const SkeletonPtr& skeleton() const { return skel_; }

    LinComb<K> part(int d) const {
        auto it = parts_.find(d);
        return it == parts_.end() ? LinComb<K>(skel_) : it->second;
    }
    const std::map<int, LinComb<K>>& parts() const { return parts_; }

    void set_part(int d, const LinComb<K>& v) {
        if (d < 0 || d > maxdeg_) throw std::invalid_argument("degree out of truncation range");
        auto red = v.is_zero() ? v : quotient_basis(skel_, d)->reduce(v);
        if (red.is_zero()) parts_.erase(d);
        else parts_[d] = red;
    }

    bool is_zero() const { return parts_.empty(); }

    K degree0() const {
        auto it = parts_.find(0);
        if (it == parts_.end()) return K(0);
        return it->second.terms().begin()->second;
    }

    Series& operator+=(const Series& o) {
        check_compatible(o);
        for (auto& [d, p] : o.parts_) {
            LinComb<K> sum = part(d) + p;
            if (sum.is_zero()) parts_.erase(d);
            else parts_[d] = sum;
        }
        return *this;
    }
    Series& operator-=(const Series& o) {
        check_compatible(o);
        for (auto& [d, p] : o.parts_) {
            LinComb<K> sum = part(d) - p;
            if (sum.is_zero()) parts_.erase(d);
            else parts_[d] = sum;
        }
        return *this;
    }
    friend Series operator+(Series a, const Series& b) { a += b; return a; }
    friend Series operator-(Series a, const Series& b) { a -= b; return a; }
    friend Series operator*(const K& c, Series s) {
        for (auto it = s.parts_.begin(); it != s.parts_.end();) {
            it->second = c * it->second;
            if (it->second.is_zero()) it = s.parts_.erase(it);
            else ++it;
        }
        return s;
    }

    bool operator==(const Series& o) const {
        return n_ == o.n_ && maxdeg_ == o.maxdeg_ && parts_ == o.parts_;
    }

    std::string str() const {
        std::ostringstream os;
        os << "strands " << n_ << " maxdeg " << maxdeg_ << "\n";
        for (auto& [d, p] : parts_) os << "degree " << d << ": " << p.str() << "\n";
        if (parts_.empty()) os << "0\n";
        return os.str();
    }

private:
    void check_compatible(const Series& o) const {
        if (n_ != o.n_ || maxdeg_ != o.maxdeg_)
            throw std::invalid_argument("series strand count or truncation mismatch");
    }

    int n_ = 0;
    int maxdeg_ = 0;
    SkeletonPtr skel_;
    std::map<int, LinComb<K>> parts_;

    template <class K2>
    friend Series<K2> product(const Series<K2>&, const Series<K2>&);
};

// Stacking product, graded and truncated.
template <class K>
Series<K> product(const Series<K>& a, const Series<K>& b) {
    if (a.strands() != b.strands() || a.maxdeg() != b.maxdeg())
        throw std::invalid_argument("series strand count or truncation mismatch");
    Series<K> out(a.strands(), a.maxdeg());
    for (auto& [da, pa] : a.parts()) {
        for (auto& [db, pb] : b.parts()) {
            if (da + db > a.maxdeg()) continue;
            LinComb<K> prod = stack(pa, pb);
            if (prod.is_zero()) continue;
            out.set_part(da + db, out.part(da + db) + prod);
        }
    }
    return out;
}

template <class K>
Series<K> product(const std::vector<Series<K>>& factors) {
    if (factors.empty()) throw std::invalid_argument("empty product");
    Series<K> acc = factors[0];
    for (size_t i = 1; i < factors.size(); ++i) acc = product(acc, factors[i]);
    return acc;
}

// Inverse of a unit coefficient: rationals divide directly; polynomial
// coefficients must be nonzero rational constants.
inline Rational invert_unit(const Rational& c) {
    if (c == 0) throw std::invalid_argument("zero is not invertible");
    return Rational(1) / c;
}
inline Poly invert_unit(const Poly& p) {
    Rational c = p.constant_value();
    if (c == 0) throw std::invalid_argument("degree-0 part is not an invertible constant");
    return Poly(Rational(1) / c);
}

// Multiplicative inverse through the truncation degree; needs an invertible
// degree-0 part.
template <class K>
Series<K> inverse(const Series<K>& a) {
    K c0 = a.degree0();
    K inv0 = invert_unit(c0);
    Series<K> out(a.strands(), a.maxdeg());
    out.set_part(0, LinComb<K>(empty_diagram(a.skeleton()), inv0));
    for (int k = 1; k <= a.maxdeg(); ++k) {
        LinComb<K> acc(a.skeleton());
        for (int j = 1; j <= k; ++j) acc += stack(a.part(j), out.part(k - j));
        LinComb<K> bk = (K(0) - inv0) * acc;
        out.set_part(k, bk);
    }
    return out;
}

// exp of a homogeneous element of positive degree.
template <class K>
Series<K> exp_series(const LinComb<K>& c, int deg, int maxdeg) {
    if (deg < 1) throw std::invalid_argument("exp needs positive degree");
    int strands = 0;
    for (auto& [id, e] : c.skeleton()->edges()) strands = std::max(strands, id);
    Series<K> out = Series<K>::one(strands, maxdeg);
    LinComb<K> power = c;
    Rational fact(1);
    for (int m = 1; m * deg <= maxdeg; ++m) {
        fact *= m;
        out.set_part(m * deg, out.part(m * deg) + (K(Rational(1) / fact)) * power);
        if ((m + 1) * deg <= maxdeg) power = stack(power, c);
    }
    return out;
}

inline Series<Rational> r_matrix(int maxdeg) {
    return exp_series(Rational(1, 2) * t(1, 2, 2), 1, maxdeg);
}

// ---------------------------------------------------------------------------
// Free group maps and pullbacks.

struct Letter {
    int gen = 0;    // 1-based generator index
    int sign = 1;   // +1 or -1
    auto operator<=>(const Letter&) const = default;
};

// A map between free groups F_m -> F_n: m words over x_1..x_n.
struct FreeGroupMap {
    int source_rank = 0;  // m
    int target_rank = 0;  // n
    std::vector<std::vector<Letter>> words;  // size m

    static FreeGroupMap identity(int n) {
        FreeGroupMap b;
        b.source_rank = b.target_rank = n;
        for (int i = 1; i <= n; ++i) b.words.push_back({{i, 1}});
        return b;
    }

    void validate() const {
        if ((int)words.size() != source_rank)
            throw std::invalid_argument("word count does not match source rank");
        for (auto& w : words)
            for (auto& l : w)
                if (l.gen < 1 || l.gen > target_rank || (l.sign != 1 && l.sign != -1))
                    throw std::invalid_argument("letter references invalid generator");
    }

    FreeGroupMap free_reduced() const {
        FreeGroupMap out = *this;
        for (auto& w : out.words) {
            std::vector<Letter> stack;
            for (auto& l : w) {
                if (!stack.empty() && stack.back().gen == l.gen && stack.back().sign == -l.sign)
                    stack.pop_back();
                else
                    stack.push_back(l);
            }
            w = stack;
        }
        return out;
    }

    bool is_identity() const {
        if (source_rank != target_rank) return false;
        auto r = free_reduced();
        for (int i = 0; i < source_rank; ++i)
            if (r.words[i] != std::vector<Letter>{{i + 1, 1}}) return false;
        return true;
    }

    // Word format: letters "x3" and "x3'" (inverse), whitespace separated; "e"
    // denotes the empty word. One word per line.
    static FreeGroupMap parse(const std::string& text, int target_rank) {
        FreeGroupMap b;
        b.target_rank = target_rank;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::string tok;
            std::vector<Letter> w;
            bool any = false;
            while (ls >> tok) {
                any = true;
                if (tok == "e") continue;
                if (tok.size() < 2 || tok[0] != 'x')
                    throw std::invalid_argument("bad letter '" + tok + "'");
                int sign = 1;
                std::string digits = tok.substr(1);
                if (!digits.empty() && digits.back() == '\'') {
                    sign = -1;
                    digits.pop_back();
                }
                w.push_back({std::stoi(digits), sign});
            }
            if (any) b.words.push_back(w);
        }
        b.source_rank = (int)b.words.size();
        b.validate();
        return b;
    }

    std::string str() const {
        std::ostringstream os;
        for (auto& w : words) {
            if (w.empty()) os << "e";
            for (size_t i = 0; i < w.size(); ++i) {
                if (i) os << " ";
                os << "x" << w[i].gen;
                if (w[i].sign < 0) os << "'";
            }
            os << "\n";
        }
        return os.str();
    }
};

// after.compose_after(first): apply `first`, then map its letters through
// `after`; the result is a map F_{first.source} -> F_{after.target} ... note
// composition order: this returns after ∘ first in the usual function sense
// when first: F_m -> F_n and after: F_n -> F_p.
inline FreeGroupMap compose(const FreeGroupMap& after, const FreeGroupMap& first) {
    if (first.target_rank != after.source_rank)
        throw std::invalid_argument("compose: rank mismatch");
    FreeGroupMap out;
    out.source_rank = first.source_rank;
    out.target_rank = after.target_rank;
    for (auto& w : first.words) {
        std::vector<Letter> nw;
        for (auto& l : w) {
            const auto& sub = after.words[l.gen - 1];
            if (l.sign > 0) {
                nw.insert(nw.end(), sub.begin(), sub.end());
            } else {
                for (auto it = sub.rbegin(); it != sub.rend(); ++it)
                    nw.push_back({it->gen, -it->sign});
            }
        }
        out.words.push_back(nw);
    }
    return out;
}

// Pullback along a free group map: each result strand i is partitioned into
// intervals, one per letter of words[i] read bottom to top; an interval with
// letter x_j^e covers target strand j, order-preserving for e=+1 and
// order-reversing for e=-1. Every chord endpoint lifts independently to every
// interval covering its strand; the sign of a lift is (-1)^(number of
// endpoints in reversed intervals); a strand covered by no interval kills
// diagrams ending on it. Result is NOT reduced.
template <class K>
LinComb<K> pullback_raw(const FreeGroupMap& beta, const LinComb<K>& v) {
    beta.validate();
    auto target = strands_skeleton(beta.target_rank);
    auto source = strands_skeleton(beta.source_rank);
    if (!v.is_zero() && !same_skeleton(v.skeleton(), target))
        throw std::invalid_argument("pullback: element is not on the map's target strands");
    // occurrences[j] = list of (result strand i, letter index t, sign)
    std::vector<std::vector<std::tuple<int, int, int>>> occ(beta.target_rank + 1);
    for (int i = 0; i < beta.source_rank; ++i)
        for (int tdx = 0; tdx < (int)beta.words[i].size(); ++tdx)
            occ[beta.words[i][tdx].gen].emplace_back(i + 1, tdx, beta.words[i][tdx].sign);

    LinComb<K> out(source);
    for (auto& [diag, coeff] : v.terms()) {
        // endpoints, indexed
        struct Pt { int strand, pos, chord, side; };
        std::vector<Pt> pts;
        const auto& chords = diag.chords();
        for (int ci = 0; ci < (int)chords.size(); ++ci) {
            pts.push_back({chords[ci].a.edge, chords[ci].a.pos, ci, 0});
            pts.push_back({chords[ci].b.edge, chords[ci].b.pos, ci, 1});
        }
        bool killed = false;
        for (auto& p : pts)
            if (occ[p.strand].empty()) { killed = true; break; }
        if (killed) continue;

        std::vector<int> choice(pts.size(), 0);
        while (true) {
            // build one lift
            int neg = 0;
            // per (strand, letter): endpoints assigned there
            std::map<std::pair<int, int>, std::vector<int>> groups;
            for (size_t k = 0; k < pts.size(); ++k) {
                auto [i, tdx, sign] = occ[pts[k].strand][choice[k]];
                groups[{i, tdx}].push_back((int)k);
                if (sign < 0) ++neg;
            }
            // positions: intervals bottom-to-top per result strand
            std::map<int, Endpoint> where;  // pt index -> endpoint
            for (int i = 1; i <= beta.source_rank; ++i) {
                int next_pos = 0;
                for (int tdx = 0; tdx < (int)beta.words[i - 1].size(); ++tdx) {
                    auto it = groups.find({i, tdx});
                    if (it == groups.end()) continue;
                    auto idxs = it->second;
                    std::sort(idxs.begin(), idxs.end(), [&](int a, int b) {
                        return pts[a].pos < pts[b].pos;
                    });
                    if (beta.words[i - 1][tdx].sign < 0) std::reverse(idxs.begin(), idxs.end());
                    for (int k : idxs) where[k] = {i, next_pos++};
                }
            }
            std::vector<Chord> nc(chords.size());
            for (size_t k = 0; k < pts.size(); ++k) {
                if (pts[k].side == 0) nc[pts[k].chord].a = where.at((int)k);
                else nc[pts[k].chord].b = where.at((int)k);
            }
            K sign = (neg % 2) ? K(-1) : K(1);
            out.accumulate(ChordDiagram(source, nc), sign * coeff);
            // advance multi-index
            size_t k = 0;
            while (k < pts.size()) {
                if (++choice[k] < (int)occ[pts[k].strand].size()) break;
                choice[k] = 0;
                ++k;
            }
            if (k == pts.size()) break;
        }
    }
    return out;
}

template <class K>
Series<K> pullback(const FreeGroupMap& beta, const Series<K>& a) {
    if (a.strands() != beta.target_rank)
        throw std::invalid_argument("pullback: strand count mismatch");
    Series<K> out(beta.source_rank, a.maxdeg());
    for (auto& [d, p] : a.parts()) out.set_part(d, pullback_raw(beta, p));
    return out;
}

// Words realizing the standard maps.
inline FreeGroupMap doubling_word(int i, int n) {
    if (i < 0 || i > n + 1) throw std::invalid_argument("doubling index out of range");
    FreeGroupMap b;
    b.source_rank = n + 1;
    b.target_rank = n;
    for (int s = 1; s <= n + 1; ++s) {
        if (i == 0) {
            if (s == 1) b.words.push_back({});
            else b.words.push_back({{s - 1, 1}});
        } else if (i == n + 1) {
            if (s == n + 1) b.words.push_back({});
            else b.words.push_back({{s, 1}});
        } else {
            if (s <= i) b.words.push_back({{s, 1}});
            else b.words.push_back({{s - 1, 1}});
        }
    }
    return b;
}

inline FreeGroupMap deletion_word(int i, int n) {
    if (i < 1 || i > n) throw std::invalid_argument("deletion index out of range");
    FreeGroupMap b;
    b.source_rank = n - 1;
    b.target_rank = n;
    for (int s = 1; s <= n - 1; ++s) b.words.push_back({{s < i ? s : s + 1, 1}});
    return b;
}

// Word list (x_{w1}, ..., x_{wn}): result strand i covers target strand w[i-1].
inline FreeGroupMap permutation_word(const std::vector<int>& w) {
    FreeGroupMap b;
    b.source_rank = b.target_rank = (int)w.size();
    for (int x : w) b.words.push_back({{x, 1}});
    b.validate();
    return b;
}

// The pullback word realizing permute(sigma, .): since permute sends strand i
// of the original to position sigma(i) of the result, result strand j pulls
// its chords from strand sigma^{-1}(j).
inline FreeGroupMap permutation_pullback_word(const std::vector<int>& sigma) {
    int n = (int)sigma.size();
    std::vector<int> inv(n);
    for (int i = 1; i <= n; ++i) inv[sigma[i - 1] - 1] = i;
    return permutation_word(inv);
}

inline FreeGroupMap switch_all_word(int n) {
    FreeGroupMap b;
    b.source_rank = b.target_rank = n;
    for (int s = 1; s <= n; ++s) b.words.push_back({{s, -1}});
    return b;
}

// Direct implementations (contract: equal to the pullback realizations).

// Doubling (unzip) of strand i; i=0 adds an empty strand on the left, i=n+1 on
// the right.
template <class K>
Series<K> delta(int i, const Series<K>& a) {
    int n = a.strands();
    if (i < 0 || i > n + 1) throw std::invalid_argument("doubling index out of range");
    Series<K> out(n + 1, a.maxdeg());
    auto src = strands_skeleton(n + 1);
    for (auto& [deg, part] : a.parts()) {
        LinComb<K> acc(src);
        for (auto& [diag, c] : part.terms()) {
            // endpoints on strand i split over {i, i+1}
            std::vector<Endpoint> on_i;
            if (i >= 1 && i <= n) on_i = diag.endpoints_on(i);
            int k = (int)on_i.size();
            for (int mask = 0; mask < (1 << k); ++mask) {
                std::map<Endpoint, Endpoint> move;
                int lo = 0, hi = 0;
                for (int b = 0; b < k; ++b) {
                    if (mask & (1 << b)) move[on_i[b]] = {i + 1, hi++};
                    else move[on_i[b]] = {i, lo++};
                }
                std::vector<Chord> nc;
                for (auto ch : diag.chords()) {
                    for (auto* p : {&ch.a, &ch.b}) {
                        if (i >= 1 && i <= n && p->edge == i) *p = move.at(*p);
                        else if (p->edge > i || (i == 0)) p->edge += 1;
                        // strands below i keep their index; note i=0 shifts all
                    }
                    nc.push_back(ch);
                }
                acc.accumulate(ChordDiagram(src, nc), c);
            }
        }
        out.set_part(deg, acc);
    }
    return out;
}

// Deletion of strand i.
template <class K>
Series<K> d_strand(int i, const Series<K>& a) {
    int n = a.strands();
    if (i < 1 || i > n) throw std::invalid_argument("deletion index out of range");
    Series<K> out(n - 1, a.maxdeg());
    auto src = strands_skeleton(n - 1);
    for (auto& [deg, part] : a.parts()) {
        LinComb<K> acc(src);
        for (auto& [diag, c] : part.terms()) {
            if (diag.count_on(i) > 0) continue;
            std::vector<Chord> nc;
            for (auto ch : diag.chords()) {
                for (auto* p : {&ch.a, &ch.b})
                    if (p->edge > i) p->edge -= 1;
                nc.push_back(ch);
            }
            acc.accumulate(ChordDiagram(src, nc), c);
        }
        out.set_part(deg, acc);
    }
    return out;
}

// Strand permutation: sigma sends strand position i of the original to
// position sigma[i-1] of the result (the superscript action; the degree-2
// solver pins this reading against the displayed solution family).
template <class K>
Series<K> permute(const std::vector<int>& sigma, const Series<K>& a) {
    int n = a.strands();
    if ((int)sigma.size() != n) throw std::invalid_argument("permutation size mismatch");
    std::vector<bool> hit(n + 1, false);
    for (int i = 1; i <= n; ++i) {
        if (sigma[i - 1] < 1 || sigma[i - 1] > n || hit[sigma[i - 1]])
            throw std::invalid_argument("not a permutation");
        hit[sigma[i - 1]] = true;
    }
    Series<K> out(n, a.maxdeg());
    for (auto& [deg, part] : a.parts()) {
        LinComb<K> acc(a.skeleton());
        for (auto& [diag, c] : part.terms()) {
            std::vector<Chord> nc;
            for (auto ch : diag.chords()) {
                for (auto* p : {&ch.a, &ch.b}) p->edge = sigma[p->edge - 1];
                nc.push_back(ch);
            }
            acc.accumulate(ChordDiagram(a.skeleton(), nc), c);
        }
        out.set_part(deg, acc);
    }
    return out;
}

template <class K>
Series<K> superscript(const Series<K>& a, const std::string& digits) {
    std::vector<int> w;
    for (char c : digits) w.push_back(c - '0');
    return permute(w, a);
}

// All strand orientations switched: every strand's slot order mirrored; the
// sign (-1)^(2 * degree) is +1.
template <class K>
Series<K> switch_all(const Series<K>& a) {
    int n = a.strands();
    Series<K> out(n, a.maxdeg());
    for (auto& [deg, part] : a.parts()) {
        LinComb<K> acc(a.skeleton());
        for (auto& [diag, c] : part.terms()) {
            std::vector<Chord> nc;
            for (auto ch : diag.chords()) {
                for (auto* p : {&ch.a, &ch.b}) p->pos = diag.count_on(p->edge) - 1 - p->pos;
                nc.push_back(ch);
            }
            acc.accumulate(ChordDiagram(a.skeleton(), nc), c);
        }
        out.set_part(deg, acc);
    }
    return out;
}

// Conversions between coefficient rings.
inline LinComb<Poly> to_poly(const RatComb& v) {
    LinComb<Poly> out(v.skeleton());
    for (auto& [d, c] : v.terms()) out.accumulate(d, Poly(c));
    return out;
}

inline Series<Poly> to_poly(const Series<Rational>& s) {
    Series<Poly> out(s.strands(), s.maxdeg());
    for (auto& [d, p] : s.parts()) out.set_part(d, to_poly(p));
    return out;
}

}  // namespace ktg
