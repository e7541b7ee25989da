#pragma once

#include "ktg/rational.hpp"
#include "ktg/skeleton.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace ktg {

struct Endpoint {
    EdgeId edge = 0;
    int pos = 0;
    auto operator<=>(const Endpoint&) const = default;
};

struct Chord {
    Endpoint a, b;
    void normalize() {
        if (b < a) std::swap(a, b);
    }
    auto operator<=>(const Chord&) const = default;
};

inline bool same_skeleton(const SkeletonPtr& a, const SkeletonPtr& b) {
    return a == b || (a && b && *a == *b);
}

// A chord diagram: a perfect matching of slots on the skeleton's edges. Slots
// on an edge are numbered 0..k-1 from tail to head; slots on a circle are a
// rotation class, and the stored form is the lexicographic minimum over
// rotations.
class ChordDiagram {
public:
    ChordDiagram() = default;
    ChordDiagram(SkeletonPtr skel, std::vector<Chord> chords)
        : skel_(std::move(skel)), chords_(std::move(chords)) {
        for (auto& c : chords_) c.normalize();
        std::sort(chords_.begin(), chords_.end());
        rebuild_counts();
        validate();
        canonicalize();
    }

    const SkeletonPtr& skeleton() const { return skel_; }
    const std::vector<Chord>& chords() const { return chords_; }
    const std::map<EdgeId, int>& counts() const { return counts_; }
    int degree() const { return static_cast<int>(chords_.size()); }
    int count_on(EdgeId e) const {
        auto it = counts_.find(e);
        return it == counts_.end() ? 0 : it->second;
    }

    // Ordered endpoints on one edge (positions 0..k-1 -> chord index, side).
    std::vector<Endpoint> endpoints_on(EdgeId e) const {
        std::vector<Endpoint> out;
        for (auto& c : chords_) {
            if (c.a.edge == e) out.push_back(c.a);
            if (c.b.edge == e) out.push_back(c.b);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    bool operator==(const ChordDiagram& o) const { return chords_ == o.chords_; }
    bool operator<(const ChordDiagram& o) const {
        if (degree() != o.degree()) return degree() < o.degree();
        return chords_ < o.chords_;
    }

    std::string str() const {
        if (chords_.empty()) return "empty";
        std::ostringstream os;
        bool first = true;
        for (auto& c : chords_) {
            if (!first) os << " ";
            first = false;
            os << c.a.edge << ":" << c.a.pos << "-" << c.b.edge << ":" << c.b.pos;
        }
        return os.str();
    }

private:
    void rebuild_counts() {
        counts_.clear();
        for (auto& c : chords_) {
            ++counts_[c.a.edge];
            ++counts_[c.b.edge];
        }
    }

    void validate() const {
        if (!skel_) throw std::invalid_argument("diagram without skeleton");
        std::set<Endpoint> seen;
        for (auto& c : chords_) {
            for (auto& p : {c.a, c.b}) {
                if (!skel_->has_edge(p.edge) && !skel_->is_circle(p.edge))
                    throw std::invalid_argument("chord endpoint on unknown edge " +
                                                std::to_string(p.edge));
                if (p.pos < 0 || p.pos >= counts_.at(p.edge))
                    throw std::invalid_argument("slot positions not contiguous on edge " +
                                                std::to_string(p.edge));
                if (!seen.insert(p).second)
                    throw std::invalid_argument("two chords share a slot");
            }
        }
    }

    void canonicalize() {
        if (!skel_ || skel_->circles().empty()) return;
        std::vector<std::pair<EdgeId, int>> turning;  // circles with slots
        for (auto& [cid, rev] : skel_->circles()) {
            auto it = counts_.find(cid);
            if (it != counts_.end() && it->second > 1) turning.emplace_back(cid, it->second);
        }
        if (turning.empty()) {
            // a single slot on a circle is rotation-equivalent to position 0
            for (auto& c : chords_) {
                for (auto* p : {&c.a, &c.b})
                    if (skel_->is_circle(p->edge)) p->pos = 0;
            }
            std::sort(chords_.begin(), chords_.end());
            return;
        }
        // also normalize single-slot circles not in `turning`
        std::vector<Chord> best;
        std::vector<int> rot(turning.size(), 0);
        bool first = true;
        while (true) {
            std::vector<Chord> cand = chords_;
            for (auto& c : cand) {
                for (auto* p : {&c.a, &c.b}) {
                    if (!skel_->is_circle(p->edge)) continue;
                    int k = counts_.at(p->edge);
                    if (k == 1) { p->pos = 0; continue; }
                    for (size_t i = 0; i < turning.size(); ++i)
                        if (turning[i].first == p->edge)
                            p->pos = (p->pos + rot[i]) % turning[i].second;
                }
                c.normalize();
            }
            std::sort(cand.begin(), cand.end());
            if (first || cand < best) { best = cand; first = false; }
            // next rotation vector
            size_t i = 0;
            while (i < rot.size()) {
                if (++rot[i] < turning[i].second) break;
                rot[i] = 0;
                ++i;
            }
            if (i == rot.size()) break;
        }
        chords_ = best;
    }

    SkeletonPtr skel_;
    std::vector<Chord> chords_;
    std::map<EdgeId, int> counts_;
};

inline ChordDiagram empty_diagram(SkeletonPtr s) { return ChordDiagram(std::move(s), {}); }

// All canonical chord diagrams of the given degree, each exactly once, in a
// deterministic (sorted) order.
inline std::vector<ChordDiagram> enumerate_diagrams(const SkeletonPtr& s, int n) {
    if (n < 0) throw std::invalid_argument("negative degree");
    std::vector<EdgeId> edges = s->slot_edges();
    std::set<ChordDiagram> out;
    if (n == 0) {
        out.insert(empty_diagram(s));
        return {out.begin(), out.end()};
    }
    if (edges.empty()) return {};

    int total = 2 * n;
    std::vector<int> dist(edges.size(), 0);

    std::function<void(size_t, int)> place = [&](size_t i, int left) {
        if (i + 1 == edges.size()) {
            dist[i] = left;
            // build slot list and enumerate matchings
            std::vector<Endpoint> slots;
            for (size_t j = 0; j < edges.size(); ++j)
                for (int p = 0; p < dist[j]; ++p) slots.push_back({edges[j], p});
            std::vector<Chord> cur;
            std::vector<bool> used(slots.size(), false);
            std::function<void()> match = [&]() {
                size_t first = 0;
                while (first < slots.size() && used[first]) ++first;
                if (first == slots.size()) {
                    out.insert(ChordDiagram(s, cur));
                    return;
                }
                used[first] = true;
                for (size_t j = first + 1; j < slots.size(); ++j) {
                    if (used[j]) continue;
                    used[j] = true;
                    cur.push_back({slots[first], slots[j]});
                    match();
                    cur.pop_back();
                    used[j] = false;
                }
                used[first] = false;
            };
            match();
            return;
        }
        for (int k = 0; k <= left; ++k) {
            dist[i] = k;
            place(i + 1, left - k);
        }
    };
    place(0, total);
    return {out.begin(), out.end()};
}

// Finite formal sum of same-skeleton chord diagrams with exact coefficients.
// K is the coefficient ring: Rational, or Poly for parametric families.
template <class K>
class LinComb {
public:
    LinComb() = default;
    explicit LinComb(SkeletonPtr skel) : skel_(std::move(skel)) {}
    LinComb(const ChordDiagram& d, K coeff = K(1)) : skel_(d.skeleton()) {
        add_term(d, std::move(coeff));
    }

    const SkeletonPtr& skeleton() const { return skel_; }
    const std::map<ChordDiagram, K>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t support_size() const { return terms_.size(); }

    void add_term(const ChordDiagram& d, const K& coeff) {
        if (coeff == K(0)) return;
        if (!skel_) skel_ = d.skeleton();
        else if (!same_skeleton(skel_, d.skeleton()))
            throw std::invalid_argument("mixing diagrams from different skeletons");
        accumulate(d, coeff);
    }

    LinComb& operator+=(const LinComb& o) {
        if (o.is_zero()) return *this;
        if (!skel_) skel_ = o.skel_;
        else if (!same_skeleton(skel_, o.skel_))
            throw std::invalid_argument("mixing combinations from different skeletons");
        for (auto& [d, c] : o.terms_) accumulate(d, c);
        return *this;
    }
    LinComb& operator-=(const LinComb& o) {
        if (o.is_zero()) return *this;
        if (!skel_) skel_ = o.skel_;
        else if (!same_skeleton(skel_, o.skel_))
            throw std::invalid_argument("mixing combinations from different skeletons");
        for (auto& [d, c] : o.terms_) accumulate(d, K(0) - c);
        return *this;
    }
    friend LinComb operator+(LinComb a, const LinComb& b) { a += b; return a; }
    friend LinComb operator-(LinComb a, const LinComb& b) { a -= b; return a; }
    friend LinComb operator*(const K& c, LinComb v) {
        if (c == K(0)) return LinComb(v.skel_);
        for (auto& [d, k] : v.terms_) k = c * k;
        std::erase_if(v.terms_, [](const auto& t) { return t.second == K(0); });
        return v;
    }
    friend LinComb operator-(const LinComb& a) { return K(-1) * a; }

    bool operator==(const LinComb& o) const { return terms_ == o.terms_; }
    bool operator<(const LinComb& o) const { return terms_ < o.terms_; }

    // Projection to the homogeneous part of the given degree.
    LinComb degree_part(int n) const {
        LinComb out(skel_);
        for (auto& [d, c] : terms_)
            if (d.degree() == n) out.accumulate(d, c);
        return out;
    }

    bool is_homogeneous() const {
        int deg = -1;
        for (auto& [d, c] : terms_) {
            if (deg == -1) deg = d.degree();
            else if (d.degree() != deg) return false;
        }
        return true;
    }

    int max_degree() const {
        int deg = 0;
        for (auto& [d, c] : terms_) deg = std::max(deg, d.degree());
        return deg;
    }

    void accumulate(const ChordDiagram& d, const K& c) {
        if (c == K(0)) return;
        auto [it, fresh] = terms_.emplace(d, c);
        if (!fresh) {
            it->second += c;
            if (it->second == K(0)) terms_.erase(it);
        }
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [d, c] : terms_) {
            if (!first) os << "  +  ";
            first = false;
            os << "(" << coeff_str(c) << ") " << d.str();
        }
        return os.str();
    }

private:
    static std::string coeff_str(const Rational& c) { return to_string(c); }
    template <class P>
    static std::string coeff_str(const P& p) { return p.str(); }

    SkeletonPtr skel_;
    std::map<ChordDiagram, K> terms_;
};

using RatComb = LinComb<Rational>;

}  // namespace ktg
