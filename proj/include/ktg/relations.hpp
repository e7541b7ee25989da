#pragma once

#include "ktg/diagram.hpp"
#include "ktg/linalg.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>

namespace ktg {

// Bumped whenever the relation generation conventions change; part of every
// cache key so stale bases can never be read back.
inline constexpr int relation_generator_version = 1;

namespace detail {

// Mutable slot layout used while generating relations: per-edge lists of
// labels plus a chord matching on labels.
struct Slotting {
    std::map<EdgeId, std::vector<int>> lists;
    std::vector<std::pair<int, int>> chords;
    int next_label = 0;

    static Slotting from(const ChordDiagram& d) {
        Slotting s;
        std::map<Endpoint, int> lab;
        for (auto& c : d.chords()) {
            for (auto& p : {c.a, c.b}) lab[p] = s.next_label++;
            s.chords.emplace_back(lab[c.a], lab[c.b]);
        }
        for (auto& [p, l] : lab) {
            auto& list = s.lists[p.edge];
            if ((int)list.size() <= p.pos) list.resize(p.pos + 1, -1);
            list[p.pos] = l;
        }
        return s;
    }

    int insert(EdgeId e, int gap) {
        int l = next_label++;
        auto& list = lists[e];
        list.insert(list.begin() + gap, l);
        return l;
    }

    std::pair<EdgeId, int> find_label(int l) const {
        for (auto& [e, list] : lists)
            for (size_t i = 0; i < list.size(); ++i)
                if (list[i] == l) return {e, (int)i};
        throw std::logic_error("label not found");
    }

    ChordDiagram materialize(const SkeletonPtr& skel) const {
        std::map<int, Endpoint> pos;
        for (auto& [e, list] : lists)
            for (size_t i = 0; i < list.size(); ++i) pos[list[i]] = {e, (int)i};
        std::vector<Chord> cs;
        for (auto& [a, b] : chords) cs.push_back({pos.at(a), pos.at(b)});
        return ChordDiagram(skel, cs);
    }

    // all insertion gaps, deterministic order
    std::vector<std::pair<EdgeId, int>> gaps(const std::vector<EdgeId>& edges) const {
        std::vector<std::pair<EdgeId, int>> out;
        for (auto e : edges) {
            auto it = lists.find(e);
            int k = it == lists.end() ? 0 : (int)it->second.size();
            for (int g = 0; g <= k; ++g) out.emplace_back(e, g);
        }
        return out;
    }
};

inline RatComb normalized_relation(const RatComb& v) {
    if (v.is_zero()) return v;
    Rational lead = v.terms().begin()->second;
    return (Rational(1) / lead) * v;
}

}  // namespace detail

// All 4T relation vectors of degree n: a fixed chord with endpoints F1, F2, a
// moving chord with one endpoint fixed, the other inserted immediately before
// and after F1 and F2 in edge-orientation order. The emitted combination is
// (before F1) - (after F1) + (before F2) - (after F2).
inline std::vector<RatComb> four_t_relations(const SkeletonPtr& s, int n) {
    std::vector<RatComb> out;
    if (n < 2) return out;
    std::vector<EdgeId> edges = s->slot_edges();
    std::set<RatComb> seen;
    for (const auto& spec : enumerate_diagrams(s, n - 2)) {
        auto base = detail::Slotting::from(spec);
        for (auto [e1, g1] : base.gaps(edges)) {
            auto s1 = base;
            int f1 = s1.insert(e1, g1);
            for (auto [e2, g2] : s1.gaps(edges)) {
                auto s2 = s1;
                int f2 = s2.insert(e2, g2);
                s2.chords.emplace_back(f1, f2);
                for (auto [e3, g3] : s2.gaps(edges)) {
                    auto s3 = s2;
                    int mfix = s3.insert(e3, g3);
                    RatComb rel(s);
                    auto add = [&](bool before, int f, Rational sign) {
                        auto s4 = s3;
                        auto [fe, fi] = s4.find_label(f);
                        int slider = s4.insert(fe, before ? fi : fi + 1);
                        s4.chords.emplace_back(mfix, slider);
                        rel += sign * RatComb(s4.materialize(s));
                    };
                    add(true, f1, Rational(1));
                    add(false, f1, Rational(-1));
                    add(true, f2, Rational(1));
                    add(false, f2, Rational(-1));
                    if (rel.is_zero()) continue;
                    auto norm = detail::normalized_relation(rel);
                    if (seen.insert(norm).second) out.push_back(norm);
                }
            }
        }
    }
    return out;
}

// All VI relation vectors of degree n: at each trivalent (three-term) or
// dot/antidot (two-term) vertex, place the free endpoint of an extra chord at
// the slot nearest the vertex on each incident edge-end, with sign +1 on
// incoming ends and -1 on outgoing ends.
inline std::vector<RatComb> vi_relations(const SkeletonPtr& s, int n) {
    std::vector<RatComb> out;
    if (n < 1) return out;
    std::vector<EdgeId> edges = s->slot_edges();
    std::set<RatComb> seen;
    for (const auto& spec : enumerate_diagrams(s, n - 1)) {
        auto base = detail::Slotting::from(spec);
        for (auto [pe, pg] : base.gaps(edges)) {
            auto s1 = base;
            int partner = s1.insert(pe, pg);
            for (auto& [w, v] : s->vertices()) {
                if (v.kind == VertexKind::Boundary) continue;
                RatComb rel(s);
                for (auto h : v.halves) {
                    auto [e, is_head] = s->edge_end_of(h);
                    auto s2 = s1;
                    int k = (int)s2.lists[e].size();
                    int slider = s2.insert(e, is_head ? k : 0);
                    s2.chords.emplace_back(partner, slider);
                    Rational sign = is_head ? Rational(1) : Rational(-1);
                    rel += sign * RatComb(s2.materialize(s));
                }
                if (rel.is_zero()) continue;
                auto norm = detail::normalized_relation(rel);
                if (seen.insert(norm).second) out.push_back(norm);
            }
        }
    }
    return out;
}

// Quotient of the degree-n span by the 4T and VI relations: a chosen basis
// (the non-pivot diagrams of the deterministic echelon form) plus a table
// expressing every pivot diagram over the basis.
class QuotientBasis {
public:
    QuotientBasis(SkeletonPtr skel, int degree) : skel_(std::move(skel)), degree_(degree) {
        diagrams_ = enumerate_diagrams(skel_, degree_);
        for (size_t i = 0; i < diagrams_.size(); ++i) index_.emplace(diagrams_[i], (int)i);
        auto rels4 = four_t_relations(skel_, degree_);
        auto relsv = vi_relations(skel_, degree_);
        relation_count_ = (int)(rels4.size() + relsv.size());
        Echelon ech;
        auto feed = [&](const std::vector<RatComb>& rels) {
            for (const auto& r : rels) ech.add_row(to_sparse(r));
        };
        feed(rels4);
        feed(relsv);
        finish(ech);
    }

    // Reconstruction from cached pivot data (relations are not regenerated).
    QuotientBasis(SkeletonPtr skel, int degree, int relation_count,
                  std::map<int, std::vector<std::pair<int, Rational>>> pivots)
        : skel_(std::move(skel)), degree_(degree), relation_count_(relation_count) {
        diagrams_ = enumerate_diagrams(skel_, degree_);
        for (size_t i = 0; i < diagrams_.size(); ++i) index_.emplace(diagrams_[i], (int)i);
        pivot_over_basis_ = std::move(pivots);
        rebuild_basis();
    }

    const SkeletonPtr& skeleton() const { return skel_; }
    int degree() const { return degree_; }
    const std::vector<ChordDiagram>& all_diagrams() const { return diagrams_; }
    const std::vector<ChordDiagram>& basis() const { return basis_; }
    int dim() const { return (int)basis_.size(); }
    int raw_count() const { return (int)diagrams_.size(); }
    int relation_count() const { return relation_count_; }
    int rank() const { return raw_count() - dim(); }

    int index_of(const ChordDiagram& d) const {
        auto it = index_.find(d);
        if (it == index_.end())
            throw std::invalid_argument("diagram is not a degree-" + std::to_string(degree_) +
                                        " diagram of this skeleton");
        return it->second;
    }

    bool is_basis_diagram(const ChordDiagram& d) const {
        return !pivot_over_basis_.count(index_of(d));
    }

    template <class K>
    LinComb<K> reduce(const LinComb<K>& v) const {
        if (!v.is_zero() && !same_skeleton(v.skeleton(), skel_))
            throw std::invalid_argument("reduce: skeleton mismatch");
        LinComb<K> out(skel_);
        for (auto& [d, c] : v.terms()) {
            if (d.degree() != degree_)
                throw std::invalid_argument("reduce: degree mismatch");
            auto it = pivot_over_basis_.find(index_of(d));
            if (it == pivot_over_basis_.end()) {
                out.accumulate(d, c);
            } else {
                for (auto& [bi, r] : it->second) out.accumulate(basis_[bi], r * c);
            }
        }
        return out;
    }

    const std::map<int, std::vector<std::pair<int, Rational>>>& pivot_table() const {
        return pivot_over_basis_;
    }

private:
    SparseVec to_sparse(const RatComb& r) const {
        SparseVec v;
        for (auto& [d, c] : r.terms()) v.terms.emplace_back(index_.at(d), c);
        std::sort(v.terms.begin(), v.terms.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        return v;
    }

    void finish(const Echelon& ech) {
        std::vector<int> basis_pos(diagrams_.size(), -1);
        int bi = 0;
        for (int col = 0; col < (int)diagrams_.size(); ++col)
            if (!ech.is_pivot(col)) basis_pos[col] = bi++;
        for (auto& [p, row] : ech.pivot_rows()) {
            std::vector<std::pair<int, Rational>> expansion;
            for (auto& [col, c] : row.terms) {
                if (col == p) continue;
                expansion.emplace_back(basis_pos[col], -c);
            }
            pivot_over_basis_.emplace(p, std::move(expansion));
        }
        rebuild_basis();
    }

    void rebuild_basis() {
        basis_.clear();
        for (int col = 0; col < (int)diagrams_.size(); ++col)
            if (!pivot_over_basis_.count(col)) basis_.push_back(diagrams_[col]);
    }

    SkeletonPtr skel_;
    int degree_;
    int relation_count_ = 0;
    std::vector<ChordDiagram> diagrams_;
    std::map<ChordDiagram, int> index_;
    std::vector<ChordDiagram> basis_;
    std::map<int, std::vector<std::pair<int, Rational>>> pivot_over_basis_;
};

// ---------------------------------------------------------------------------
// Basis registry with optional on-disk cache.

namespace detail {

inline uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct BasisRegistry {
    std::mutex mu;
    std::map<std::pair<std::string, int>, std::shared_ptr<const QuotientBasis>> mem;
    std::optional<std::filesystem::path> dir;
};

inline BasisRegistry& basis_registry() {
    static BasisRegistry r;
    return r;
}

inline std::string cache_key_text(const Skeleton& s, int degree) {
    std::ostringstream os;
    os << "version " << relation_generator_version << "\n"
       << "degree " << degree << "\n"
       << s.to_text();
    return os.str();
}

inline std::optional<QuotientBasis> load_basis(const std::filesystem::path& file,
                                               const SkeletonPtr& s, int degree) {
    std::ifstream in(file);
    if (!in) return std::nullopt;
    std::string word;
    int version, deg, nrel, npivot;
    if (!(in >> word >> version) || word != "version" || version != relation_generator_version)
        return std::nullopt;
    if (!(in >> word >> deg) || word != "degree" || deg != degree) return std::nullopt;
    if (!(in >> word >> nrel) || word != "relations") return std::nullopt;
    if (!(in >> word >> npivot) || word != "pivots") return std::nullopt;
    std::map<int, std::vector<std::pair<int, Rational>>> pivots;
    for (int i = 0; i < npivot; ++i) {
        int col, len;
        if (!(in >> word >> col >> len) || word != "pivot") return std::nullopt;
        std::vector<std::pair<int, Rational>> exp;
        for (int j = 0; j < len; ++j) {
            int bi;
            std::string rat;
            if (!(in >> bi >> rat)) return std::nullopt;
            exp.emplace_back(bi, parse_rational(rat));
        }
        pivots.emplace(col, std::move(exp));
    }
    return QuotientBasis(s, degree, nrel, std::move(pivots));
}

inline void store_basis(const std::filesystem::path& file, const QuotientBasis& q) {
    std::filesystem::create_directories(file.parent_path());
    auto tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        out << "version " << relation_generator_version << "\n";
        out << "degree " << q.degree() << "\n";
        out << "relations " << q.relation_count() << "\n";
        out << "pivots " << q.pivot_table().size() << "\n";
        for (auto& [col, exp] : q.pivot_table()) {
            out << "pivot " << col << " " << exp.size();
            for (auto& [bi, c] : exp) out << " " << bi << " " << to_string(c);
            out << "\n";
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, file, ec);
}

}  // namespace detail

inline void set_basis_cache_dir(std::optional<std::string> dir) {
    auto& reg = detail::basis_registry();
    std::lock_guard lock(reg.mu);
    if (dir) reg.dir = std::filesystem::path(*dir);
    else reg.dir.reset();
}

// Drops the in-memory basis registry (cache tests force disk round-trips).
inline void clear_basis_memory() {
    auto& reg = detail::basis_registry();
    std::lock_guard lock(reg.mu);
    reg.mem.clear();
}

inline std::string relation_version_hash() {
    std::ostringstream os;
    os << std::hex << detail::fnv1a("relation-generator-v" +
                                    std::to_string(relation_generator_version));
    return os.str();
}

// Memoized (and optionally disk-cached) quotient basis per (skeleton, degree).
inline std::shared_ptr<const QuotientBasis> quotient_basis(const SkeletonPtr& s, int degree) {
    auto& reg = detail::basis_registry();
    std::string key = detail::cache_key_text(*s, degree);
    {
        std::lock_guard lock(reg.mu);
        auto it = reg.mem.find({key, degree});
        if (it != reg.mem.end()) return it->second;
    }
    std::optional<std::filesystem::path> dir;
    {
        std::lock_guard lock(reg.mu);
        dir = reg.dir;
    }
    std::shared_ptr<const QuotientBasis> computed;
    if (dir) {
        std::ostringstream name;
        name << std::hex << detail::fnv1a(key) << ".basis";
        auto file = *dir / name.str();
        if (auto loaded = detail::load_basis(file, s, degree)) {
            computed = std::make_shared<const QuotientBasis>(std::move(*loaded));
        } else {
            computed = std::make_shared<const QuotientBasis>(s, degree);
            detail::store_basis(file, *computed);
        }
    } else {
        computed = std::make_shared<const QuotientBasis>(s, degree);
    }
    std::lock_guard lock(reg.mu);
    reg.mem.emplace(std::make_pair(key, degree), computed);
    return computed;
}

// Reduce an arbitrary (possibly inhomogeneous) combination to normal form.
template <class K>
LinComb<K> reduce(const LinComb<K>& v) {
    if (v.is_zero()) return v;
    LinComb<K> out(v.skeleton());
    for (int d = 0; d <= v.max_degree(); ++d) {
        auto part = v.degree_part(d);
        if (part.is_zero()) continue;
        out += quotient_basis(v.skeleton(), d)->reduce(part);
    }
    return out;
}

inline int dim(const SkeletonPtr& s, int n) { return quotient_basis(s, n)->dim(); }

// Independent rank of the relation matrix via randomized projection; compared
// against raw_count - dim in the consistency tests.
inline int randomized_relation_rank(const SkeletonPtr& s, int n, uint64_t seed) {
    auto q = quotient_basis(s, n);
    std::map<ChordDiagram, int> index;
    for (int i = 0; i < q->raw_count(); ++i) index.emplace(q->all_diagrams()[i], i);
    std::vector<SparseVec> rows;
    auto feed = [&](const std::vector<RatComb>& rels) {
        for (auto& r : rels) {
            SparseVec v;
            for (auto& [d, c] : r.terms()) v.terms.emplace_back(index.at(d), c);
            std::sort(v.terms.begin(), v.terms.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            rows.push_back(std::move(v));
        }
    };
    feed(four_t_relations(s, n));
    feed(vi_relations(s, n));
    return randomized_rank(rows, q->raw_count(), seed);
}

}  // namespace ktg
