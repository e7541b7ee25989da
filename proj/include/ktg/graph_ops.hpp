#pragma once

#include "ktg/strand_algebra.hpp"

#include <optional>

namespace ktg {

// Graded element of A(skeleton), truncated, each part in reduced normal form.
template <class K>
class GradedElement {
public:
    GradedElement() = default;
    GradedElement(SkeletonPtr skel, int maxdeg) : skel_(std::move(skel)), maxdeg_(maxdeg) {}

    static GradedElement one(SkeletonPtr skel, int maxdeg) {
        GradedElement g(skel, maxdeg);
        g.parts_[0] = LinComb<K>(empty_diagram(g.skel_), K(1));
        return g;
    }

    const SkeletonPtr& skeleton() const { return skel_; }
    int maxdeg() const { return maxdeg_; }
    const std::map<int, LinComb<K>>& parts() const { return parts_; }

    LinComb<K> part(int d) const {
        auto it = parts_.find(d);
        return it == parts_.end() ? LinComb<K>(skel_) : it->second;
    }

    void set_part(int d, const LinComb<K>& v) {
        if (d < 0 || d > maxdeg_) throw std::invalid_argument("degree out of truncation range");
        auto red = v.is_zero() ? v : quotient_basis(skel_, d)->reduce(v);
        if (red.is_zero()) parts_.erase(d);
        else parts_[d] = red;
    }

    // set without reducing (for raw intermediate states)
    void set_part_raw(int d, const LinComb<K>& v) {
        if (v.is_zero()) parts_.erase(d);
        else parts_[d] = v;
    }

    bool is_zero() const { return parts_.empty(); }

    GradedElement& operator+=(const GradedElement& o) {
        for (auto& [d, p] : o.parts_) {
            auto sum = part(d) + p;
            if (sum.is_zero()) parts_.erase(d);
            else parts_[d] = sum;
        }
        return *this;
    }
    friend GradedElement operator+(GradedElement a, const GradedElement& b) { a += b; return a; }
    friend GradedElement operator-(GradedElement a, const GradedElement& b) {
        for (auto& [d, p] : b.parts_) {
            auto diff = a.part(d) - p;
            if (diff.is_zero()) a.parts_.erase(d);
            else a.parts_[d] = diff;
        }
        return a;
    }
    friend GradedElement operator*(const K& c, GradedElement g) {
        for (auto it = g.parts_.begin(); it != g.parts_.end();) {
            it->second = c * it->second;
            if (it->second.is_zero()) it = g.parts_.erase(it);
            else ++it;
        }
        return g;
    }

    bool operator==(const GradedElement& o) const {
        return same_skeleton(skel_, o.skel_) && maxdeg_ == o.maxdeg_ && parts_ == o.parts_;
    }

    std::string str() const {
        std::ostringstream os;
        for (auto& [d, p] : parts_) os << "degree " << d << ": " << p.str() << "\n";
        if (parts_.empty()) os << "0\n";
        return os.str();
    }

private:
    SkeletonPtr skel_;
    int maxdeg_ = 0;
    std::map<int, LinComb<K>> parts_;
};

namespace detail {

// Re-addresses chords through fused chains: slot (piece_j, pos) lands at the
// new edge with offset = total slot count of earlier pieces.
inline std::vector<Chord> transport_chords(std::vector<Chord> chords,
                                           const std::vector<Fusion>& fusions) {
    std::map<EdgeId, int> counts;
    for (auto& c : chords) {
        ++counts[c.a.edge];
        ++counts[c.b.edge];
    }
    std::map<EdgeId, std::pair<EdgeId, int>> relocate;  // piece -> (new id, offset)
    for (auto& f : fusions) {
        int off = 0;
        for (auto p : f.pieces) {
            relocate[p] = {f.new_id, off};
            auto it = counts.find(p);
            if (it != counts.end()) off += it->second;
        }
    }
    for (auto& c : chords) {
        for (auto* p : {&c.a, &c.b}) {
            auto it = relocate.find(p->edge);
            if (it != relocate.end()) {
                p->edge = it->second.first;
                p->pos += it->second.second;
            }
        }
    }
    return chords;
}

template <class K>
GradedElement<K> map_diagrams(const GradedElement<K>& v, SkeletonPtr target,
                              const std::function<LinComb<K>(const ChordDiagram&)>& f) {
    GradedElement<K> out(target, v.maxdeg());
    for (auto& [deg, part] : v.parts()) {
        LinComb<K> acc(target);
        for (auto& [d, c] : part.terms()) acc += c * f(d);
        out.set_part(deg, acc);
    }
    return out;
}

}  // namespace detail

// Orientation switch: mirrors the slot order on e and multiplies each diagram
// by (-1)^k, k = number of endpoints on e.
template <class K>
GradedElement<K> switch_op(EdgeId e, const GradedElement<K>& v) {
    auto target = switch_edge(*v.skeleton(), e);
    return detail::map_diagrams<K>(v, target, [&](const ChordDiagram& d) {
        int k = d.count_on(e);
        std::vector<Chord> nc;
        for (auto ch : d.chords()) {
            for (auto* p : {&ch.a, &ch.b})
                if (p->edge == e) p->pos = k - 1 - p->pos;
            nc.push_back(ch);
        }
        K sign = (k % 2) ? K(-1) : K(1);
        return sign * LinComb<K>(ChordDiagram(target, nc));
    });
}

// Edge delete: diagrams with a chord ending on e die, the rest transport to
// the fused skeleton.
template <class K>
GradedElement<K> delete_op(EdgeId e, const GradedElement<K>& v) {
    auto res = delete_edge(*v.skeleton(), e);
    return detail::map_diagrams<K>(v, res.skeleton, [&](const ChordDiagram& d) {
        if (d.count_on(e) > 0) return LinComb<K>(res.skeleton);
        return LinComb<K>(
            ChordDiagram(res.skeleton, detail::transport_chords(d.chords(), res.fusions)));
    });
}

namespace detail {

template <class K>
GradedElement<K> unzip_apply(const UnzipResult& res, const GradedElement<K>& v) {
    return map_diagrams<K>(v, res.skeleton, [&](const ChordDiagram& d) {
        // slots on the path, in path order
        std::vector<Endpoint> on_path;
        for (auto pe : res.path) {
            auto eps = d.endpoints_on(pe);
            on_path.insert(on_path.end(), eps.begin(), eps.end());
        }
        int k = (int)on_path.size();
        std::map<EdgeId, size_t> seg_of;
        for (size_t j = 0; j < res.path.size(); ++j) seg_of[res.path[j]] = j;

        LinComb<K> acc(res.skeleton);
        for (int mask = 0; mask < (1 << k); ++mask) {
            std::map<Endpoint, Endpoint> move;
            std::map<EdgeId, int> fill;
            for (int b = 0; b < k; ++b) {
                size_t seg = seg_of.at(on_path[b].edge);
                EdgeId target =
                    (mask & (1 << b)) ? res.daughters_b[seg] : res.daughters_a[seg];
                move[on_path[b]] = {target, fill[target]++};
            }
            std::vector<Chord> nc;
            for (auto ch : d.chords()) {
                for (auto* p : {&ch.a, &ch.b}) {
                    auto it = move.find(*p);
                    if (it != move.end()) *p = it->second;
                }
                nc.push_back(ch);
            }
            acc.accumulate(
                ChordDiagram(res.skeleton, transport_chords(nc, res.fusions)), K(1));
        }
        return acc;
    });
}

}  // namespace detail

// Unzip: each chord ending on e is replaced by the sum over the two daughter
// edges (2^k diagrams for k endpoints), slot order inherited.
template <class K>
GradedElement<K> unzip_op(EdgeId e, const GradedElement<K>& v) {
    auto res = unzip_edge(*v.skeleton(), e);
    return detail::unzip_apply(res, v);
}

template <class K>
GradedElement<K> dotted_unzip_op(EdgeId e, const GradedElement<K>& v) {
    auto res = dotted_unzip(*v.skeleton(), e);
    return detail::unzip_apply(res, v);
}

// Cancel a dot/antidot pair: slots transport through the fused edges.
template <class K>
GradedElement<K> cancel_op(VertexId dot, VertexId antidot, const GradedElement<K>& v) {
    auto res = cancel(*v.skeleton(), dot, antidot);
    return detail::map_diagrams<K>(v, res.skeleton, [&](const ChordDiagram& d) {
        return LinComb<K>(
            ChordDiagram(res.skeleton, detail::transport_chords(d.chords(), res.fusions)));
    });
}

// Connected sum: diagrams juxtaposed; slots of the subdivided edges sit on the
// segment before the new attachment vertex (equivalent placements differ by
// relations; the descent tests check this).
template <class K>
GradedElement<K> connect_op(EdgeId e, EdgeId f, const GradedElement<K>& v1,
                            const GradedElement<K>& v2) {
    if (v1.maxdeg() != v2.maxdeg()) throw std::invalid_argument("truncation degree mismatch");
    auto res = connected_sum(*v1.skeleton(), e, *v2.skeleton(), f);
    GradedElement<K> out(res.skeleton, v1.maxdeg());
    auto move1 = [&](const ChordDiagram& d) {
        std::vector<Chord> nc;
        for (auto ch : d.chords()) {
            for (auto* p : {&ch.a, &ch.b})
                if (p->edge == e) p->edge = res.e_in;
            nc.push_back(ch);
        }
        return nc;
    };
    auto move2 = [&](const ChordDiagram& d) {
        std::vector<Chord> nc;
        for (auto ch : d.chords()) {
            for (auto* p : {&ch.a, &ch.b})
                p->edge = p->edge == f ? res.f_in : p->edge + res.edge_offset;
            nc.push_back(ch);
        }
        return nc;
    };
    for (auto& [d1, p1] : v1.parts()) {
        for (auto& [d2, p2] : v2.parts()) {
            if (d1 + d2 > out.maxdeg()) continue;
            LinComb<K> acc(res.skeleton);
            for (auto& [da, ca] : p1.terms()) {
                auto base = move1(da);
                for (auto& [db, cb] : p2.terms()) {
                    std::vector<Chord> nc = base;
                    auto add = move2(db);
                    nc.insert(nc.end(), add.begin(), add.end());
                    acc.accumulate(ChordDiagram(res.skeleton, nc), ca * cb);
                }
            }
            out.set_part(d1 + d2, out.part(d1 + d2) + acc);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// VI rewriting and sweeping.

namespace detail {

// Moves the slot nearest vertex w sitting on edge-end `from` to the other
// edge-ends at w via the vertex invariance relation; returns the equivalent
// combination. The moved slot must be extremal on its edge (position 0 at a
// tail end, k-1 at a head end).
template <class K>
LinComb<K> vi_move(const SkeletonPtr& s, VertexId w, HalfEdgeId from, const ChordDiagram& diag) {
    auto sign_of = [&](HalfEdgeId h) {
        return s->edge_end_of(h).second ? Rational(1) : Rational(-1);  // incoming: +1
    };
    auto [fe, f_is_head] = s->edge_end_of(from);
    int kf = diag.count_on(fe);
    if (kf == 0) throw std::logic_error("vi_move: no slot on edge");
    Endpoint slot{fe, f_is_head ? kf - 1 : 0};

    Rational eps_from = sign_of(from);
    LinComb<K> out(s);
    for (auto h : s->vertex(w).halves) {
        if (h == from) continue;
        auto [te, t_is_head] = s->edge_end_of(h);
        Rational coeff = -sign_of(h) / eps_from;
        // rebuild chords: remove `slot` from fe (shift), insert at the w-end of te
        std::vector<Chord> nc;
        int kt = diag.count_on(te);
        for (auto ch : diag.chords()) {
            for (auto* p : {&ch.a, &ch.b}) {
                if (*p == slot) {
                    // destination position computed after the removal shift below
                    *p = Endpoint{-1, 0};
                } else {
                    if (p->edge == fe && !f_is_head && p->pos > 0) p->pos -= 1;
                    // (removal at the top end shifts nothing below it)
                }
            }
            nc.push_back(ch);
        }
        int dest_count = kt - (te == fe ? 1 : 0);
        int dest_pos = t_is_head ? dest_count : 0;
        for (auto& ch : nc) {
            for (auto* p : {&ch.a, &ch.b}) {
                if (p->edge == -1) continue;
                if (p->edge == te && !t_is_head) p->pos += 1;
            }
        }
        for (auto& ch : nc) {
            for (auto* p : {&ch.a, &ch.b})
                if (p->edge == -1) *p = Endpoint{te, dest_pos};
        }
        out.accumulate(ChordDiagram(s, nc), K(coeff));
    }
    return out;
}

}  // namespace detail

// Clears all chord endpoints off the tree's edges by VI moves, pushing them
// toward the leaves. `low_first` picks the processing order among candidate
// edges (the result is schedule-independent in the quotient, which is tested,
// not assumed).
template <class K>
LinComb<K> sweep_off_tree(const TreeSpec& tree, const LinComb<K>& v, bool low_first = true) {
    if (v.is_zero()) return v;
    const SkeletonPtr& s = v.skeleton();
    detail::check_tree(*s, tree);
    // root at the lowest vertex id; child end of each tree edge is the end
    // farther from the root
    VertexId root = *tree.vertices.begin();
    std::map<VertexId, int> depth;
    depth[root] = 0;
    {
        bool grew = true;
        while (grew) {
            grew = false;
            for (auto e : tree.edges) {
                VertexId a = s->vertex_of(s->edge(e).tail), b = s->vertex_of(s->edge(e).head);
                if (depth.count(a) && !depth.count(b)) { depth[b] = depth[a] + 1; grew = true; }
                else if (depth.count(b) && !depth.count(a)) { depth[a] = depth[b] + 1; grew = true; }
            }
        }
    }
    auto child_half = [&](EdgeId e) {
        const Edge& ed = s->edge(e);
        VertexId a = s->vertex_of(ed.tail), b = s->vertex_of(ed.head);
        return depth.at(a) > depth.at(b) ? ed.tail : ed.head;
    };

    LinComb<K> done(s);
    std::map<ChordDiagram, K> pending;
    for (auto& [d, c] : v.terms()) pending[d] = c;
    while (!pending.empty()) {
        auto it = pending.begin();
        ChordDiagram d = it->first;
        K c = it->second;
        pending.erase(it);
        // candidate tree edges carrying slots
        std::vector<EdgeId> cands;
        for (auto e : tree.edges)
            if (d.count_on(e) > 0) cands.push_back(e);
        if (cands.empty()) {
            done.accumulate(d, c);
            continue;
        }
        // deepest child end first; ties by edge id per schedule flag
        auto key = [&](EdgeId e) { return depth.at(s->vertex_of(child_half(e))); };
        EdgeId pick = cands[0];
        for (auto e : cands) {
            if (key(e) > key(pick) || (key(e) == key(pick) && (low_first ? e < pick : e > pick)))
                pick = e;
        }
        HalfEdgeId ch = child_half(pick);
        VertexId w = s->vertex_of(ch);
        if (s->vertex(w).kind == VertexKind::Boundary)
            throw std::invalid_argument("cannot sweep across a boundary vertex");
        LinComb<K> moved = detail::vi_move<K>(s, w, ch, d);
        for (auto& [nd, nc] : moved.terms()) {
            K add = c * nc;
            auto [jt, fresh] = pending.emplace(nd, add);
            if (!fresh) {
                jt->second += add;
                if (jt->second == K(0)) pending.erase(jt);
            }
        }
    }
    return done;
}

// The strand decomposition of the complement of a spanning tree: maximal
// chains of non-tree edges through bivalent vertices not in the tree. Each
// chain is a strand, ordered by its first edge id.
struct StrandChain {
    std::vector<EdgeId> pieces;  // tail-to-head order
};

inline std::vector<StrandChain> strand_chains(const Skeleton& s, const TreeSpec& tree) {
    std::set<EdgeId> non_tree;
    for (auto& [id, e] : s.edges())
        if (!tree.edges.count(id)) non_tree.insert(id);
    if (!s.circles().empty())
        throw std::invalid_argument("sweeping needs a connected skeleton without free circles");
    // interior connector: bivalent vertex not in the tree joining two chain pieces
    auto connector = [&](VertexId v) {
        if (tree.vertices.count(v)) return false;
        auto k = s.vertex(v).kind;
        return k == VertexKind::Dot || k == VertexKind::Antidot;
    };
    std::map<EdgeId, EdgeId> next;
    std::set<EdgeId> has_prev;
    for (auto e : non_tree) {
        VertexId hv = s.vertex_of(s.edge(e).head);
        if (!connector(hv)) continue;
        const auto& halves = s.vertex(hv).halves;
        HalfEdgeId other = halves[0] == s.edge(e).head ? halves[1] : halves[0];
        auto [f, is_head] = s.edge_end_of(other);
        if (is_head) throw std::invalid_argument("inconsistent orientation along strand chain");
        next[e] = f;
        has_prev.insert(f);
    }
    std::vector<StrandChain> chains;
    for (auto e : non_tree) {
        if (has_prev.count(e)) continue;
        StrandChain ch;
        EdgeId cur = e;
        while (true) {
            ch.pieces.push_back(cur);
            auto it = next.find(cur);
            if (it == next.end()) break;
            cur = it->second;
        }
        chains.push_back(ch);
    }
    // every non-tree edge must land in exactly one chain, and chain ends must
    // rest on tree vertices
    size_t total = 0;
    for (auto& ch : chains) {
        total += ch.pieces.size();
        VertexId a = s.vertex_of(s.edge(ch.pieces.front()).tail);
        VertexId b = s.vertex_of(s.edge(ch.pieces.back()).head);
        if (!tree.vertices.count(a) || !tree.vertices.count(b))
            throw std::invalid_argument("strand chain does not end on the tree");
    }
    if (total != non_tree.size())
        throw std::invalid_argument("non-tree edges do not decompose into strands");
    return chains;
}

// Sweep a graded element to its strand-algebra presentation along a spanning
// tree: clear the tree by VI moves, then read the non-tree chains as upward
// strands (ascending first-piece edge id).
template <class K>
Series<K> sweep(const GradedElement<K>& v, const TreeSpec& tree, bool low_first = true) {
    const SkeletonPtr& s = v.skeleton();
    for (auto& [id, vert] : s->vertices()) {
        if (tree.vertices.count(id)) continue;
        auto k = vert.kind;
        if (k != VertexKind::Dot && k != VertexKind::Antidot)
            throw std::invalid_argument("tree does not span the skeleton");
    }
    auto chains = strand_chains(*s, tree);
    int n = (int)chains.size();
    auto strands = strands_skeleton(n);
    Series<K> out(n, v.maxdeg());
    // piece -> (strand, which position block)
    std::map<EdgeId, std::pair<int, int>> where;
    for (int i = 0; i < n; ++i)
        for (size_t j = 0; j < chains[i].pieces.size(); ++j)
            where[chains[i].pieces[j]] = {i + 1, (int)j};

    for (auto& [deg, part] : v.parts()) {
        LinComb<K> cleared = sweep_off_tree(tree, part, low_first);
        LinComb<K> acc(strands);
        for (auto& [d, c] : cleared.terms()) {
            // offsets per piece for this diagram
            std::map<EdgeId, int> offset;
            for (auto& chn : chains) {
                int off = 0;
                for (auto p : chn.pieces) {
                    offset[p] = off;
                    off += d.count_on(p);
                }
            }
            std::vector<Chord> nc;
            for (auto ch : d.chords()) {
                for (auto* p : {&ch.a, &ch.b}) {
                    auto [strand, blk] = where.at(p->edge);
                    (void)blk;
                    p->pos += offset.at(p->edge);
                    p->edge = strand;
                }
                nc.push_back(ch);
            }
            acc.accumulate(ChordDiagram(strands, nc), c);
        }
        out.set_part(deg, acc);
    }
    return out;
}

// Inclusion of a strand-algebra element back into the skeleton: strand i's
// slots are placed on the first edge of chain i. This is a section of sweep
// modulo the relations (round-trip tested).
template <class K>
GradedElement<K> include_series(const Series<K>& w, const SkeletonPtr& s, const TreeSpec& tree) {
    auto chains = strand_chains(*s, tree);
    if ((int)chains.size() != w.strands())
        throw std::invalid_argument("strand count does not match the tree complement");
    GradedElement<K> out(s, w.maxdeg());
    for (auto& [deg, part] : w.parts()) {
        LinComb<K> acc(s);
        for (auto& [d, c] : part.terms()) {
            std::vector<Chord> nc;
            for (auto ch : d.chords()) {
                for (auto* p : {&ch.a, &ch.b}) p->edge = chains[p->edge - 1].pieces.front();
                nc.push_back(ch);
            }
            acc.accumulate(ChordDiagram(s, nc), c);
        }
        out.set_part(deg, acc);
    }
    return out;
}

// Tree connected sum on graded elements: sweep both trees chord-free, then
// join the skeletons through new dots.
template <class K>
GradedElement<K> tree_connect_op(const GradedElement<K>& v1, const TreeSpec& t1,
                                 const GradedElement<K>& v2, const TreeSpec& t2,
                                 const std::vector<std::pair<HalfEdgeId, HalfEdgeId>>& pairing,
                                 bool low_first = true) {
    if (v1.maxdeg() != v2.maxdeg()) throw std::invalid_argument("truncation degree mismatch");
    auto res = tree_connected_sum(*v1.skeleton(), t1, *v2.skeleton(), t2, pairing);
    GradedElement<K> out(res.skeleton, v1.maxdeg());
    std::map<int, LinComb<K>> swept2;
    for (auto& [d2, p2] : v2.parts()) swept2.emplace(d2, sweep_off_tree(t2, p2, low_first));
    for (auto& [d1, p1] : v1.parts()) {
        LinComb<K> c1 = sweep_off_tree(t1, p1, low_first);
        for (auto& [d2, c2] : swept2) {
            if (d1 + d2 > out.maxdeg()) continue;
            LinComb<K> acc(res.skeleton);
            for (auto& [da, ca] : c1.terms()) {
                for (auto& [db, cb] : c2.terms()) {
                    std::vector<Chord> nc = da.chords();
                    for (auto ch : db.chords()) {
                        ch.a.edge += res.edge_offset;
                        ch.b.edge += res.edge_offset;
                        nc.push_back(ch);
                    }
                    acc.accumulate(ChordDiagram(res.skeleton, nc), ca * cb);
                }
            }
            out.set_part(d1 + d2, out.part(d1 + d2) + acc);
        }
    }
    return out;
}

// Reduce every part (elements are normally kept reduced; this re-normalizes a
// raw element).
template <class K>
GradedElement<K> reduce_element(const GradedElement<K>& v) {
    GradedElement<K> out(v.skeleton(), v.maxdeg());
    for (auto& [d, p] : v.parts()) out.set_part(d, p);
    return out;
}

}  // namespace ktg
