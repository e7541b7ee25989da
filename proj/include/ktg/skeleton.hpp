#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace ktg {

using VertexId = int;
using EdgeId = int;
using HalfEdgeId = int;

enum class VertexKind { Trivalent, Dot, Antidot, Boundary };

inline const char* kind_name(VertexKind k) {
    switch (k) {
        case VertexKind::Trivalent: return "trivalent";
        case VertexKind::Dot: return "dot";
        case VertexKind::Antidot: return "antidot";
        case VertexKind::Boundary: return "boundary";
    }
    return "?";
}

struct Vertex {
    VertexKind kind;
    // Trivalent: cyclic order, stored rotated so the minimal half-edge id is
    // first. Dot/antidot: two half-edges, stored sorted. Boundary: one.
    std::vector<HalfEdgeId> halves;

    auto operator<=>(const Vertex&) const = default;
};

struct Edge {
    HalfEdgeId tail = -1;
    HalfEdgeId head = -1;
    auto operator<=>(const Edge&) const = default;
};

// Combinatorial dotted trivalent graph skeleton: oriented edges, trivalent
// vertices with cyclic order, dot/antidot bivalent vertices, boundary
// (strand-end) vertices, and free circles. Immutable after construction.
class Skeleton {
public:
    Skeleton() = default;
    Skeleton(std::map<VertexId, Vertex> vertices, std::map<EdgeId, Edge> edges,
             std::map<EdgeId, bool> circles)
        : vertices_(std::move(vertices)), edges_(std::move(edges)), circles_(std::move(circles)) {
        canonicalize_vertices();
        build_index();
        validate();
    }

    const std::map<VertexId, Vertex>& vertices() const { return vertices_; }
    const std::map<EdgeId, Edge>& edges() const { return edges_; }
    const std::map<EdgeId, bool>& circles() const { return circles_; }

    bool has_edge(EdgeId e) const { return edges_.count(e) != 0; }
    bool is_circle(EdgeId e) const { return circles_.count(e) != 0; }
    // Edge-or-circle lookup used by chord placement: every id in this list can
    // carry chord endpoint slots.
    std::vector<EdgeId> slot_edges() const {
        std::vector<EdgeId> out;
        for (auto& [id, e] : edges_) out.push_back(id);
        for (auto& [id, b] : circles_) out.push_back(id);
        std::sort(out.begin(), out.end());
        return out;
    }

    const Edge& edge(EdgeId e) const {
        auto it = edges_.find(e);
        if (it == edges_.end()) throw std::invalid_argument("unknown edge id " + std::to_string(e));
        return it->second;
    }
    const Vertex& vertex(VertexId v) const {
        auto it = vertices_.find(v);
        if (it == vertices_.end())
            throw std::invalid_argument("unknown vertex id " + std::to_string(v));
        return it->second;
    }

    VertexId vertex_of(HalfEdgeId h) const { return at_vertex_.at(h).first; }
    // (edge, is_head) carrying this half-edge
    std::pair<EdgeId, bool> edge_end_of(HalfEdgeId h) const { return on_edge_.at(h); }

    VertexId edge_tail_vertex(EdgeId e) const { return vertex_of(edge(e).tail); }
    VertexId edge_head_vertex(EdgeId e) const { return vertex_of(edge(e).head); }

    int max_vertex_id() const { return vertices_.empty() ? 0 : vertices_.rbegin()->first; }
    int max_edge_id() const {
        int m = 0;
        if (!edges_.empty()) m = std::max(m, edges_.rbegin()->first);
        if (!circles_.empty()) m = std::max(m, circles_.rbegin()->first);
        return m;
    }
    int max_half_id() const {
        int m = 0;
        for (auto& [h, v] : at_vertex_) m = std::max(m, h);
        return m;
    }

    bool operator==(const Skeleton& o) const {
        return vertices_ == o.vertices_ && edges_ == o.edges_ && circles_ == o.circles_;
    }
    bool operator<(const Skeleton& o) const {
        if (vertices_ != o.vertices_) return vertices_ < o.vertices_;
        if (edges_ != o.edges_) return edges_ < o.edges_;
        return circles_ < o.circles_;
    }

    std::string to_text() const {
        std::ostringstream os;
        for (auto& [id, v] : vertices_) {
            os << "vertex " << id << " " << kind_name(v.kind);
            for (auto h : v.halves) os << " " << h;
            os << "\n";
        }
        for (auto& [id, e] : edges_) os << "edge " << id << " " << e.tail << " " << e.head << "\n";
        for (auto& [id, rev] : circles_) {
            os << "circle " << id;
            if (rev) os << " reversed";
            os << "\n";
        }
        return os.str();
    }

private:
    void canonicalize_vertices() {
        for (auto& [id, v] : vertices_) {
            if (v.kind == VertexKind::Trivalent) {
                if (v.halves.size() == 3) {
                    auto mn = std::min_element(v.halves.begin(), v.halves.end());
                    std::rotate(v.halves.begin(), mn, v.halves.end());
                }
            } else if (v.kind == VertexKind::Dot || v.kind == VertexKind::Antidot) {
                std::sort(v.halves.begin(), v.halves.end());
            }
        }
    }

    void build_index() {
        at_vertex_.clear();
        on_edge_.clear();
        for (auto& [id, v] : vertices_) {
            for (size_t i = 0; i < v.halves.size(); ++i) {
                if (!at_vertex_.emplace(v.halves[i], std::make_pair(id, (int)i)).second)
                    throw std::invalid_argument("half-edge " + std::to_string(v.halves[i]) +
                                                " listed at two vertices");
            }
        }
        for (auto& [id, e] : edges_) {
            if (!on_edge_.emplace(e.tail, std::make_pair(id, false)).second)
                throw std::invalid_argument("half-edge " + std::to_string(e.tail) +
                                            " listed on two edges");
            if (!on_edge_.emplace(e.head, std::make_pair(id, true)).second)
                throw std::invalid_argument("half-edge " + std::to_string(e.head) +
                                            " listed on two edges");
        }
    }

    void validate() const {
        for (auto& [id, v] : vertices_) {
            size_t want = v.kind == VertexKind::Trivalent ? 3
                          : v.kind == VertexKind::Boundary ? 1
                                                           : 2;
            if (v.halves.size() != want)
                throw std::invalid_argument("vertex " + std::to_string(id) + " has wrong valence");
            for (auto h : v.halves)
                if (!on_edge_.count(h))
                    throw std::invalid_argument("half-edge " + std::to_string(h) +
                                                " at vertex but on no edge");
        }
        for (auto& [eid, e] : edges_) {
            for (auto h : {e.tail, e.head})
                if (!at_vertex_.count(h))
                    throw std::invalid_argument("half-edge " + std::to_string(h) +
                                                " on edge but at no vertex");
            if (e.tail == e.head) throw std::invalid_argument("edge with equal half-edges");
        }
        for (auto& [cid, b] : circles_) {
            if (edges_.count(cid))
                throw std::invalid_argument("id used for both edge and circle");
        }
    }

    std::map<VertexId, Vertex> vertices_;
    std::map<EdgeId, Edge> edges_;
    std::map<EdgeId, bool> circles_;
    std::map<HalfEdgeId, std::pair<VertexId, int>> at_vertex_;
    std::map<HalfEdgeId, std::pair<EdgeId, bool>> on_edge_;
};

using SkeletonPtr = std::shared_ptr<const Skeleton>;

inline SkeletonPtr make_skeleton(std::map<VertexId, Vertex> vertices, std::map<EdgeId, Edge> edges,
                                 std::map<EdgeId, bool> circles = {}) {
    return std::make_shared<const Skeleton>(std::move(vertices), std::move(edges),
                                            std::move(circles));
}

// ---------------------------------------------------------------------------
// Named constant skeletons. Half-edge ids follow the scheme: edge k carries
// halves 10k (tail) and 10k+1 (head).

inline SkeletonPtr circle_skeleton() { return make_skeleton({}, {}, {{1, false}}); }

// Two trivalent vertices u=1, v=2; edge 1: u->v, edges 2,3: v->u. Cyclic
// orders are those of the planar embedding.
inline SkeletonPtr theta_skeleton() {
    std::map<VertexId, Vertex> vs{
        {1, {VertexKind::Trivalent, {10, 21, 31}}},
        {2, {VertexKind::Trivalent, {11, 30, 20}}},
    };
    std::map<EdgeId, Edge> es{{1, {10, 11}}, {2, {20, 21}}, {3, {30, 31}}};
    return make_skeleton(std::move(vs), std::move(es));
}

// Loop 1 at vertex 1, bridge 2 from vertex 1 to 2, loop 3 at vertex 2.
inline SkeletonPtr dumbbell_skeleton() {
    std::map<VertexId, Vertex> vs{
        {1, {VertexKind::Trivalent, {11, 20, 10}}},
        {2, {VertexKind::Trivalent, {31, 21, 30}}},
    };
    std::map<EdgeId, Edge> es{{1, {10, 11}}, {2, {20, 21}}, {3, {30, 31}}};
    return make_skeleton(std::move(vs), std::move(es));
}

// Planar K4. Vertices: A=1, B=2, C=3 outer, D=4 center. Edges: 1: B->A,
// 2: B->C, 3: C->A (outer triangle), 4: D->A, 5: D->B, 6: C->D (spokes).
inline SkeletonPtr tetrahedron_skeleton() {
    std::map<VertexId, Vertex> vs{
        {1, {VertexKind::Trivalent, {11, 41, 31}}},
        {2, {VertexKind::Trivalent, {20, 51, 10}}},
        {3, {VertexKind::Trivalent, {30, 60, 21}}},
        {4, {VertexKind::Trivalent, {40, 50, 61}}},
    };
    std::map<EdgeId, Edge> es{{1, {10, 11}}, {2, {20, 21}}, {3, {30, 31}},
                              {4, {40, 41}}, {5, {50, 51}}, {6, {60, 61}}};
    return make_skeleton(std::move(vs), std::move(es));
}

// n disjoint upward strands; strand i is edge i from boundary vertex 2i-1 to
// boundary vertex 2i.
inline SkeletonPtr strands_skeleton(int n) {
    if (n < 0) throw std::invalid_argument("negative strand count");
    std::map<VertexId, Vertex> vs;
    std::map<EdgeId, Edge> es;
    for (int i = 1; i <= n; ++i) {
        vs[2 * i - 1] = {VertexKind::Boundary, {10 * i}};
        vs[2 * i] = {VertexKind::Boundary, {10 * i + 1}};
        es[i] = {10 * i, 10 * i + 1};
    }
    return make_skeleton(std::move(vs), std::move(es));
}

// Circle with k bivalent vertices of the given kind, edges oriented around.
inline SkeletonPtr marked_circle_skeleton(int k, VertexKind kind) {
    if (k < 1) throw std::invalid_argument("need at least one marked point");
    std::map<VertexId, Vertex> vs;
    std::map<EdgeId, Edge> es;
    for (int i = 1; i <= k; ++i) {
        int next = (i % k) + 1;
        es[i] = {10 * i, 10 * i + 1};      // edge i: vertex i -> vertex next
        vs[next].kind = kind;
        vs[i].kind = kind;
    }
    for (int i = 1; i <= k; ++i) {
        int prev = (i + k - 2) % k + 1;
        vs[i].halves = {10 * i, 10 * prev + 1};
    }
    return make_skeleton(std::move(vs), std::move(es));
}

inline SkeletonPtr crossed_circle_skeleton() { return marked_circle_skeleton(1, VertexKind::Antidot); }
inline SkeletonPtr triple_crossed_circle_skeleton() {
    return marked_circle_skeleton(3, VertexKind::Antidot);
}

// Subdivide edge (or circle) e by a new bivalent vertex of the given kind.
// Returns the new skeleton plus (new vertex, incoming segment, outgoing
// segment); a circle becomes a single looping edge at the new vertex.
struct SubdivideResult {
    SkeletonPtr skeleton;
    VertexId vertex = 0;
    EdgeId in_segment = 0, out_segment = 0;
};

inline SubdivideResult insert_bivalent(const Skeleton& s, EdgeId e, VertexKind kind) {
    if (kind != VertexKind::Dot && kind != VertexKind::Antidot)
        throw std::invalid_argument("subdivision vertex must be a dot or antidot");
    auto vs = s.vertices();
    auto es = s.edges();
    auto cs = s.circles();
    SubdivideResult res;
    int freshV = s.max_vertex_id() + 1;
    int freshE = s.max_edge_id() + 1;
    int freshH = s.max_half_id() + 1;
    res.vertex = freshV;
    if (s.is_circle(e)) {
        cs.erase(e);
        EdgeId loop = freshE;
        HalfEdgeId lt = freshH, lh = freshH + 1;
        es[loop] = {lt, lh};
        vs[freshV] = {kind, {lh, lt}};
        res.in_segment = res.out_segment = loop;
    } else {
        Edge old = s.edge(e);
        es.erase(e);
        EdgeId ein = freshE, eout = freshE + 1;
        HalfEdgeId hin = freshH, hout = freshH + 1;
        es[ein] = {old.tail, hin};
        es[eout] = {hout, old.head};
        vs[freshV] = {kind, {hin, hout}};
        res.in_segment = ein;
        res.out_segment = eout;
    }
    res.skeleton = make_skeleton(std::move(vs), std::move(es), std::move(cs));
    return res;
}

struct DottedEdgeConnectResult {
    SkeletonPtr skeleton;
    int vertex_offset = 0, edge_offset = 0, half_offset = 0;  // applied to s2 ids
    VertexId dot1 = 0, dot2 = 0;
    // cut segments: e = (e_in -> dot1 -> f_out), f = (f_in -> dot2 -> e_out)
    EdgeId e_in = 0, e_out = 0, f_in = 0, f_out = 0;
};

// Dotted edge connected sum: cut e and f, cross-join the four ends through
// two new dots (no conditions on edge orientations).
inline DottedEdgeConnectResult dotted_edge_connected_sum(const Skeleton& s1, EdgeId e,
                                                         const Skeleton& s2, EdgeId f) {
    DottedEdgeConnectResult res;
    res.vertex_offset = s1.max_vertex_id();
    res.edge_offset = s1.max_edge_id();
    res.half_offset = s1.max_half_id();

    std::map<VertexId, Vertex> vs = s1.vertices();
    std::map<EdgeId, Edge> es = s1.edges();
    std::map<EdgeId, bool> cs = s1.circles();
    for (auto& [id, v] : s2.vertices()) {
        Vertex nv = v;
        for (auto& h : nv.halves) h += res.half_offset;
        vs[id + res.vertex_offset] = nv;
    }
    for (auto& [id, ed] : s2.edges())
        es[id + res.edge_offset] = {ed.tail + res.half_offset, ed.head + res.half_offset};
    for (auto& [id, b] : s2.circles()) cs[id + res.edge_offset] = b;

    int freshV = 0, freshE = 0, freshH = 0;
    for (auto& [id, v] : vs) freshV = std::max(freshV, id);
    for (auto& [id, ed] : es) freshE = std::max(freshE, id);
    for (auto& [id, b] : cs) freshE = std::max(freshE, id);
    for (auto& [id, v] : vs)
        for (auto h : v.halves) freshH = std::max(freshH, h);

    auto cut = [&](EdgeId target, bool second) -> std::pair<EdgeId, EdgeId> {
        EdgeId t = second ? target + res.edge_offset : target;
        if (cs.count(t)) {
            // a cut circle is a single arc; both ends are the fresh halves
            cs.erase(t);
            EdgeId arc = ++freshE;
            es[arc] = {++freshH, ++freshH};
            return {arc, arc};
        }
        auto it = es.find(t);
        if (it == es.end()) throw std::invalid_argument("unknown edge id for connected sum");
        Edge old = it->second;
        es.erase(it);
        EdgeId ein = ++freshE, eout = ++freshE;
        es[ein] = {old.tail, ++freshH};
        es[eout] = {++freshH, old.head};
        return {ein, eout};
    };
    auto [ein, eout] = cut(e, false);
    auto [fin, fout] = cut(f, true);
    res.dot1 = ++freshV;
    res.dot2 = ++freshV;
    vs[res.dot1] = {VertexKind::Dot, {es.at(ein).head, es.at(fout).tail}};
    vs[res.dot2] = {VertexKind::Dot, {es.at(fin).head, es.at(eout).tail}};
    res.e_in = ein; res.e_out = eout; res.f_in = fin; res.f_out = fout;
    res.skeleton = make_skeleton(std::move(vs), std::move(es), std::move(cs));
    return res;
}

// Theta with one antidot on each edge. Edge k of the theta becomes the path
// (2k-1, 2k) through antidot vertex 10+k.
inline SkeletonPtr triple_crossed_theta_skeleton() {
    std::map<VertexId, Vertex> vs{
        {1, {VertexKind::Trivalent, {10, 41, 61}}},
        {2, {VertexKind::Trivalent, {21, 30, 50}}},
        {11, {VertexKind::Antidot, {11, 20}}},
        {12, {VertexKind::Antidot, {31, 40}}},
        {13, {VertexKind::Antidot, {51, 60}}},
    };
    // theta edge 1: u -> v becomes 1: u->a11, 2: a11->v
    // theta edge 2: v -> u becomes 3: v->a12, 4: a12->u
    // theta edge 3: v -> u becomes 5: v->a13, 6: a13->u
    std::map<EdgeId, Edge> es{{1, {10, 11}}, {2, {20, 21}}, {3, {30, 31}},
                              {4, {40, 41}}, {5, {50, 51}}, {6, {60, 61}}};
    return make_skeleton(std::move(vs), std::move(es));
}

// Dumbbell with two antidots on each loop.
inline SkeletonPtr quad_crossed_dumbbell_skeleton() {
    std::map<VertexId, Vertex> vs{
        {1, {VertexKind::Trivalent, {31, 40, 10}}},   // (loop-in, bridge-out, loop-out)
        {2, {VertexKind::Trivalent, {71, 41, 50}}},
        {11, {VertexKind::Antidot, {11, 20}}},
        {12, {VertexKind::Antidot, {21, 30}}},
        {13, {VertexKind::Antidot, {51, 60}}},
        {14, {VertexKind::Antidot, {61, 70}}},
    };
    std::map<EdgeId, Edge> es{{1, {10, 11}}, {2, {20, 21}}, {3, {30, 31}}, {4, {40, 41}},
                              {5, {50, 51}}, {6, {60, 61}}, {7, {70, 71}}};
    return make_skeleton(std::move(vs), std::move(es));
}

// ---------------------------------------------------------------------------
// Operations. Binary operations relabel the second operand's ids upward; the
// offsets used are recorded in the result structs.

// Fused chains produced by an operation: a new edge (or circle) assembled from
// ordered old pieces. Single untouched edges do not appear.
struct Fusion {
    EdgeId new_id;
    bool is_circle = false;
    std::vector<EdgeId> pieces;
};

namespace detail {

struct Surgery {
    std::map<VertexId, Vertex> vertices;
    std::map<EdgeId, Edge> edges;
    std::map<EdgeId, bool> circles;
    // bonds: head-half of one edge glued to tail-half of another at a removed
    // vertex; recorded as edge ids
    std::map<EdgeId, EdgeId> next;   // flows-into
    std::set<EdgeId> has_prev;

    explicit Surgery(const Skeleton& s)
        : vertices(s.vertices()), edges(s.edges()), circles(s.circles()) {}

    void bond(const Skeleton& base, HalfEdgeId in_half, HalfEdgeId out_half) {
        auto [ea, ia] = lookup(base, in_half);
        auto [eb, ib] = lookup(base, out_half);
        if (!ia || ib)
            throw std::invalid_argument("orientation mismatch at fused vertex");
        if (next.count(ea) || has_prev.count(eb))
            throw std::invalid_argument("half-edge fused twice");
        next[ea] = eb;
        has_prev.insert(eb);
    }

    std::pair<EdgeId, bool> lookup(const Skeleton& base, HalfEdgeId h) const {
        // search current edge set (daughters may not exist in base)
        for (auto& [id, e] : edges) {
            if (e.tail == h) return {id, false};
            if (e.head == h) return {id, true};
        }
        (void)base;
        throw std::invalid_argument("half-edge not found during surgery");
    }

    // Performs all fusions; returns result skeleton plus chain records.
    std::pair<SkeletonPtr, std::vector<Fusion>> finish() {
        std::vector<Fusion> fusions;
        int fresh = 0;
        for (auto& [id, e] : edges) fresh = std::max(fresh, id);
        for (auto& [id, b] : circles) fresh = std::max(fresh, id);
        ++fresh;

        std::set<EdgeId> consumed;
        // open chains first, in ascending order of their starting edge
        for (auto& [start, e] : edges) {
            if (consumed.count(start) || has_prev.count(start) || !next.count(start)) continue;
            Fusion f;
            f.new_id = fresh++;
            EdgeId cur = start;
            while (true) {
                f.pieces.push_back(cur);
                consumed.insert(cur);
                auto it = next.find(cur);
                if (it == next.end()) break;
                cur = it->second;
            }
            fusions.push_back(std::move(f));
        }
        // remaining bonded edges are cycles
        for (auto& [start, e] : edges) {
            if (consumed.count(start) || !next.count(start)) continue;
            Fusion f;
            f.new_id = fresh++;
            f.is_circle = true;
            EdgeId cur = start;
            do {
                f.pieces.push_back(cur);
                consumed.insert(cur);
                cur = next.at(cur);
            } while (cur != start);
            fusions.push_back(std::move(f));
        }
        for (auto& f : fusions) {
            if (f.is_circle) {
                for (auto p : f.pieces) edges.erase(p);
                circles[f.new_id] = false;
            } else {
                Edge ne{edges.at(f.pieces.front()).tail, edges.at(f.pieces.back()).head};
                for (auto p : f.pieces) edges.erase(p);
                edges[f.new_id] = ne;
            }
        }
        return {make_skeleton(std::move(vertices), std::move(edges), std::move(circles)),
                std::move(fusions)};
    }
};

// Rotates a trivalent vertex's cyclic list so the half of edge e is first;
// returns the halves of the other two edge-ends in cyclic order (next, prev).
inline std::pair<HalfEdgeId, HalfEdgeId> flanks(const Skeleton& s, VertexId v, HalfEdgeId eh) {
    const auto& halves = s.vertex(v).halves;
    if (halves.size() != 3) throw std::invalid_argument("flanks at non-trivalent vertex");
    for (int i = 0; i < 3; ++i) {
        if (halves[i] == eh) return {halves[(i + 1) % 3], halves[(i + 2) % 3]};
    }
    throw std::invalid_argument("half-edge not at vertex");
}

}  // namespace detail

// switch orientation of edge or circle e
inline SkeletonPtr switch_edge(const Skeleton& s, EdgeId e) {
    auto vs = s.vertices();
    auto es = s.edges();
    auto cs = s.circles();
    if (auto it = es.find(e); it != es.end()) {
        std::swap(it->second.tail, it->second.head);
    } else if (auto ic = cs.find(e); ic != cs.end()) {
        ic->second = !ic->second;
    } else {
        throw std::invalid_argument("unknown edge id " + std::to_string(e));
    }
    return make_skeleton(std::move(vs), std::move(es), std::move(cs));
}

struct DeleteResult {
    SkeletonPtr skeleton;
    std::vector<Fusion> fusions;
};

inline DeleteResult delete_edge(const Skeleton& s, EdgeId e) {
    if (s.is_circle(e)) throw std::invalid_argument("cannot delete a circle");
    const Edge& ed = s.edge(e);
    VertexId u = s.vertex_of(ed.tail), v = s.vertex_of(ed.head);
    if (u == v) throw std::invalid_argument("cannot delete a loop edge");
    for (VertexId w : {u, v})
        if (s.vertex(w).kind != VertexKind::Trivalent)
            throw std::invalid_argument("delete endpoint is not trivalent");

    detail::Surgery surg(s);
    surg.edges.erase(e);
    surg.vertices.erase(u);
    surg.vertices.erase(v);
    for (auto [w, eh] : {std::pair{u, ed.tail}, std::pair{v, ed.head}}) {
        auto [a, b] = detail::flanks(s, w, eh);
        bool a_in = s.edge_end_of(a).second;
        bool b_in = s.edge_end_of(b).second;
        if (a_in == b_in)
            throw std::invalid_argument("orientation mismatch at delete endpoint");
        if (a_in) surg.bond(s, a, b);
        else surg.bond(s, b, a);
    }
    auto [skel, fus] = surg.finish();
    return {skel, fus};
}

struct UnzipResult {
    SkeletonPtr skeleton;
    std::vector<Fusion> fusions;
    // path of edge ids carrying the unzipped slots, in tail-to-head order
    std::vector<EdgeId> path;
    // daughter pieces in the same order as `path`; slot subsets lifted to
    // daughter A keep these piece ids, likewise for B
    std::vector<EdgeId> daughters_a;
    std::vector<EdgeId> daughters_b;
};

namespace detail {

inline UnzipResult unzip_impl(const Skeleton& s, const std::vector<EdgeId>& path,
                              const std::vector<VertexId>& interior, bool dotted) {
    const Edge& first = s.edge(path.front());
    const Edge& last = s.edge(path.back());
    VertexId u = s.vertex_of(first.tail), v = s.vertex_of(last.head);
    if (u == v) throw std::invalid_argument("cannot unzip a loop");
    if (s.vertex(u).kind != VertexKind::Trivalent || s.vertex(v).kind != VertexKind::Trivalent)
        throw std::invalid_argument("unzip endpoint is not trivalent");
    auto [xu, yu] = flanks(s, u, first.tail);   // next, prev at the tail vertex
    auto [zv, wv] = flanks(s, v, last.head);    // next, prev at the head vertex
    if (!s.edge_end_of(xu).second || !s.edge_end_of(yu).second)
        throw std::invalid_argument("edges at unzip tail vertex must both be incoming");
    if (s.edge_end_of(zv).second || s.edge_end_of(wv).second)
        throw std::invalid_argument("edges at unzip head vertex must both be outgoing");

    Surgery surg(s);
    for (auto p : path) surg.edges.erase(p);
    surg.vertices.erase(u);
    surg.vertices.erase(v);
    for (auto w : interior) surg.vertices.erase(w);

    int freshV = s.max_vertex_id() + 1;
    int freshE = s.max_edge_id() + 1;
    int freshH = s.max_half_id() + 1;

    UnzipResult res;
    res.path = path;
    size_t segs = path.size();
    // daughter A runs beside the `next` flank at u and the `prev` flank at v;
    // daughter B beside the other pair (forced by the half-edge gluing)
    for (int side = 0; side < 2; ++side) {
        std::vector<EdgeId>& out = side == 0 ? res.daughters_a : res.daughters_b;
        HalfEdgeId prev_head = -1;
        for (size_t i = 0; i < segs; ++i) {
            EdgeId id = freshE++;
            Edge de{freshH++, freshH++};
            if (i > 0) {
                VertexId dot = freshV++;
                surg.vertices[dot] = {VertexKind::Dot, {prev_head, de.tail}};
            }
            prev_head = de.head;
            surg.edges[id] = de;
            out.push_back(id);
        }
    }
    surg.bond(s, xu, surg.edges.at(res.daughters_a.front()).tail);
    surg.bond(s, surg.edges.at(res.daughters_a.back()).head, wv);
    surg.bond(s, yu, surg.edges.at(res.daughters_b.front()).tail);
    surg.bond(s, surg.edges.at(res.daughters_b.back()).head, zv);

    auto [skel, fus] = surg.finish();
    res.skeleton = skel;
    res.fusions = fus;
    return res;
}

}  // namespace detail

inline UnzipResult unzip_edge(const Skeleton& s, EdgeId e) {
    if (s.is_circle(e)) throw std::invalid_argument("cannot unzip a circle");
    return detail::unzip_impl(s, {e}, {}, false);
}

// Resolves the maximal path of edges through bivalent vertices containing e.
// Returns (edge ids tail-to-head, interior bivalent vertex ids).
inline std::pair<std::vector<EdgeId>, std::vector<VertexId>> edge_path(const Skeleton& s,
                                                                       EdgeId e) {
    if (s.is_circle(e)) return {{e}, {}};
    std::vector<EdgeId> path{e};
    std::vector<VertexId> interior;
    auto bivalent = [&](VertexId v) {
        auto k = s.vertex(v).kind;
        return k == VertexKind::Dot || k == VertexKind::Antidot;
    };
    // walk backwards from the tail
    EdgeId cur = e;
    while (true) {
        VertexId v = s.vertex_of(s.edge(cur).tail);
        if (!bivalent(v)) break;
        const auto& halves = s.vertex(v).halves;
        HalfEdgeId other = halves[0] == s.edge(cur).tail ? halves[1] : halves[0];
        auto [pe, is_head] = s.edge_end_of(other);
        if (!is_head) throw std::invalid_argument("inconsistent orientations along dotted path");
        if (pe == e) throw std::invalid_argument("dotted path closes into a cycle");
        interior.insert(interior.begin(), v);
        path.insert(path.begin(), pe);
        cur = pe;
    }
    // walk forwards from the head
    cur = e;
    while (true) {
        VertexId v = s.vertex_of(s.edge(cur).head);
        if (!bivalent(v)) break;
        const auto& halves = s.vertex(v).halves;
        HalfEdgeId other = halves[0] == s.edge(cur).head ? halves[1] : halves[0];
        auto [ne, is_head] = s.edge_end_of(other);
        if (is_head) throw std::invalid_argument("inconsistent orientations along dotted path");
        if (ne == e) throw std::invalid_argument("dotted path closes into a cycle");
        interior.push_back(v);
        path.push_back(ne);
        cur = ne;
    }
    return {path, interior};
}

// Unzip of an edge-with-one-dot (a two-segment path); each daughter carries
// one new dot.
inline UnzipResult dotted_unzip(const Skeleton& s, EdgeId e) {
    auto [path, interior] = edge_path(s, e);
    int dots = 0;
    for (auto v : interior) {
        if (s.vertex(v).kind == VertexKind::Antidot)
            throw std::invalid_argument("dotted unzip path carries an antidot");
        ++dots;
    }
    if (dots != 1) throw std::invalid_argument("dotted unzip needs exactly one dot on the path");
    return detail::unzip_impl(s, path, interior, true);
}

struct ConnectResult {
    SkeletonPtr skeleton;
    int vertex_offset = 0, edge_offset = 0, half_offset = 0;  // applied to s2 ids
    // subdivided halves of e: e -> (e_in, e_out); for a circle both are the
    // single loop id
    EdgeId e_in = 0, e_out = 0, f_in = 0, f_out = 0;
    EdgeId bridge = 0;
    VertexId m1 = 0, m2 = 0;
};

// Connected sum along e in s1 and f in s2: subdivide both, join the new
// trivalent vertices by a bridge oriented s1 -> s2, attached on the right.
inline ConnectResult connected_sum(const Skeleton& s1, EdgeId e, const Skeleton& s2, EdgeId f) {
    ConnectResult res;
    res.vertex_offset = s1.max_vertex_id();
    res.edge_offset = s1.max_edge_id();
    res.half_offset = s1.max_half_id();

    std::map<VertexId, Vertex> vs = s1.vertices();
    std::map<EdgeId, Edge> es = s1.edges();
    std::map<EdgeId, bool> cs = s1.circles();
    for (auto& [id, v] : s2.vertices()) {
        Vertex nv = v;
        for (auto& h : nv.halves) h += res.half_offset;
        vs[id + res.vertex_offset] = nv;
    }
    for (auto& [id, ed] : s2.edges())
        es[id + res.edge_offset] = {ed.tail + res.half_offset, ed.head + res.half_offset};
    for (auto& [id, b] : s2.circles()) cs[id + res.edge_offset] = b;

    int freshV = 0, freshE = 0, freshH = 0;
    for (auto& [id, v] : vs) freshV = std::max(freshV, id);
    for (auto& [id, ed] : es) freshE = std::max(freshE, id);
    for (auto& [id, b] : cs) freshE = std::max(freshE, id);
    for (auto& [id, v] : vs)
        for (auto h : v.halves) freshH = std::max(freshH, h);
    ++freshV; ++freshE; ++freshH;

    auto subdivide = [&](EdgeId target, bool second) -> std::tuple<EdgeId, EdgeId, VertexId> {
        EdgeId t = second ? target + res.edge_offset : target;
        VertexId m = freshV++;
        if (cs.count(t)) {
            cs.erase(t);
            EdgeId loop = freshE++;
            HalfEdgeId lt = freshH++, lh = freshH++;
            es[loop] = {lt, lh};
            vs[m] = {VertexKind::Trivalent, {lh, -1, lt}};  // bridge half patched below
            return {loop, loop, m};
        }
        auto it = es.find(t);
        if (it == es.end()) throw std::invalid_argument("unknown edge id for connected sum");
        Edge old = it->second;
        es.erase(it);
        EdgeId ein = freshE++, eout = freshE++;
        HalfEdgeId hin = freshH++, hout = freshH++;
        es[ein] = {old.tail, hin};
        es[eout] = {hout, old.head};
        vs[m] = {VertexKind::Trivalent, {hin, -1, hout}};  // (in, bridge, out)
        return {ein, eout, m};
    };

    auto [ein, eout, m1] = subdivide(e, false);
    auto [fin, fout, m2] = subdivide(f, true);
    EdgeId bridge = freshE++;
    HalfEdgeId bt = freshH++, bh = freshH++;
    es[bridge] = {bt, bh};
    for (auto& h : vs[m1].halves)
        if (h == -1) h = bt;
    for (auto& h : vs[m2].halves)
        if (h == -1) h = bh;

    res.skeleton = make_skeleton(std::move(vs), std::move(es), std::move(cs));
    res.e_in = ein; res.e_out = eout; res.f_in = fin; res.f_out = fout;
    res.bridge = bridge; res.m1 = m1; res.m2 = m2;
    return res;
}

// A subtree of a skeleton: vertices (may include dots/antidots) plus edges
// whose endpoints all lie in the vertex set.
struct TreeSpec {
    std::set<VertexId> vertices;
    std::set<EdgeId> edges;
};

// Leaves of a tree: half-edges at tree vertices whose edges are not in the
// tree, in ascending order.
inline std::vector<HalfEdgeId> tree_leaves(const Skeleton& s, const TreeSpec& t) {
    std::vector<HalfEdgeId> out;
    for (auto v : t.vertices) {
        for (auto h : s.vertex(v).halves) {
            auto [e, is_head] = s.edge_end_of(h);
            if (!t.edges.count(e)) out.push_back(h);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

inline void check_tree(const Skeleton& s, const TreeSpec& t) {
    if (t.vertices.empty()) throw std::invalid_argument("empty tree");
    for (auto e : t.edges) {
        const Edge& ed = s.edge(e);
        if (!t.vertices.count(s.vertex_of(ed.tail)) || !t.vertices.count(s.vertex_of(ed.head)))
            throw std::invalid_argument("tree edge leaves the vertex set");
    }
    // connected and acyclic
    if (t.edges.size() + 1 != t.vertices.size())
        throw std::invalid_argument("tree subset is not a tree");
    std::set<VertexId> seen{*t.vertices.begin()};
    bool grew = true;
    while (grew) {
        grew = false;
        for (auto e : t.edges) {
            VertexId a = s.vertex_of(s.edge(e).tail), b = s.vertex_of(s.edge(e).head);
            if (seen.count(a) != seen.count(b)) {
                seen.insert(a);
                seen.insert(b);
                grew = true;
            }
        }
    }
    if (seen.size() != t.vertices.size()) throw std::invalid_argument("tree subset not connected");
}

// Checks that the two trees are isomorphic with dots matched to antidots and
// vice versa, compatibly with the leaf pairing.
inline void check_tree_match(const Skeleton& s1, const TreeSpec& t1, const Skeleton& s2,
                             const TreeSpec& t2,
                             const std::vector<std::pair<HalfEdgeId, HalfEdgeId>>& pairing) {
    if (t1.vertices.size() != t2.vertices.size() || t1.edges.size() != t2.edges.size())
        throw std::invalid_argument("tree shapes differ");
    std::map<VertexId, VertexId> anchor;
    for (auto& [h1, h2] : pairing) {
        VertexId a = s1.vertex_of(h1), b = s2.vertex_of(h2);
        auto [it, fresh] = anchor.emplace(a, b);
        if (!fresh && it->second != b)
            throw std::invalid_argument("leaf pairing maps one tree vertex to two");
    }
    auto swapped = [](VertexKind k) {
        if (k == VertexKind::Dot) return VertexKind::Antidot;
        if (k == VertexKind::Antidot) return VertexKind::Dot;
        return k;
    };
    // brute-force extension of the anchor to a tree isomorphism
    std::vector<VertexId> v1(t1.vertices.begin(), t1.vertices.end());
    std::vector<VertexId> v2(t2.vertices.begin(), t2.vertices.end());
    std::map<VertexId, VertexId> m = anchor;
    std::set<VertexId> used;
    for (auto& [a, b] : anchor) used.insert(b);
    auto edge_set = [&](const Skeleton& s, const TreeSpec& t) {
        std::set<std::pair<VertexId, VertexId>> es;
        for (auto e : t.edges) {
            VertexId a = s.vertex_of(s.edge(e).tail), b = s.vertex_of(s.edge(e).head);
            es.insert({std::min(a, b), std::max(a, b)});
        }
        return es;
    };
    auto es1 = edge_set(s1, t1), es2 = edge_set(s2, t2);

    std::function<bool(size_t)> go = [&](size_t i) -> bool {
        if (i == v1.size()) {
            for (auto& [a, b] : es1) {
                VertexId x = m.at(a), y = m.at(b);
                if (!es2.count({std::min(x, y), std::max(x, y)})) return false;
            }
            return true;
        }
        VertexId a = v1[i];
        if (m.count(a)) return go(i + 1);
        for (VertexId b : v2) {
            if (used.count(b)) continue;
            if (s2.vertex(b).kind != swapped(s1.vertex(a).kind)) continue;
            m[a] = b;
            used.insert(b);
            if (go(i + 1)) return true;
            m.erase(a);
            used.erase(b);
        }
        return false;
    };
    if (!go(0))
        throw std::invalid_argument("trees are not isomorphic with dots matched to antidots");
}

}  // namespace detail

struct TreeConnectResult {
    SkeletonPtr skeleton;
    int vertex_offset = 0, edge_offset = 0, half_offset = 0;  // applied to s2 ids
    std::vector<VertexId> new_dots;  // one per leaf pair, in pairing order
};

// Tree connected sum: delete both trees, join leaf half-edges in pairs through
// new dot vertices. Pairing gives (half-edge in s1, half-edge in s2) in s2's
// original ids.
inline TreeConnectResult tree_connected_sum(
    const Skeleton& s1, const TreeSpec& t1, const Skeleton& s2, const TreeSpec& t2,
    const std::vector<std::pair<HalfEdgeId, HalfEdgeId>>& pairing) {
    detail::check_tree(s1, t1);
    detail::check_tree(s2, t2);
    auto l1 = tree_leaves(s1, t1), l2 = tree_leaves(s2, t2);
    if (pairing.size() != l1.size() || l1.size() != l2.size())
        throw std::invalid_argument("leaf pairing size mismatch");
    {
        std::set<HalfEdgeId> a, b;
        for (auto& [x, y] : pairing) { a.insert(x); b.insert(y); }
        if (a != std::set<HalfEdgeId>(l1.begin(), l1.end()) ||
            b != std::set<HalfEdgeId>(l2.begin(), l2.end()))
            throw std::invalid_argument("leaf pairing does not cover the leaves");
    }
    detail::check_tree_match(s1, t1, s2, t2, pairing);

    TreeConnectResult res;
    res.vertex_offset = s1.max_vertex_id();
    res.edge_offset = s1.max_edge_id();
    res.half_offset = s1.max_half_id();

    std::map<VertexId, Vertex> vs = s1.vertices();
    std::map<EdgeId, Edge> es = s1.edges();
    std::map<EdgeId, bool> cs = s1.circles();
    for (auto& [id, v] : s2.vertices()) {
        Vertex nv = v;
        for (auto& h : nv.halves) h += res.half_offset;
        vs[id + res.vertex_offset] = nv;
    }
    for (auto& [id, ed] : s2.edges())
        es[id + res.edge_offset] = {ed.tail + res.half_offset, ed.head + res.half_offset};
    for (auto& [id, b] : s2.circles()) cs[id + res.edge_offset] = b;

    for (auto v : t1.vertices) vs.erase(v);
    for (auto e : t1.edges) es.erase(e);
    for (auto v : t2.vertices) vs.erase(v + res.vertex_offset);
    for (auto e : t2.edges) es.erase(e + res.edge_offset);

    int freshV = 0;
    for (auto& [id, v] : vs) freshV = std::max(freshV, id);
    freshV = std::max(freshV, res.vertex_offset + (s2.vertices().empty() ? 0 : s2.max_vertex_id()));
    ++freshV;
    for (auto& [h1, h2] : pairing) {
        VertexId d = freshV++;
        vs[d] = {VertexKind::Dot, {h1, h2 + res.half_offset}};
        res.new_dots.push_back(d);
    }
    res.skeleton = make_skeleton(std::move(vs), std::move(es), std::move(cs));
    return res;
}

struct CancelResult {
    SkeletonPtr skeleton;
    std::vector<Fusion> fusions;
};

// Cancel an adjacent dot/antidot pair; the fused edge orientations must agree.
inline CancelResult cancel(const Skeleton& s, VertexId d, VertexId a) {
    if (s.vertex(d).kind != VertexKind::Dot) throw std::invalid_argument("not a dot");
    if (s.vertex(a).kind != VertexKind::Antidot) throw std::invalid_argument("not an antidot");
    bool adjacent = false;
    for (auto h : s.vertex(d).halves) {
        auto [e, is_head] = s.edge_end_of(h);
        const Edge& ed = s.edge(e);
        VertexId other = s.vertex_of(is_head ? ed.tail : ed.head);
        if (other == a) adjacent = true;
    }
    if (!adjacent) throw std::invalid_argument("dot and antidot are not adjacent");

    detail::Surgery surg(s);
    surg.vertices.erase(d);
    surg.vertices.erase(a);
    for (VertexId w : {d, a}) {
        const auto& halves = s.vertex(w).halves;
        bool in0 = s.edge_end_of(halves[0]).second;
        bool in1 = s.edge_end_of(halves[1]).second;
        if (in0 == in1) throw std::invalid_argument("orientation mismatch at cancel");
        if (in0) surg.bond(s, halves[0], halves[1]);
        else surg.bond(s, halves[1], halves[0]);
    }
    auto [skel, fus] = surg.finish();
    return {skel, fus};
}

// Graph-theoretic bridge test.
inline bool is_bridge(const Skeleton& s, EdgeId e) {
    if (s.is_circle(e)) return false;
    const Edge& ed = s.edge(e);
    VertexId u = s.vertex_of(ed.tail), v = s.vertex_of(ed.head);
    if (u == v) return false;
    // BFS from u avoiding e
    std::set<VertexId> seen{u};
    std::vector<VertexId> queue{u};
    while (!queue.empty()) {
        VertexId w = queue.back();
        queue.pop_back();
        for (auto h : s.vertex(w).halves) {
            auto [f, is_head] = s.edge_end_of(h);
            if (f == e) continue;
            const Edge& fe = s.edge(f);
            VertexId o = s.vertex_of(is_head ? fe.tail : fe.head);
            if (seen.insert(o).second) queue.push_back(o);
        }
    }
    return !seen.count(v);
}

struct SkeletonIso {
    std::map<VertexId, VertexId> vertex_map;
    std::map<EdgeId, EdgeId> edge_map;     // includes circles
    std::map<HalfEdgeId, HalfEdgeId> half_map;
};

// Brute-force isomorphism search respecting vertex kinds, edge orientations,
// trivalent cyclic orders, and circle orientation bits. Inputs are tiny.
// respect_cyclic=false relaxes to plain graph isomorphism (all permutations of
// the half-edges at a vertex); chord diagram spaces only see the graph, so
// graph-level identities from unzip surgeries are checked in that mode.
inline std::optional<SkeletonIso> skeletons_isomorphic(const Skeleton& s1, const Skeleton& s2,
                                                       bool respect_cyclic = true) {
    if (s1.vertices().size() != s2.vertices().size() || s1.edges().size() != s2.edges().size() ||
        s1.circles().size() != s2.circles().size())
        return std::nullopt;
    {
        std::multiset<bool> b1, b2;
        for (auto& [id, b] : s1.circles()) b1.insert(b);
        for (auto& [id, b] : s2.circles()) b2.insert(b);
        if (b1 != b2) return std::nullopt;
    }
    std::vector<VertexId> v1;
    for (auto& [id, v] : s1.vertices()) v1.push_back(id);
    std::vector<VertexId> v2;
    for (auto& [id, v] : s2.vertices()) v2.push_back(id);

    std::map<VertexId, VertexId> vmap;
    std::map<HalfEdgeId, HalfEdgeId> hmap;
    std::set<VertexId> used;

    auto edges_ok = [&](HalfEdgeId h) {
        // if both halves of h's edge are mapped, the image must be an edge of s2
        auto [e, is_head] = s1.edge_end_of(h);
        const Edge& ed = s1.edge(e);
        auto t = hmap.find(ed.tail);
        auto hh = hmap.find(ed.head);
        if (t == hmap.end() || hh == hmap.end()) return true;
        for (auto& [id2, e2] : s2.edges())
            if (e2.tail == t->second && e2.head == hh->second) return true;
        return false;
    };

    std::function<bool(size_t)> go = [&](size_t i) -> bool {
        if (i == v1.size()) return true;
        VertexId a = v1[i];
        const Vertex& va = s1.vertex(a);
        for (VertexId b : v2) {
            if (used.count(b)) continue;
            const Vertex& vb = s2.vertex(b);
            if (vb.kind != va.kind) continue;
            size_t n = va.halves.size();
            // candidate half assignments: rotations for trivalent, both orders
            // for bivalent, identity for boundary
            std::vector<std::vector<int>> perms;
            if (n == 3) {
                perms = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
                if (!respect_cyclic)
                    perms.insert(perms.end(), {{0, 2, 1}, {2, 1, 0}, {1, 0, 2}});
            } else if (n == 2) {
                perms = {{0, 1}, {1, 0}};
            } else {
                perms = {{0}};
            }
            for (auto& p : perms) {
                bool ok = true;
                std::vector<HalfEdgeId> placed;
                for (size_t k = 0; k < n && ok; ++k) {
                    HalfEdgeId ha = va.halves[k], hb = vb.halves[p[k]];
                    hmap[ha] = hb;
                    placed.push_back(ha);
                    if (!edges_ok(ha)) ok = false;
                }
                if (ok) {
                    vmap[a] = b;
                    used.insert(b);
                    if (go(i + 1)) return true;
                    vmap.erase(a);
                    used.erase(b);
                }
                for (auto ha : placed) hmap.erase(ha);
            }
        }
        return false;
    };
    if (!go(0)) return std::nullopt;

    SkeletonIso iso;
    iso.vertex_map = vmap;
    iso.half_map = hmap;
    for (auto& [id, e] : s1.edges()) {
        for (auto& [id2, e2] : s2.edges())
            if (e2.tail == hmap.at(e.tail) && e2.head == hmap.at(e.head)) iso.edge_map[id] = id2;
    }
    // circles matched by orientation bit, ascending ids within each bit class
    std::vector<EdgeId> c1t, c1f, c2t, c2f;
    for (auto& [id, b] : s1.circles()) (b ? c1t : c1f).push_back(id);
    for (auto& [id, b] : s2.circles()) (b ? c2t : c2f).push_back(id);
    for (size_t i = 0; i < c1t.size(); ++i) iso.edge_map[c1t[i]] = c2t[i];
    for (size_t i = 0; i < c1f.size(); ++i) iso.edge_map[c1f[i]] = c2f[i];
    return iso;
}

// ---------------------------------------------------------------------------
// Text format

inline SkeletonPtr parse_skeleton(const std::string& text) {
    std::map<VertexId, Vertex> vs;
    std::map<EdgeId, Edge> es;
    std::map<EdgeId, bool> cs;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        auto fail = [&](const std::string& why) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": " + why);
        };
        if (word == "vertex") {
            int id;
            std::string kind;
            if (!(ls >> id >> kind)) fail("expected: vertex <id> <kind> <halves...>");
            Vertex v;
            int want;
            if (kind == "trivalent") { v.kind = VertexKind::Trivalent; want = 3; }
            else if (kind == "dot") { v.kind = VertexKind::Dot; want = 2; }
            else if (kind == "antidot") { v.kind = VertexKind::Antidot; want = 2; }
            else if (kind == "boundary") { v.kind = VertexKind::Boundary; want = 1; }
            else { fail("unknown vertex kind '" + kind + "'"); return nullptr; }
            for (int i = 0; i < want; ++i) {
                int h;
                if (!(ls >> h)) fail("missing half-edge id");
                v.halves.push_back(h);
            }
            if (!vs.emplace(id, v).second) fail("duplicate vertex id");
        } else if (word == "edge") {
            int id, t, h;
            if (!(ls >> id >> t >> h)) fail("expected: edge <id> <tail-half> <head-half>");
            if (!es.emplace(id, Edge{t, h}).second) fail("duplicate edge id");
        } else if (word == "circle") {
            int id;
            if (!(ls >> id)) fail("expected: circle <id>");
            std::string flag;
            bool rev = false;
            if (ls >> flag) {
                if (flag == "reversed") rev = true;
                else fail("unknown circle flag '" + flag + "'");
            }
            if (!cs.emplace(id, rev).second) fail("duplicate circle id");
        } else {
            fail("unknown record '" + word + "'");
        }
    }
    try {
        return make_skeleton(std::move(vs), std::move(es), std::move(cs));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("skeleton not well-formed: ") + e.what());
    }
}

// Built-in name or "strands(n)".
inline SkeletonPtr skeleton_by_name(const std::string& name) {
    if (name == "circle") return circle_skeleton();
    if (name == "theta") return theta_skeleton();
    if (name == "dumbbell") return dumbbell_skeleton();
    if (name == "tetrahedron" || name == "tetrahedron_twisted") return tetrahedron_skeleton();
    if (name == "crossed_circle") return crossed_circle_skeleton();
    if (name == "triple_crossed_circle") return triple_crossed_circle_skeleton();
    if (name == "triple_crossed_theta") return triple_crossed_theta_skeleton();
    if (name == "quad_crossed_dumbbell") return quad_crossed_dumbbell_skeleton();
    if (name.rfind("strands(", 0) == 0 && name.back() == ')') {
        int n = std::stoi(name.substr(8, name.size() - 9));
        return strands_skeleton(n);
    }
    throw std::invalid_argument("unknown skeleton name '" + name + "'");
}

}  // namespace ktg
