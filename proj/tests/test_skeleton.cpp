#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ktg/skeleton.hpp"

using namespace ktg;

#include "composites.hpp"

using namespace ktg_testing;

TEST_CASE("named constants are well-formed and distinct") {
    for (auto name : {"circle", "theta", "dumbbell", "tetrahedron", "crossed_circle",
                      "triple_crossed_circle", "triple_crossed_theta", "quad_crossed_dumbbell"}) {
        auto s = skeleton_by_name(name);
        CHECK(s != nullptr);
    }
    CHECK(skeleton_by_name("strands(3)")->edges().size() == 3);
    CHECK_THROWS_AS(skeleton_by_name("nonsense"), std::invalid_argument);
    CHECK_FALSE(skeletons_isomorphic(*theta_skeleton(), *dumbbell_skeleton()).has_value());
}

TEST_CASE("text format round trip and parse errors") {
    for (auto name : {"theta", "dumbbell", "tetrahedron", "triple_crossed_theta"}) {
        auto s = skeleton_by_name(name);
        auto back = parse_skeleton(s->to_text());
        CHECK(*back == *s);
    }
    try {
        parse_skeleton("vertex 1 trivalent 1 2");
        FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_skeleton("edge 1 10 11"), std::invalid_argument);  // dangling halves
    CHECK_THROWS_AS(parse_skeleton("frob 1"), std::invalid_argument);
}

TEST_CASE("switch is an involution; circles carry an orientation bit") {
    auto th = theta_skeleton();
    auto once = switch_edge(*th, 2);
    CHECK_FALSE(*once == *th);
    CHECK(*switch_edge(*once, 2) == *th);

    auto c = circle_skeleton();
    auto flipped = switch_edge(*c, 1);
    CHECK(flipped->circles().at(1) == true);
    CHECK(*switch_edge(*flipped, 1) == *c);
    CHECK(skeletons_isomorphic(*c, *c).has_value());
    CHECK_THROWS_AS(switch_edge(*th, 9), std::invalid_argument);
}

TEST_CASE("delete: theta yields a circle, tetrahedron yields a theta") {
    // theta needs one arc switched so the endpoints see one-in-one-out
    auto th = switch_edge(*theta_skeleton(), 2);
    auto res = delete_edge(*th, 1);
    CHECK(res.skeleton->vertices().empty());
    CHECK(res.skeleton->circles().size() == 1);

    auto te = switch_edge(*tetrahedron_skeleton(), 3);
    auto res2 = delete_edge(*te, 4);
    CHECK(skeletons_isomorphic(*res2.skeleton, *theta_skeleton(), false).has_value());

    CHECK_THROWS_AS(delete_edge(*theta_skeleton(), 1), std::invalid_argument);  // both in
    auto db = dumbbell_skeleton();
    CHECK_THROWS_AS(delete_edge(*db, 1), std::invalid_argument);  // loop
    // deleting the dumbbell bridge closes both loops into circles
    auto res3 = delete_edge(*db, 2);
    CHECK(res3.skeleton->circles().size() == 2);
}

TEST_CASE("unzip: theta to two circles, tetrahedron to the dumbbell") {
    auto uz = unzip_edge(*theta_skeleton(), 1);
    CHECK(uz.skeleton->vertices().empty());
    CHECK(uz.skeleton->circles().size() == 2);

    auto sw = switch_edge(*tetrahedron_skeleton(), 1);
    auto uz2 = unzip_edge(*sw, 2);
    CHECK(skeletons_isomorphic(*uz2.skeleton, *dumbbell_skeleton(), false).has_value());

    CHECK_THROWS_AS(unzip_edge(*tetrahedron_skeleton(), 2), std::invalid_argument);
    CHECK_THROWS_AS(unzip_edge(*dumbbell_skeleton(), 2), std::invalid_argument);
}

TEST_CASE("dotted unzip of the middle edge of a fully dotted theta") {
    // theta with one dot per edge: the sub-structure of links fused at a theta
    auto s = marked_theta(VertexKind::Dot);
    // segments of the original edge 1: the dot on it was inserted first
    auto [path, interior] = edge_path(*s, 4);  // 4 = first inserted segment id
    CHECK(path.size() == 2);
    auto res = dotted_unzip(*s, path.front());
    // the two side edges fuse into circles through the side dots; each circle
    // carries two dots (its own plus the daughter's)
    CHECK(res.skeleton->vertices().size() == 4);
    for (auto& [id, v] : res.skeleton->vertices()) CHECK(v.kind == VertexKind::Dot);
    CHECK(res.skeleton->edges().size() == 4);
    // two components, each a 2-dot cycle
    auto iso = skeletons_isomorphic(*res.skeleton, *res.skeleton);
    CHECK(iso.has_value());

    CHECK_THROWS_AS(dotted_unzip(*theta_skeleton(), 1), std::invalid_argument);
}

TEST_CASE("connected sum: circle # circle is the dumbbell") {
    auto cc = connected_sum(*circle_skeleton(), 1, *circle_skeleton(), 1);
    CHECK(skeletons_isomorphic(*cc.skeleton, *dumbbell_skeleton()).has_value());

    auto tc = connected_sum(*theta_skeleton(), 1, *circle_skeleton(), 1);
    // two original trivalent vertices plus the two new attachment vertices
    int trivalent = 0;
    for (auto& [id, v] : tc.skeleton->vertices())
        if (v.kind == VertexKind::Trivalent) ++trivalent;
    CHECK(trivalent == 2 + 0 + 2);
    // counting: theta's chosen edge splits in two, the circle becomes a loop,
    // plus the new bridge
    CHECK(tc.skeleton->edges().size() == 6);
    CHECK(tc.skeleton->circles().empty());

    auto tt = connected_sum(*tetrahedron_skeleton(), 1, *tetrahedron_skeleton(), 1);
    trivalent = 0;
    for (auto& [id, v] : tt.skeleton->vertices())
        if (v.kind == VertexKind::Trivalent) ++trivalent;
    CHECK(trivalent == 4 + 4 + 2);
}

TEST_CASE("cancel removes an adjacent dot/antidot pair") {
    // circle with one dot and one antidot
    auto s1 = insert_bivalent(*circle_skeleton(), 1, VertexKind::Dot);
    auto s2 = insert_bivalent(*s1.skeleton, s1.in_segment, VertexKind::Antidot);
    auto res = cancel(*s2.skeleton, s1.vertex, s2.vertex);
    CHECK(skeletons_isomorphic(*res.skeleton, *circle_skeleton()).has_value());

    CHECK_THROWS_AS(cancel(*s2.skeleton, s2.vertex, s1.vertex), std::invalid_argument);
}

TEST_CASE("bridges") {
    CHECK(is_bridge(*dumbbell_skeleton(), 2));
    CHECK_FALSE(is_bridge(*dumbbell_skeleton(), 1));
    for (EdgeId e : {1, 2, 3}) CHECK_FALSE(is_bridge(*theta_skeleton(), e));
    for (EdgeId e : {1, 2, 3, 4, 5, 6}) CHECK_FALSE(is_bridge(*tetrahedron_skeleton(), e));
}

TEST_CASE("isomorphism finds relabelings and respects structure") {
    // relabel the theta
    std::map<VertexId, Vertex> vs{
        {7, {VertexKind::Trivalent, {100, 210, 310}}},
        {9, {VertexKind::Trivalent, {110, 300, 200}}},
    };
    std::map<EdgeId, Edge> es{{4, {100, 110}}, {6, {200, 210}}, {8, {300, 310}}};
    auto relabeled = make_skeleton(std::move(vs), std::move(es));
    auto iso = skeletons_isomorphic(*theta_skeleton(), *relabeled);
    REQUIRE(iso.has_value());
    CHECK(iso->edge_map.at(1) == 4);

    // orientation-sensitive: the circle's orientation bit is preserved
    CHECK_FALSE(
        skeletons_isomorphic(*circle_skeleton(), *switch_edge(*circle_skeleton(), 1)).has_value());
    // a theta with one arc reversed is still a theta (exchange the vertices)
    CHECK(skeletons_isomorphic(*theta_skeleton(), *switch_edge(*theta_skeleton(), 2)).has_value());
}

TEST_CASE("structural identity: unzip as a tree connected sum composite") {
    auto th = theta_skeleton();
    auto direct = unzip_edge(*th, 1).skeleton;
    auto via = unzip_via_trees(th, 1);
    CHECK(skeletons_isomorphic(*direct, *via).has_value());

    auto te = switch_edge(*tetrahedron_skeleton(), 1);
    auto direct2 = unzip_edge(*te, 2).skeleton;
    auto via2 = unzip_via_trees(te, 2);
    CHECK(skeletons_isomorphic(*direct2, *via2).has_value());
}

TEST_CASE("structural identity: delete as a tree connected sum composite") {
    auto th = switch_edge(*theta_skeleton(), 2);
    CHECK(skeletons_isomorphic(*delete_edge(*th, 1).skeleton, *delete_via_trees(th, 1))
              .has_value());

    auto te = switch_edge(*tetrahedron_skeleton(), 3);
    CHECK(skeletons_isomorphic(*delete_edge(*te, 4).skeleton, *delete_via_trees(te, 4))
              .has_value());
}

TEST_CASE("structural identity: edge connected sum routes agree") {
    auto a = edge_cs_via_unzip(theta_skeleton(), 2, theta_skeleton(), 3);
    auto b = edge_cs_via_dots(theta_skeleton(), 2, theta_skeleton(), 3);
    CHECK(skeletons_isomorphic(*a, *b).has_value());

    auto a2 = edge_cs_via_unzip(tetrahedron_skeleton(), 1, theta_skeleton(), 2);
    auto b2 = edge_cs_via_dots(tetrahedron_skeleton(), 1, theta_skeleton(), 2);
    CHECK(skeletons_isomorphic(*a2, *b2).has_value());
}

TEST_CASE("structural identity: vertex connected sum of two thetas is a dotted theta") {
    auto th = theta_skeleton();
    // delete one trivalent vertex from each and join the ends edge-to-edge
    auto res = tree_connected_sum(*th, {{2}, {}}, *th, {{1}, {}},
                                  {{11, 10}, {20, 21}, {30, 31}});
    CHECK(skeletons_isomorphic(*res.skeleton, *marked_theta(VertexKind::Dot)).has_value());
}

TEST_CASE("structural identity: dotted unzip as a tree connected sum composite") {
    auto s = insert_bivalent(*theta_skeleton(), 1, VertexKind::Dot);
    auto direct = dotted_unzip(*s.skeleton, s.in_segment).skeleton;
    auto via = dotted_unzip_via_trees(s.skeleton, s.in_segment);
    CHECK(skeletons_isomorphic(*direct, *via).has_value());
}

TEST_CASE("structural identity: dotted edge connected sum as a single-dot tree sum") {
    auto s1 = insert_bivalent(*theta_skeleton(), 2, VertexKind::Dot);
    auto s2 = insert_bivalent(*circle_skeleton(), 1, VertexKind::Dot);
    // leaves of the one-vertex trees: the dot halves (in, out)
    auto halves1 = s1.skeleton->vertex(s1.vertex).halves;
    auto halves2 = s2.skeleton->vertex(s2.vertex).halves;
    auto hin = [&](const SkeletonPtr& s, const std::vector<HalfEdgeId>& hs) {
        return s->edge_end_of(hs[0]).second ? hs[0] : hs[1];
    };
    auto hout = [&](const SkeletonPtr& s, const std::vector<HalfEdgeId>& hs) {
        return s->edge_end_of(hs[0]).second ? hs[1] : hs[0];
    };
    auto via = tree_connected_sum(
        *s1.skeleton, {{s1.vertex}, {}}, *s2.skeleton, {{s2.vertex}, {}},
        {{hin(s1.skeleton, halves1), hout(s2.skeleton, halves2)},
         {hout(s1.skeleton, halves1), hin(s2.skeleton, halves2)}});
    auto direct = dotted_edge_connected_sum(*theta_skeleton(), 2, *circle_skeleton(), 1);
    CHECK(skeletons_isomorphic(*direct.skeleton, *via.skeleton).has_value());
}

TEST_CASE("tree connected sum validation") {
    auto th = theta_skeleton();
    // not a tree: two disconnected vertices
    CHECK_THROWS_AS(
        tree_connected_sum(*th, {{1, 2}, {}}, *th, {{1, 2}, {}}, {}),
        std::invalid_argument);
    // wrong pairing size
    CHECK_THROWS_AS(tree_connected_sum(*th, {{2}, {}}, *th, {{1}, {}}, {{11, 10}}),
                    std::invalid_argument);
}
