#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ktg/diagram.hpp"
#include "ktg/io.hpp"

#include <functional>
#include <set>
#include <sstream>

using namespace ktg;

TEST_CASE("canonicalization is idempotent and order-insensitive") {
    auto s = strands_skeleton(2);
    ChordDiagram a(s, {{{1, 0}, {2, 0}}, {{1, 1}, {2, 1}}});
    ChordDiagram b(s, {{{2, 1}, {1, 1}}, {{2, 0}, {1, 0}}});
    CHECK(a == b);
    ChordDiagram c(s, a.chords());
    CHECK(c == a);
}

TEST_CASE("slots on circles are rotation classes") {
    auto s = circle_skeleton();
    // two chords on one circle: rotations of the matching identify diagrams
    ChordDiagram a(s, {{{1, 0}, {1, 1}}, {{1, 2}, {1, 3}}});
    ChordDiagram b(s, {{{1, 1}, {1, 2}}, {{1, 3}, {1, 0}}});
    CHECK(a == b);  // both are the "adjacent pairs" rotation class
    ChordDiagram crossing(s, {{{1, 0}, {1, 2}}, {{1, 1}, {1, 3}}});
    CHECK_FALSE(a == crossing);
}

TEST_CASE("diagram validation") {
    auto s = strands_skeleton(2);
    CHECK_THROWS_AS(ChordDiagram(s, {{{1, 0}, {1, 0}}}), std::invalid_argument);  // shared slot
    CHECK_THROWS_AS(ChordDiagram(s, {{{1, 0}, {1, 2}}}), std::invalid_argument);  // gap at 1
    CHECK_THROWS_AS(ChordDiagram(s, {{{1, 0}, {9, 0}}}), std::invalid_argument);  // unknown edge
}

TEST_CASE("enumeration: stated counts") {
    CHECK(enumerate_diagrams(strands_skeleton(2), 1).size() == 3);  // t11, t12, t22
    CHECK(enumerate_diagrams(strands_skeleton(1), 2).size() == 3);
    CHECK(enumerate_diagrams(theta_skeleton(), 0).size() == 1);
    CHECK(enumerate_diagrams(circle_skeleton(), 0).size() == 1);
    CHECK(enumerate_diagrams(circle_skeleton(), 1).size() == 1);
}

// independent oracle: place 2n labeled points in every interleaving, match
// them in every way, canonicalize and dedupe
static size_t oracle_count(const SkeletonPtr& s, int n) {
    std::vector<EdgeId> edges = s->slot_edges();
    std::set<ChordDiagram> seen;
    std::vector<std::pair<EdgeId, int>> placed;  // (edge, slot) per labeled point
    std::map<EdgeId, int> used;
    std::function<void(int)> place = [&](int k) {
        if (k == 2 * n) {
            // all matchings of the labeled points
            std::vector<int> pts(2 * n);
            std::vector<bool> taken(2 * n, false);
            std::vector<Chord> cur;
            std::function<void()> match = [&]() {
                int first = -1;
                for (int i = 0; i < 2 * n; ++i)
                    if (!taken[i]) { first = i; break; }
                if (first < 0) {
                    seen.insert(ChordDiagram(s, cur));
                    return;
                }
                taken[first] = true;
                for (int j = first + 1; j < 2 * n; ++j) {
                    if (taken[j]) continue;
                    taken[j] = true;
                    cur.push_back({{placed[first].first, placed[first].second},
                                   {placed[j].first, placed[j].second}});
                    match();
                    cur.pop_back();
                    taken[j] = false;
                }
                taken[first] = false;
            };
            match();
            return;
        }
        for (auto e : edges) {
            // labeled point k goes after all current points on e
            placed.push_back({e, used[e]});
            ++used[e];
            place(k + 1);
            --used[e];
            placed.pop_back();
        }
    };
    place(0);
    return seen.size();
}

TEST_CASE("enumeration agrees with the naive generate-and-dedupe oracle") {
    for (int n = 0; n <= 3; ++n) {
        CHECK(enumerate_diagrams(circle_skeleton(), n).size() == oracle_count(circle_skeleton(), n));
        if (n <= 2)
            CHECK(enumerate_diagrams(theta_skeleton(), n).size() ==
                  oracle_count(theta_skeleton(), n));
    }
    for (int strands = 1; strands <= 4; ++strands) {
        auto s = strands_skeleton(strands);
        for (int n = 0; n <= (strands <= 2 ? 3 : 2); ++n)
            CHECK(enumerate_diagrams(s, n).size() == oracle_count(s, n));
    }
    // theta degree 3 against the oracle
    CHECK(enumerate_diagrams(theta_skeleton(), 3).size() == oracle_count(theta_skeleton(), 3));
}

TEST_CASE("linear combination arithmetic") {
    auto s = strands_skeleton(2);
    ChordDiagram d(s, {{{1, 0}, {2, 0}}});
    RatComb v(d);
    CHECK((v + (Rational(-1) * v)).is_zero());
    CHECK(Rational(1, 2) * v + Rational(1, 2) * v == v);
    RatComb mixed = v + RatComb(empty_diagram(s), Rational(3));
    CHECK(mixed.degree_part(1) == v);
    CHECK(mixed.degree_part(0).support_size() == 1);
    CHECK(mixed.degree_part(2).is_zero());
    CHECK_FALSE(mixed.is_homogeneous());
    CHECK(v.is_homogeneous());

    RatComb other(ChordDiagram(strands_skeleton(3), {{{1, 0}, {2, 0}}}));
    CHECK_THROWS_AS((void)(v + other), std::invalid_argument);
}

TEST_CASE("text formats round trip") {
    auto s = strands_skeleton(2);
    ChordDiagram d(s, {{{1, 0}, {2, 0}}, {{2, 1}, {2, 2}}});
    CHECK(parse_diagram_inline(s, diagram_inline(d)) == d);
    CHECK(parse_diagram_inline(s, "empty") == empty_diagram(s));

    RatComb v = Rational(3, 7) * RatComb(d) + RatComb(empty_diagram(s), Rational(-2));
    std::istringstream in(lincomb_lines(v));
    int lineno = 0;
    CHECK(parse_lincomb_lines(s, in, lineno) == v);

    Series<Rational> ser(2, 3);
    ser.set_part(1, t(1, 2, 2));
    ser.set_part(2, stack(t(1, 1, 2), t(2, 2, 2)));
    std::istringstream sin(series_file(ser));
    CHECK(parse_series(sin) == ser);

    std::istringstream gin("skeleton theta maxdeg 2\n1 | 2:0-3:0\n");
    auto g = parse_graded_element(gin);
    CHECK(g.skeleton()->edges().size() == 3);
    CHECK(!g.part(1).is_zero());

    std::istringstream bad("skeleton theta\n1 + 2:0-3:0\n");
    CHECK_THROWS_AS((void)parse_graded_element(bad), std::invalid_argument);
}
