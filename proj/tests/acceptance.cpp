// Acceptance suite: one pass/fail line per criterion, exact arithmetic
// throughout, nonzero exit if anything fails.

#include "ktg/ktg.hpp"

#include "composites.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <vector>

using namespace ktg;

namespace {

int failures = 0;

void report(int idx, const std::string& what, bool ok, double seconds) {
    std::cout << "criterion " << idx << ": " << (ok ? "PASS" : "FAIL") << " (" << seconds
              << " s) - " << what << "\n";
    if (!ok) ++failures;
}

template <class F>
void criterion(int idx, const std::string& what, F&& body) {
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body();
    } catch (const std::exception& e) {
        std::cout << "  exception: " << e.what() << "\n";
        ok = false;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(idx, what, ok, secs);
}

Series<Rational> phi_star() {
    auto comm = stack(t(1, 2, 3), t(2, 3, 3)) - stack(t(2, 3, 3), t(1, 2, 3));
    Series<Rational> phi = Series<Rational>::one(3, 2);
    phi.set_part(2, Rational(-1, 24) * comm);
    return phi;
}

GradedElement<Rational> single(const SkeletonPtr& s, const ChordDiagram& d) {
    GradedElement<Rational> v(s, 2);
    v.set_part(d.degree(), RatComb(d));
    return v;
}

GradedElement<Rational> raw_single(const SkeletonPtr& s, const ChordDiagram& d) {
    GradedElement<Rational> v(s, 2);
    v.set_part_raw(d.degree(), RatComb(d));
    return v;
}

// reduce(op(raw)) == reduce(op(reduce(raw))) over every diagram of degree <= 2
bool unary_descent(const SkeletonPtr& s,
                   const std::function<GradedElement<Rational>(const GradedElement<Rational>&)>& op) {
    for (int deg = 0; deg <= 2; ++deg) {
        for (auto& d : enumerate_diagrams(s, deg)) {
            auto a = reduce_element(op(raw_single(s, d)));
            auto b = reduce_element(op(single(s, d)));
            if (!(a == b)) return false;
        }
    }
    return true;
}

bool binary_descent(
    const SkeletonPtr& s1, const SkeletonPtr& s2,
    const std::function<GradedElement<Rational>(const GradedElement<Rational>&,
                                                const GradedElement<Rational>&)>& op) {
    for (int d1 = 0; d1 <= 2; ++d1) {
        for (auto& a : enumerate_diagrams(s1, d1)) {
            for (int d2 = 0; d2 + d1 <= 2; ++d2) {
                for (auto& b : enumerate_diagrams(s2, d2)) {
                    auto raw = reduce_element(op(raw_single(s1, a), raw_single(s2, b)));
                    auto red = reduce_element(op(single(s1, a), single(s2, b)));
                    if (!(raw == red)) return false;
                }
            }
        }
    }
    return true;
}

}  // namespace

int main() {
    criterion(1, "degree-2 solution family: dimension 2, constraint beta+gamma = -1/24", [] {
        auto fam = solve_degree2();
        return fam.affine_dimension == 2 && fam.matches_display && fam.degree1_dimension == 0;
    });

    criterion(2, "nonexistence certificate: nonzero on the whole constraint plane", [] {
        auto cert = nonexistence_certificate();
        std::cout << "  zero avoided on the plane: " << (cert.zero_avoided ? "yes" : "no")
                  << "; alpha term exact: " << (cert.alpha_term_exact ? "yes" : "no")
                  << "; display matched exactly: "
                  << (cert.display_matched_exactly ? "yes" : "no")
                  << "; after recorded basis change: "
                  << (cert.display_matched_up_to_basis_change ? "yes" : "no") << "\n";
        if (cert.x) std::cout << "  recomputed x: " << cert.x->str() << "\n";
        return cert.pass;
    });

    criterion(3, "phi* satisfies pentagon, hexagons, non-degeneracy and mirror symmetry", [] {
        auto phi = phi_star();
        auto R = r_matrix(2);
        if (!pentagon_residual(phi).is_zero()) return false;
        auto [h1, h2] = hexagon_residuals(phi, R);
        if (!h1.is_zero() || !h2.is_zero()) return false;
        for (int i = 1; i <= 3; ++i)
            if (!(d_strand(i, phi) == Series<Rational>::one(2, 2))) return false;
        return superscript(phi, "321") == inverse(phi);
    });

    criterion(4, "R^{21} = R through degree 4", [] {
        auto R = r_matrix(4);
        return superscript(R, "21") == R;
    });

    criterion(5, "bridge vanishing on the dumbbell through degree 2 (as stated)", [] {
        auto s = dumbbell_skeleton();
        bool all_vanish = true, one_sided_vanish = true;
        int survivors = 0;
        for (int n = 1; n <= 2; ++n) {
            auto q = quotient_basis(s, n);
            for (auto& d : q->all_diagrams()) {
                if (d.count_on(2) == 0) continue;
                bool zero = q->reduce(RatComb(d)).is_zero();
                bool one_sided = d.count_on(1) == 0 || d.count_on(3) == 0;
                if (!zero) {
                    all_vanish = false;
                    ++survivors;
                    if (one_sided) one_sided_vanish = false;
                }
            }
        }
        if (!all_vanish) {
            std::cout
                << "  " << survivors
                << " bridge diagrams whose chords tie both loops together do NOT vanish;\n"
                   "  each maps to the nonzero nested-vs-stacked class under the exactly\n"
                   "  verified two-strand presentation, which annihilates every generated\n"
                   "  4T and VI relation, so they are nonzero in the quotient. Every bridge\n"
                   "  diagram whose chords avoid one of the loops does vanish: "
                << (one_sided_vanish ? "verified" : "VIOLATED")
                << ".\n  The vanishing statement holds in the configurations the theory"
                   " uses\n  (juxtaposed sides), but not in the stated generality.\n";
        }
        return all_vanish;
    });

    criterion(6, "descent suite: switch, delete, unzip, connect, tree_connect", [] {
        auto circle = circle_skeleton();
        auto theta = theta_skeleton();
        auto dumbbell = dumbbell_skeleton();
        auto tetra = tetrahedron_skeleton();
        bool ok = true;

        // switch on every skeleton
        ok = ok && unary_descent(circle, [](auto& v) { return switch_op(1, v); });
        ok = ok && unary_descent(theta, [](auto& v) { return switch_op(1, v); });
        ok = ok && unary_descent(dumbbell, [](auto& v) { return switch_op(1, v); });
        ok = ok && unary_descent(dumbbell, [](auto& v) { return switch_op(2, v); });
        ok = ok && unary_descent(tetra, [](auto& v) { return switch_op(1, v); });
        if (!ok) { std::cout << "  switch descent failed\n"; return false; }

        // delete where defined: theta (one arc reversed), dumbbell bridge,
        // tetrahedron spoke (one triangle edge reversed)
        auto theta_sw = switch_edge(*theta, 2);
        ok = ok && unary_descent(theta_sw, [](auto& v) { return delete_op(1, v); });
        ok = ok && unary_descent(dumbbell, [](auto& v) { return delete_op(2, v); });
        auto tetra_sw3 = switch_edge(*tetra, 3);
        ok = ok && unary_descent(tetra_sw3, [](auto& v) { return delete_op(4, v); });
        if (!ok) { std::cout << "  delete descent failed\n"; return false; }

        // unzip where defined: theta directly, tetrahedron after switching
        // edge 1; no dumbbell edge is ever unzippable (loops)
        ok = ok && unary_descent(theta, [](auto& v) { return unzip_op(1, v); });
        auto tetra_sw1 = switch_edge(*tetra, 1);
        ok = ok && unary_descent(tetra_sw1, [](auto& v) { return unzip_op(2, v); });
        if (!ok) { std::cout << "  unzip descent failed\n"; return false; }

        // connect each skeleton with a circle (and circle with circle)
        for (auto s : {circle, theta, dumbbell, tetra}) {
            ok = ok && binary_descent(s, circle, [](auto& a, auto& b) {
                     return connect_op(1, 1, a, b);
                 });
            if (!ok) { std::cout << "  connect descent failed\n"; return false; }
        }

        // tree connected sums: vertex sums of theta/theta and dumbbell/dumbbell,
        // and the H-tree sum of the tetrahedron with a theta
        ok = ok && binary_descent(theta, theta, [](auto& a, auto& b) {
                 return tree_connect_op(a, {{2}, {}}, b, {{1}, {}},
                                        {{11, 10}, {20, 21}, {30, 31}});
             });
        if (!ok) { std::cout << "  theta tree_connect descent failed\n"; return false; }
        ok = ok && binary_descent(dumbbell, dumbbell, [](auto& a, auto& b) {
                 return tree_connect_op(a, {{1}, {}}, b, {{1}, {}},
                                        {{11, 10}, {20, 20}, {10, 11}});
             });
        if (!ok) { std::cout << "  dumbbell tree_connect descent failed\n"; return false; }
        ok = ok && binary_descent(tetra_sw1, theta, [&](auto& a, auto& b) {
                 // H-tree of edge 2 against the theta's middle edge
                 auto [xu, yu] = ktg::detail::flanks(*tetra_sw1, 2, 20);
                 auto [zv, wv] = ktg::detail::flanks(*tetra_sw1, 3, 21);
                 return tree_connect_op(a, {{2, 3}, {2}}, b, {{1, 2}, {1}},
                                        {{xu, 20}, {wv, 21}, {yu, 30}, {zv, 31}});
             });
        if (!ok) { std::cout << "  tetra tree_connect descent failed\n"; return false; }
        return ok;
    });

    criterion(7, "pullback suite: standard maps, order-3 symmetry, functoriality", [] {
        for (int n = 1; n <= 4; ++n) {
            auto s = strands_skeleton(n);
            for (int deg = 1; deg <= 2; ++deg) {
                for (auto& d : enumerate_diagrams(s, deg)) {
                    Series<Rational> v(n, 2);
                    v.set_part(deg, RatComb(d));
                    for (int i = 0; i <= n + 1; ++i)
                        if (!(delta(i, v) == pullback(doubling_word(i, n), v))) return false;
                    for (int i = 1; i <= n; ++i)
                        if (!(d_strand(i, v) == pullback(deletion_word(i, n), v))) return false;
                    if (!(switch_all(v) == pullback(switch_all_word(n), v))) return false;
                    std::vector<int> perm(n);
                    for (int i = 0; i < n; ++i) perm[i] = i + 1;
                    do {
                        if (!(permute(perm, v) == pullback(permutation_pullback_word(perm), v)))
                            return false;
                    } while (std::next_permutation(perm.begin(), perm.end()));
                }
            }
        }
        // beta5 has order 3 as a free group map and as an operator
        FreeGroupMap b5 = beta5_map();
        if (!compose(b5, compose(b5, b5)).free_reduced().is_identity()) return false;
        for (int deg = 1; deg <= 2; ++deg) {
            for (auto& d : enumerate_diagrams(strands_skeleton(3), deg)) {
                Series<Rational> v(3, 2);
                v.set_part(deg, RatComb(d));
                if (!(pullback(b5, pullback(b5, pullback(b5, v))) == v)) return false;
            }
        }
        // contravariant functoriality on 20 random composable pairs
        std::mt19937_64 rng(20260809);
        auto random_map = [&](int m, int n) {
            FreeGroupMap b;
            b.source_rank = m;
            b.target_rank = n;
            std::uniform_int_distribution<int> len(0, 3), gen(1, n), sgn(0, 1);
            for (int i = 0; i < m; ++i) {
                std::vector<Letter> w;
                int L = len(rng);
                for (int j = 0; j < L; ++j) w.push_back({gen(rng), sgn(rng) ? 1 : -1});
                b.words.push_back(w);
            }
            return b;
        };
        std::uniform_int_distribution<int> rank(1, 3);
        for (int trial = 0; trial < 20; ++trial) {
            int m = rank(rng), n = rank(rng), p = rank(rng);
            auto beta = random_map(m, n);
            auto gamma = random_map(n, p);
            auto comp = compose(gamma, beta);
            for (int deg = 1; deg <= 2; ++deg) {
                auto diags = enumerate_diagrams(strands_skeleton(p), deg);
                std::uniform_int_distribution<size_t> pick(0, diags.size() - 1);
                Series<Rational> v(p, 2);
                v.set_part(deg, RatComb(diags[pick(rng)]));
                if (!(pullback(comp, v) == pullback(beta, pullback(gamma, v)))) return false;
            }
        }
        return true;
    });

    criterion(8, "structural identities at the skeleton level", [] {
        using namespace ktg_testing;
        auto theta = theta_skeleton();
        auto tetra = tetrahedron_skeleton();
        bool ok = true;

        // unzip as tree connected sum composite, theta and tetrahedron inputs
        ok = ok && skeletons_isomorphic(*unzip_edge(*theta, 1).skeleton,
                                        *unzip_via_trees(theta, 1))
                       .has_value();
        auto tetra_sw1 = switch_edge(*tetra, 1);
        ok = ok && skeletons_isomorphic(*unzip_edge(*tetra_sw1, 2).skeleton,
                                        *unzip_via_trees(tetra_sw1, 2))
                       .has_value();
        if (!ok) { std::cout << "  unzip composite failed\n"; return false; }

        // delete as tree connected sum composite
        auto theta_sw = switch_edge(*theta, 2);
        ok = ok && skeletons_isomorphic(*delete_edge(*theta_sw, 1).skeleton,
                                        *delete_via_trees(theta_sw, 1))
                       .has_value();
        auto tetra_sw3 = switch_edge(*tetra, 3);
        ok = ok && skeletons_isomorphic(*delete_edge(*tetra_sw3, 4).skeleton,
                                        *delete_via_trees(tetra_sw3, 4))
                       .has_value();
        if (!ok) { std::cout << "  delete composite failed\n"; return false; }

        // edge connected sum: the two routes agree
        ok = ok && skeletons_isomorphic(*edge_cs_via_unzip(theta, 2, theta, 3),
                                        *edge_cs_via_dots(theta, 2, theta, 3))
                       .has_value();
        ok = ok && skeletons_isomorphic(*edge_cs_via_unzip(tetra, 1, theta, 2),
                                        *edge_cs_via_dots(tetra, 1, theta, 2))
                       .has_value();
        if (!ok) { std::cout << "  edge connected sum composite failed\n"; return false; }

        // vertex connected sum of two thetas is the dotted theta again
        auto vsum = tree_connected_sum(*theta, {{2}, {}}, *theta, {{1}, {}},
                                       {{11, 10}, {20, 21}, {30, 31}});
        ok = ok &&
             skeletons_isomorphic(*vsum.skeleton, *marked_theta(VertexKind::Dot)).has_value();
        if (!ok) { std::cout << "  theta vertex sum failed\n"; return false; }

        // dotted unzip and dotted edge connected sum recovered from tree sums
        auto dotted = insert_bivalent(*theta, 1, VertexKind::Dot);
        ok = ok && skeletons_isomorphic(*dotted_unzip(*dotted.skeleton, dotted.in_segment).skeleton,
                                        *dotted_unzip_via_trees(dotted.skeleton, dotted.in_segment))
                       .has_value();
        auto s1 = insert_bivalent(*theta, 2, VertexKind::Dot);
        auto s2 = insert_bivalent(*circle_skeleton(), 1, VertexKind::Dot);
        auto h1 = s1.skeleton->vertex(s1.vertex).halves;
        auto h2 = s2.skeleton->vertex(s2.vertex).halves;
        auto hin = [](const SkeletonPtr& s, const std::vector<HalfEdgeId>& hs) {
            return s->edge_end_of(hs[0]).second ? hs[0] : hs[1];
        };
        auto hout = [](const SkeletonPtr& s, const std::vector<HalfEdgeId>& hs) {
            return s->edge_end_of(hs[0]).second ? hs[1] : hs[0];
        };
        auto via = tree_connected_sum(*s1.skeleton, {{s1.vertex}, {}}, *s2.skeleton,
                                      {{s2.vertex}, {}},
                                      {{hin(s1.skeleton, h1), hout(s2.skeleton, h2)},
                                       {hout(s1.skeleton, h1), hin(s2.skeleton, h2)}});
        auto direct = dotted_edge_connected_sum(*theta, 2, *circle_skeleton(), 1);
        ok = ok && skeletons_isomorphic(*direct.skeleton, *via.skeleton).has_value();
        if (!ok) { std::cout << "  dotted operation recovery failed\n"; return false; }
        return true;
    });

    criterion(9, "a symbolic unital idempotent is forced to 1 through degree 4", [] {
        auto rep = idempotent_forcing(4);
        if ((int)rep.freedom.size() != 4) return false;
        for (auto f : rep.freedom)
            if (f != 0) return false;
        return rep.forced;
    });

    criterion(10, "deterministic echelon rank equals the randomized-projection rank", [] {
        std::vector<SkeletonPtr> cells{circle_skeleton(),      theta_skeleton(),
                                       dumbbell_skeleton(),    tetrahedron_skeleton(),
                                       strands_skeleton(1),    strands_skeleton(2),
                                       strands_skeleton(3),    strands_skeleton(4)};
        uint64_t seed = 90210;
        for (auto& s : cells) {
            for (int n = 0; n <= 2; ++n) {
                auto q = quotient_basis(s, n);
                int det_rank = q->raw_count() - q->dim();
                if (det_rank != randomized_relation_rank(s, n, seed++)) return false;
            }
        }
        return true;
    });

    std::cout << (failures == 0 ? "all criteria passed" : "FAILURES: " + std::to_string(failures))
              << "\n";
    return failures == 0 ? 0 : 1;
}
