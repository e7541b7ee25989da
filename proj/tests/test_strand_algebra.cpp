#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ktg/strand_algebra.hpp"

#include <random>

using namespace ktg;

TEST_CASE("stacking product and grading") {
    auto one = Series<Rational>::one(2, 3);
    Series<Rational> a(2, 3);
    a.set_part(1, t(1, 2, 2));
    CHECK(product(one, a) == a);
    CHECK(product(a, one) == a);

    // t12 . t12 stacks the second chord above the first
    auto sq = product(a, a);
    auto expect = quotient_basis(strands_skeleton(2), 2)->reduce(stack(t(1, 2, 2), t(1, 2, 2)));
    CHECK(sq.part(2) == expect);
    CHECK(sq.part(1).is_zero());
    CHECK(sq.part(3).is_zero());

    Series<Rational> b(3, 3);
    CHECK_THROWS_AS((void)product(a, b), std::invalid_argument);
}

TEST_CASE("inverse and exponential") {
    auto R = r_matrix(4);
    CHECK(product(R, inverse(R)) == Series<Rational>::one(2, 4));
    CHECK(inverse(Series<Rational>::one(2, 4)) == Series<Rational>::one(2, 4));
    CHECK(inverse(R) == exp_series(Rational(-1, 2) * t(1, 2, 2), 1, 4));

    // exp(t12/2) degree-2 part is (1/8) t12 t12
    auto deg2 = quotient_basis(strands_skeleton(2), 2)
                    ->reduce(Rational(1, 8) * stack(t(1, 2, 2), t(1, 2, 2)));
    CHECK(r_matrix(2).part(2) == deg2);

    Series<Rational> z(2, 2);
    CHECK_THROWS_AS((void)inverse(z), std::invalid_argument);
}

TEST_CASE("R is symmetric under the strand swap through degree 4") {
    auto R = r_matrix(4);
    CHECK(superscript(R, "21") == R);
}

TEST_CASE("pullback: identity, uncovered strands, doubling sum") {
    Series<Rational> v(2, 2);
    v.set_part(1, t(1, 2, 2));
    v.set_part(2, stack(t(1, 1, 2), t(2, 2, 2)));
    CHECK(pullback(FreeGroupMap::identity(2), v) == v);

    // beta1 = (x2, x3): strand 1 uncovered
    FreeGroupMap b1;
    b1.source_rank = 2;
    b1.target_rank = 3;
    b1.words = {{{2, 1}}, {{3, 1}}};
    Series<Rational> w(3, 1);
    w.set_part(1, t(1, 2, 3));
    CHECK(pullback(b1, w).is_zero());
    Series<Rational> w2(3, 1);
    w2.set_part(1, t(2, 3, 3));
    CHECK(pullback(b1, w2).part(1) == t(1, 2, 2));

    // doubling the single strand: t11 -> t11 + 2 t12 + t22
    FreeGroupMap dbl;
    dbl.source_rank = 2;
    dbl.target_rank = 1;
    dbl.words = {{{1, 1}}, {{1, 1}}};
    auto lifted = pullback_raw(dbl, t(1, 1, 1));
    RatComb expect = t(1, 1, 2) + Rational(2) * t(1, 2, 2) + t(2, 2, 2);
    CHECK(lifted == expect);
}

TEST_CASE("doubling, deletion, permutation and switch agree with their pullbacks") {
    for (int n = 1; n <= 4; ++n) {
        auto s = strands_skeleton(n);
        for (int deg = 1; deg <= 2; ++deg) {
            for (auto& d : enumerate_diagrams(s, deg)) {
                Series<Rational> v(n, 2);
                v.set_part(deg, RatComb(d));
                for (int i = 0; i <= n + 1; ++i)
                    CHECK(delta(i, v) == pullback(doubling_word(i, n), v));
                for (int i = 1; i <= n; ++i)
                    CHECK(d_strand(i, v) == pullback(deletion_word(i, n), v));
                CHECK(switch_all(v) == pullback(switch_all_word(n), v));
                // all permutations
                std::vector<int> perm(n);
                for (int i = 0; i < n; ++i) perm[i] = i + 1;
                do {
                    CHECK(permute(perm, v) == pullback(permutation_pullback_word(perm), v));
                } while (std::next_permutation(perm.begin(), perm.end()));
            }
        }
    }
}

TEST_CASE("delta examples") {
    // delta0(1) = 1 on n+1 strands
    CHECK(delta(0, Series<Rational>::one(2, 2)) == Series<Rational>::one(3, 2));
    // delta2 on two strands: t12 -> t12 + t13
    Series<Rational> v(2, 2);
    v.set_part(1, t(1, 2, 2));
    auto d2 = delta(2, v);
    CHECK(d2.part(1) == quotient_basis(strands_skeleton(3), 1)->reduce(t(1, 2, 3) + t(1, 3, 3)));
    // d_i(t12) = 0
    CHECK(d_strand(1, v).is_zero());
    CHECK(d_strand(2, v).is_zero());
}

TEST_CASE("free group words: parse, print, reduce, compose") {
    auto m = FreeGroupMap::parse("x2 x1'\nx3 x1'\n", 3);
    CHECK(m.source_rank == 2);
    CHECK(m.words[0].size() == 2);
    CHECK(m.words[0][1].sign == -1);
    auto text = m.str();
    auto again = FreeGroupMap::parse(text, 3);
    CHECK(again.words == m.words);

    FreeGroupMap b5;
    b5.source_rank = b5.target_rank = 3;
    b5.words = {{{3, -1}}, {{3, -1}, {1, 1}}, {{2, -1}, {1, 1}}};
    auto cube = compose(b5, compose(b5, b5));
    CHECK(cube.free_reduced().is_identity());
    CHECK_FALSE(b5.is_identity());
}

TEST_CASE("pullback cubes to the identity for the order-3 map") {
    FreeGroupMap b5;
    b5.source_rank = b5.target_rank = 3;
    b5.words = {{{3, -1}}, {{3, -1}, {1, 1}}, {{2, -1}, {1, 1}}};
    for (int deg = 1; deg <= 2; ++deg) {
        for (auto& d : enumerate_diagrams(strands_skeleton(3), deg)) {
            Series<Rational> v(3, 2);
            v.set_part(deg, RatComb(d));
            auto w = pullback(b5, pullback(b5, pullback(b5, v)));
            CHECK(w == v);
        }
    }
}

TEST_CASE("contravariant functoriality on random composable pairs") {
    std::mt19937_64 rng(424242);
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
    int done = 0;
    while (done < 20) {
        int m = rank(rng), n = rank(rng), p = rank(rng);
        FreeGroupMap beta = random_map(m, n);   // F_m -> F_n
        FreeGroupMap gamma = random_map(n, p);  // F_n -> F_p
        FreeGroupMap comp = compose(gamma, beta);  // F_m -> F_p
        for (int deg = 1; deg <= 2; ++deg) {
            auto diags = enumerate_diagrams(strands_skeleton(p), deg);
            std::uniform_int_distribution<size_t> pick(0, diags.size() - 1);
            Series<Rational> v(p, 2);
            v.set_part(deg, RatComb(diags[pick(rng)]));
            CHECK(pullback(comp, v) == pullback(beta, pullback(gamma, v)));
        }
        ++done;
    }
}

TEST_CASE("products and the standard maps descend to the quotient") {
    // applying an operation to a raw diagram or to its normal form gives the
    // same reduced answer
    auto s = strands_skeleton(3);
    auto q2 = quotient_basis(s, 2);
    for (auto& d : q2->all_diagrams()) {
        Series<Rational> raw(3, 2);
        raw.set_part(2, q2->reduce(RatComb(d)));  // set_part reduces anyway
        Series<Rational> viaraw(3, 2);
        viaraw.set_part(2, RatComb(d));
        CHECK(raw == viaraw);
        CHECK(delta(1, raw) == delta(1, viaraw));
        CHECK(d_strand(2, raw) == d_strand(2, viaraw));
        CHECK(permute({2, 3, 1}, raw) == permute({2, 3, 1}, viaraw));
    }
}
