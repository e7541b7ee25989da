#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ktg/linalg.hpp"
#include "ktg/poly.hpp"

using namespace ktg;

static SparseVec vec(std::initializer_list<std::pair<int, int>> terms) {
    SparseVec v;
    for (auto& [c, val] : terms) v.set(c, Rational(val));
    return v;
}

TEST_CASE("echelon reduces and ranks") {
    Echelon e;
    CHECK(e.add_row(vec({{0, 1}, {1, 2}})));
    CHECK(e.add_row(vec({{1, 1}, {2, 1}})));
    CHECK_FALSE(e.add_row(vec({{0, 2}, {1, 4}})));  // dependent
    CHECK(e.rank() == 2);
    // reduce kills pivot columns
    auto r = e.reduce(vec({{0, 1}}));
    CHECK(r.coeff(0) == nullptr);
    CHECK(e.contains(vec({{0, 3}, {1, 6}})));
    CHECK_FALSE(e.contains(vec({{3, 1}})));
}

TEST_CASE("affine solve: unique, underdetermined, inconsistent") {
    // x + y = 3, x - y = 1 -> x = 2, y = 1
    std::vector<std::pair<SparseVec, Rational>> rows;
    rows.push_back({vec({{0, 1}, {1, 1}}), Rational(3)});
    rows.push_back({vec({{0, 1}, {1, -1}}), Rational(1)});
    auto s = solve_affine(rows, 2);
    REQUIRE(s.solvable);
    CHECK(s.directions.empty());
    CHECK(s.particular[0] == 2);
    CHECK(s.particular[1] == 1);

    rows.pop_back();
    auto s2 = solve_affine(rows, 2);
    REQUIRE(s2.solvable);
    CHECK(s2.directions.size() == 1);
    // the direction is in the kernel
    Rational dot = s2.directions[0][0] + s2.directions[0][1];
    CHECK(dot == 0);

    rows.push_back({vec({{0, 1}, {1, 1}}), Rational(4)});
    CHECK_FALSE(solve_affine(rows, 2).solvable);
}

TEST_CASE("bareiss rank") {
    std::vector<std::vector<Integer>> m{{2, 4, 1}, {1, 2, 0}, {3, 6, 1}};
    CHECK(bareiss_rank(m) == 2);
    std::vector<std::vector<Integer>> id{{1, 0}, {0, 1}};
    CHECK(bareiss_rank(id) == 2);
}

TEST_CASE("randomized rank agrees with echelon on random sparse matrices") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        int rows = 12, cols = 9;
        std::vector<SparseVec> m;
        Echelon ech;
        std::uniform_int_distribution<int> val(-3, 3);
        for (int i = 0; i < rows; ++i) {
            SparseVec r;
            for (int j = 0; j < cols; ++j) {
                int v = val(rng);
                if (v) r.set(j, Rational(v, 1 + (j % 2)));
            }
            ech.add_row(r);
            m.push_back(std::move(r));
        }
        CHECK(randomized_rank(m, cols, 1000 + trial) == ech.rank());
    }
}

TEST_CASE("polynomial ring basics") {
    Poly a = Poly::variable("a"), b = Poly::variable("b");
    Poly p = a * a + Rational(2) * (a * b) + b * b;
    Poly q = (a + b) * (a + b);
    CHECK(p == q);
    CHECK(p.degree() == 2);
    CHECK((p - q).is_zero());
    CHECK(p.substitute(intern_var("a"), Poly(Rational(1)))
              .substitute(intern_var("b"), Poly(Rational(-1)))
              .is_zero());
    Poly c = Poly(Rational(5, 3));
    CHECK(c.is_constant());
    CHECK(c.constant_value() == Rational(5, 3));

    auto [cst, lin] = (Rational(2) * a - Poly(3)).affine_parts();
    CHECK(cst == -3);
    CHECK(lin.at(intern_var("a")) == 2);
    CHECK_THROWS_AS((void)p.affine_parts(), std::domain_error);
}

TEST_CASE("rational parse and print") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-7") == Rational(-7));
    CHECK(to_string(Rational(-6, 4)) == "-3/2");
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
}
