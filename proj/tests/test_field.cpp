#include <catch2/catch_amalgamated.hpp>

#include "qss/field.hpp"
#include "qss/rng.hpp"

using namespace qss;

TEST_CASE("field params validate the modulus") {
    CHECK_NOTHROW(FieldParams(7, 5));
    CHECK_THROWS_AS(FieldParams(6, 3), Error);   // composite
    CHECK_THROWS_AS(FieldParams(2, 1), Error);   // too small
    CHECK_THROWS_AS(FieldParams(7, 7), Error);   // n >= p
}

TEST_CASE("modular arithmetic basics") {
    const std::uint32_t p = 7;
    CHECK(fp::add(p, 3, 5) == 1);
    CHECK(fp::div(p, 4, 4) == 1);
    CHECK_THROWS_AS(fp::div(p, 3, 0), DivByZero);

    // Fermat: 3^6 computed by brute-force repeated multiplication.
    Fe brute = 1;
    for (int i = 0; i < 6; ++i) brute = fp::mul(p, brute, 3);
    CHECK(brute == 1);
    CHECK(fp::pow(p, 3, 6) == brute);
}

TEST_CASE("field axioms hold on random triples") {
    CounterRng rng(20240601);
    const std::uint32_t primes[] = {3, 5, 7, 11, 2147483647u};
    for (int trial = 0; trial < 10000; ++trial) {
        std::uint32_t p = primes[trial % 5];
        Fe a = rng.field_element(p), b = rng.field_element(p), c = rng.field_element(p);
        CHECK(fp::add(p, fp::add(p, a, b), c) == fp::add(p, a, fp::add(p, b, c)));
        CHECK(fp::mul(p, fp::mul(p, a, b), c) == fp::mul(p, a, fp::mul(p, b, c)));
        CHECK(fp::mul(p, a, fp::add(p, b, c)) ==
              fp::add(p, fp::mul(p, a, b), fp::mul(p, a, c)));
        CHECK(fp::add(p, a, fp::neg(p, a)) == 0);
        if (a != 0) CHECK(fp::mul(p, a, fp::inv(p, a)) == 1);
    }
}

TEST_CASE("polynomial evaluation") {
    const std::uint32_t p = 7;
    FieldPoly q(FeVec{1, 2});  // 2x + 1
    CHECK(q.eval(p, 3) == 0);  // 7 mod 7

    FieldPoly zero;
    CHECK(zero.eval(p, 4) == 0);
    CHECK(zero.degree() == -1);

    FieldPoly constant(FeVec{5});
    for (Fe x = 0; x < p; ++x) CHECK(constant.eval(p, x) == 5);
}

TEST_CASE("interpolation agrees with the brute-force oracle") {
    const std::uint32_t p = 7;
    // Oracle: enumerate all 49 degree-<=1 polynomials and keep the matches.
    std::vector<FieldPoly> matches;
    for (Fe c0 = 0; c0 < p; ++c0)
        for (Fe c1 = 0; c1 < p; ++c1) {
            FieldPoly q(FeVec{c0, c1});
            if (q.eval(p, 1) == 3 && q.eval(p, 2) == 5) matches.push_back(q);
        }
    REQUIRE(matches.size() == 1);
    CHECK(matches[0] == FieldPoly(FeVec{1, 2}));  // 2x + 1

    CHECK(interpolate(p, {{1, 3}, {2, 5}}) == matches[0]);
}

TEST_CASE("interpolation through constant points is constant") {
    const std::uint32_t p = 11;
    FieldPoly q = interpolate(p, {{1, 4}, {2, 4}, {3, 4}});
    CHECK(q == FieldPoly(FeVec{4}));
    CHECK_THROWS_AS(interpolate(p, {{1, 2}, {1, 3}}), DuplicateAbscissa);
}

TEST_CASE("interpolate after evaluate is the identity") {
    CounterRng rng(42);
    FieldParams params(13, 9);
    for (std::uint32_t deg = 0; deg + 1 <= params.n; ++deg) {
        for (int trial = 0; trial < 25; ++trial) {
            FeVec coeffs(deg + 1);
            for (auto& c : coeffs) c = rng.field_element(params.p);
            FieldPoly q(std::move(coeffs));
            std::vector<std::pair<Fe, Fe>> pts;
            for (std::uint32_t i = 1; i <= deg + 1; ++i)
                pts.push_back({i, q.eval(params.p, i)});
            CHECK(interpolate(params.p, pts) == q);
        }
    }
}

TEST_CASE("linear solver") {
    const std::uint32_t p = 11;
    SECTION("identity system") {
        FieldMatrix id = FieldMatrix::identity(4);
        FeVec b{1, 5, 0, 10};
        CHECK(solve_linear(p, id, b) == b);
    }
    SECTION("round trip on random invertible systems") {
        CounterRng rng(7);
        for (int trial = 0; trial < 50; ++trial) {
            std::size_t dim = 1 + rng.next_below(5);
            FieldMatrix m(dim, dim);
            do {
                for (auto& v : m.a) v = rng.field_element(p);
            } while (matrix_rank(p, m) != dim);
            FeVec x(dim);
            for (auto& v : x) v = rng.field_element(p);
            CHECK(solve_linear(p, m, m.apply(p, x)) == x);
        }
    }
    SECTION("repeated row is singular") {
        FieldMatrix m(2, 2);
        m.at(0, 0) = 3; m.at(0, 1) = 4;
        m.at(1, 0) = 3; m.at(1, 1) = 4;
        CHECK_THROWS_AS(solve_linear(p, m, FeVec{1, 2}), SingularMatrix);
    }
}

TEST_CASE("vandermonde matrix evaluates polynomials") {
    FieldParams params(7, 5);
    FieldMatrix v = vandermonde(params, 3);
    CounterRng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        FeVec coeffs{rng.field_element(7), rng.field_element(7), rng.field_element(7)};
        FeVec evals = v.apply(7, coeffs);
        FieldPoly q(coeffs);
        for (std::uint32_t i = 0; i < 5; ++i)
            CHECK(evals[i] == q.eval(7, i + 1));
    }

    // constant coefficient vector maps to a constant evaluation vector
    FeVec constant = v.apply(7, FeVec{4, 0, 0});
    for (Fe y : constant) CHECK(y == 4);
}

TEST_CASE("square vandermonde is invertible for every tested parameter set") {
    for (auto [p, n] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
             {5, 3}, {7, 5}, {11, 7}, {13, 9}, {31, 13}}) {
        FieldParams params(p, n);
        FieldMatrix v = vandermonde(params, n);
        CHECK(matrix_rank(p, v) == n);
        // brute-force elimination says the determinant is nonzero, so a solve
        // must succeed on an arbitrary right-hand side
        FeVec rhs(n, 1);
        CHECK_NOTHROW(solve_linear(p, v, rhs));
    }
}
