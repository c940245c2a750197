#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "seedseg/errors.hpp"
#include "seedseg/grid.hpp"

using namespace seedseg;

TEST_SUITE("grid") {
    TEST_CASE("spacing and node count") {
        const GridSpec s(2.0, 1.0, 4, 8);
        CHECK(s.h1() == doctest::Approx(0.5));
        CHECK(s.h2() == doctest::Approx(0.125));
        CHECK(s.nodeCount() == 5u * 9u);
        CHECK(s.cellVolume() == doctest::Approx(0.0625));
    }

    TEST_CASE("128 x 128 unit square") {
        const auto s = GridSpec::unitSquare(128);
        CHECK(s.h1() == 1.0 / 128);
        CHECK(s.nodeCount() == 129u * 129u);
    }

    TEST_CASE("fewer than two cells is rejected") {
        CHECK_THROWS_AS(GridSpec(1, 1, 1, 4), ParameterError);
        CHECK_THROWS_AS(GridSpec(1, 1, 4, 0), ParameterError);
        CHECK_THROWS_AS(GridSpec(0, 1, 4, 4), ParameterError);
    }

    TEST_CASE("flatten is a bijection onto 0..nodeCount-1") {
        const GridSpec s(1, 1, 7, 5);
        std::set<std::size_t> seen;
        for (int j = 0; j <= 5; ++j)
            for (int i = 0; i <= 7; ++i) {
                const auto I = s.flatten(i, j);
                CHECK(I < s.nodeCount());
                seen.insert(I);
                const auto [a, b] = s.unflatten(I);
                CHECK(a == i);
                CHECK(b == j);
            }
        CHECK(seen.size() == s.nodeCount());
    }

    TEST_CASE("i runs fastest") {
        const GridSpec s(1, 1, 3, 3);
        CHECK(s.flatten(1, 0) == 1);
        CHECK(s.flatten(0, 1) == 4);
        CHECK(s.flatten(3, 3) == 15);
    }

    TEST_CASE("out-of-range access throws") {
        const GridSpec s(1, 1, 3, 3);
        CHECK_THROWS_AS(s.flatten(4, 0), IndexError);
        CHECK_THROWS_AS(s.flatten(0, -1), IndexError);
        CHECK_THROWS_AS(s.unflatten(16), IndexError);
        CHECK_THROWS_AS(s.nodePosition(-1, 0), IndexError);
    }

    TEST_CASE("interior and boundary") {
        const GridSpec s(1, 1, 4, 4);
        CHECK_FALSE(s.isInterior(0, 2));
        CHECK_FALSE(s.isInterior(4, 4));
        CHECK(s.isInterior(1, 3));
        const auto [x, y] = s.nodePosition(2, 4);
        CHECK(x == doctest::Approx(0.5));
        CHECK(y == doctest::Approx(1.0));
    }

    TEST_CASE("field construction checks size and finiteness") {
        const GridSpec s(1, 1, 2, 2);
        CHECK_THROWS_AS(GridField(s, std::vector<double>(8, 0.0)), ShapeError);
        std::vector<double> v(9, 0.0);
        v[4] = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(GridField(s, v), std::invalid_argument);
        GridField f(s, 2.5);
        CHECK(f(1, 1) == 2.5);
        f(2, 1) = -1;
        CHECK(f[s.at(2, 1)] == -1);
        CHECK(f.allFinite());
    }

    TEST_CASE("maxAbsDiff") {
        const GridSpec s(1, 1, 2, 2);
        GridField a(s, 1.0), b(s, 1.0);
        b(0, 2) = -0.5;
        CHECK(maxAbsDiff(a, b) == doctest::Approx(1.5));
        CHECK_THROWS_AS(maxAbsDiff(a, GridField(GridSpec(1, 1, 3, 2))), ShapeError);
    }
}
