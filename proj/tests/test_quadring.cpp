#include <doctest.h>

#include <random>

#include "classdiv/quadring.hpp"

using namespace classdiv;
using namespace classdiv::quadring;

TEST_CASE("construction")
{
    CHECK_NOTHROW(HalfQuadInt(5, 1, 1, 1));
    CHECK_THROWS_AS(HalfQuadInt(5, 1, 2, 1), DomainError);  // odd norm numerator
    CHECK_THROWS_AS(HalfQuadInt(4, 1, 1, 0), DomainError);  // d not squarefree
    CHECK_THROWS_AS(HalfQuadInt(0, 1, 1, 0), DomainError);
    CHECK_THROWS_AS(HalfQuadInt(5, 1, 1, 2), DomainError);
    // for even d the numerator is even exactly when x is
    CHECK_NOTHROW(HalfQuadInt(246, 2, 1, 1));
}

TEST_CASE("multiplication examples")
{
    HalfQuadInt const u(5, 1, 1, 1);
    auto const p = u * HalfQuadInt(5, 1, -1, 1);
    CHECK(p == HalfQuadInt(5, 3, 0, 0));

    auto const sq = u * u;
    CHECK(sq == HalfQuadInt(5, -2, 1, 0));

    CHECK(u * HalfQuadInt::one(5) == u);
    CHECK_THROWS_AS(u * HalfQuadInt(7, 1, 1, 1), DomainError);
}

TEST_CASE("odd powers")
{
    HalfQuadInt const u(5, 1, 1, 1);
    CHECK(power(u, 3) == HalfQuadInt(5, -7, -1, 1));
    CHECK(power(u, 1) == u);
    CHECK(negate(power(u, 3)) == HalfQuadInt(5, 7, 1, 1));
    CHECK_THROWS_AS(power(u, 2), DomainError);
    CHECK_THROWS_AS(power(HalfQuadInt(5, 1, 1, 0), 3), DomainError);
}

TEST_CASE("norms and conjugates")
{
    CHECK(norm(HalfQuadInt(53, 1, 1, 1)) == 27);
    CHECK(norm(HalfQuadInt(7, 0, 1, 0)) == 7);
    CHECK(norm(HalfQuadInt(5, 7, 1, 1)) == 27);
    CHECK(conjugate(HalfQuadInt(5, 1, 1, 1)) == HalfQuadInt(5, 1, -1, 1));
    HalfQuadInt const v(2, 3, 5, 0);
    CHECK(norm(v) == 59);
    CHECK(norm(conjugate(v)) == 59);
}

TEST_CASE("power matches repeated multiplication and norms are multiplicative")
{
    std::mt19937_64 rng(5);
    for (long d : {5L, 13L, 53L, 2L, 6L, 241L}) {
        for (int i = 0; i < 40; ++i) {
            long x = static_cast<long>(rng() % 41) - 20;
            long y = static_cast<long>(rng() % 41) - 20;
            if ((x * x + d * y * y) % 2 != 0)
                ++x;
            HalfQuadInt const u(d, x, y, 1);
            HalfQuadInt acc = u;
            for (unsigned long t = 1; t <= 9; t += 2) {
                if (t > 1)
                    acc = acc * u * u;
                CHECK(power(u, t) == acc);
                CHECK(norm(acc) == intarith::pow(norm(u), t));
            }
        }
    }
}
