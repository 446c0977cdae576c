#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "classdiv/classgroup.hpp"

using namespace classdiv;
using namespace classdiv::classgroup;

namespace {

/* Every (a, b) with |b| <= a <= c, no early exit. */
std::uint64_t naive_class_number(long D)
{
    std::uint64_t count = 0;
    for (long a = 1; 3 * a * a <= -D; ++a) {
        for (long b = -a; b <= a; ++b) {
            long const num = b * b - D;
            if (num % (4 * a) != 0)
                continue;
            long const c = num / (4 * a);
            if (c < a)
                continue;
            if ((b < 0) && (-b == a || a == c))
                continue;
            if (std::gcd(std::gcd(a, std::abs(b)), c) != 1)
                continue;
            ++count;
        }
    }
    return count;
}

} // namespace

TEST_CASE("discriminants and forms")
{
    CHECK_NOTHROW(Discriminant(-23));
    CHECK_THROWS_AS(Discriminant(-5), DomainError);
    CHECK_THROWS_AS(Discriminant(4), DomainError);
    CHECK_THROWS_AS(QuadForm(2, 2, 2), DomainError);   // not primitive
    CHECK_THROWS_AS(QuadForm(1, 3, 1), DomainError);   // indefinite
    CHECK_THROWS_AS(QuadForm(-1, 1, -6), DomainError);
    CHECK(QuadForm(2, -1, 3).discriminant().value() == -23);
    CHECK(QuadForm(2, -1, 3).to_string() == "(2,-1,3)");
}

TEST_CASE("field discriminants")
{
    CHECK(field_discriminant(53).value() == -212);
    CHECK(field_discriminant(3).value() == -3);
    CHECK(field_discriminant(5).value() == -20);
    CHECK(field_discriminant(1).value() == -4);
    CHECK_THROWS_AS(field_discriminant(12), DomainError);
}

TEST_CASE("reduction")
{
    CHECK(reduce(QuadForm(1, 1, 6)) == QuadForm(1, 1, 6));
    CHECK(reduce(QuadForm(3, 1, 2)) == QuadForm(2, -1, 3));
    CHECK(reduce(QuadForm(6, 1, 1)) == QuadForm(1, 1, 6));
    CHECK(QuadForm(2, 1, 3).is_reduced());
    CHECK_FALSE(QuadForm(3, 1, 2).is_reduced());
    CHECK_FALSE(QuadForm(2, -2, 3).is_reduced());
}

TEST_CASE("enumeration examples")
{
    CHECK(enumerate_reduced(Discriminant(-23))
          == std::vector<QuadForm>{{1, 1, 6}, {2, -1, 3}, {2, 1, 3}});
    CHECK(enumerate_reduced(Discriminant(-4)) == std::vector<QuadForm>{{1, 0, 1}});
    CHECK(enumerate_reduced(Discriminant(-3)) == std::vector<QuadForm>{{1, 1, 1}});
    CHECK(class_number(Discriminant(-23)) == 3);
    CHECK(class_number(Discriminant(-212)) == 6);
    CHECK(class_number(Discriminant(-20)) == 2);
}

TEST_CASE("class numbers agree with the naive oracle")
{
    for (long D = -3; D >= -6000; --D) {
        long const r = ((D % 4) + 4) % 4;
        if (r != 0 && r != 1)
            continue;
        REQUIRE_MESSAGE(count_reduced(Discriminant(D)) == naive_class_number(D), D);
    }
}

TEST_CASE("threaded enumeration matches single-threaded")
{
    for (long D : {-3999999999L, -400000003L, -148876L * 4}) {
        long const r = ((D % 4) + 4) % 4;
        if (r != 0 && r != 1)
            continue;
        EnumerationOptions one, four;
        four.jobs = 4;
        CHECK(count_reduced(Discriminant(D), one) == count_reduced(Discriminant(D), four));
    }
}

TEST_CASE("enumeration bound")
{
    EnumerationOptions small;
    small.max_abs_discriminant = 1000;
    CHECK_THROWS_AS(count_reduced(Discriminant(-1003), small), ResourceLimitError);
    CHECK_NOTHROW(count_reduced(Discriminant(-999), small));
}

TEST_CASE("composition and orders")
{
    QuadForm const f(2, 1, 3), g(2, -1, 3);
    CHECK(compose(f, g) == QuadForm(1, 1, 6));
    CHECK(compose(f, f) == QuadForm(2, -1, 3));
    CHECK(inverse(f) == g);
    CHECK(element_order(principal_form(Discriminant(-23))) == 1);
    CHECK(element_order(f) == 3);
    CHECK(element_order(QuadForm(2, 2, 3)) == 2);
    CHECK(power(f, 3) == QuadForm(1, 1, 6));
    CHECK(power(f, 0) == QuadForm(1, 1, 6));
    CHECK_THROWS_AS(compose(f, QuadForm(1, 0, 5)), DomainError);
}

TEST_CASE("elements of given order")
{
    auto const w = exists_element_of_order(Discriminant(-23), 3);
    REQUIRE(w);
    CHECK(element_order(*w) == 3);
    CHECK_FALSE(exists_element_of_order(Discriminant(-4), 3));
    auto const w6 = exists_element_of_order(Discriminant(-212), 6);
    REQUIRE(w6);
    CHECK(element_order(*w6) == 6);
}

TEST_CASE("group axioms and Lagrange on small discriminants")
{
    for (long D = -3; D >= -700; --D) {
        long const r = ((D % 4) + 4) % 4;
        if (r != 0 && r != 1)
            continue;
        Discriminant const disc(D);
        auto const forms = enumerate_reduced(disc);
        auto const e = principal_form(disc);
        auto const h = forms.size();
        for (auto const & f : forms) {
            CHECK(compose(f, e) == f);
            CHECK(compose(f, inverse(f)) == e);
            CHECK(h % element_order(f) == 0);
            for (auto const & g : forms) {
                auto const fg = compose(f, g);
                CHECK(fg == compose(g, f));
                CHECK(std::find(forms.begin(), forms.end(), fg) != forms.end());
            }
        }
        if (h <= 12) {
            for (auto const & f : forms)
                for (auto const & g : forms)
                    for (auto const & k : forms)
                        CHECK(compose(compose(f, g), k) == compose(f, compose(g, k)));
        }
    }
}

TEST_CASE("memory cache")
{
    MemoryClassNumberCache cache;
    CHECK_FALSE(cache.get(-212));
    CHECK(class_number(Discriminant(-212), {}, &cache) == 6);
    CHECK(cache.get(-212) == std::uint64_t{6});
    CHECK(cache.size() == 1);
}
