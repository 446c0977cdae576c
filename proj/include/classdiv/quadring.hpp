#pragma once

#include "classdiv/intarith.hpp"

namespace classdiv::quadring {

/*
 * The element (x + y*w) / sqrt(2)^e of Q(sqrt(-d), sqrt(2)) with w = sqrt(-d),
 * d > 0 squarefree and e in {0, 1}. For e = 1 the norm (x^2 + d*y^2)/2 must
 * be an integer, i.e. x^2 + d*y^2 is even.
 */
class HalfQuadInt
{
    BigInt d_, x_, y_;
    int e_;

    struct unchecked_t
    {
    };
    HalfQuadInt(unchecked_t, BigInt d, BigInt x, BigInt y, int e);

    friend HalfQuadInt multiply(HalfQuadInt const &, HalfQuadInt const &);
    friend HalfQuadInt power(HalfQuadInt const &, unsigned long);
    friend HalfQuadInt conjugate(HalfQuadInt const &);
    friend HalfQuadInt negate(HalfQuadInt const &);

  public:
    /* Validates d (squarefree, positive), e and the norm parity. */
    HalfQuadInt(BigInt d, BigInt x, BigInt y, int e);

    /* The multiplicative identity of the field with parameter d. */
    static HalfQuadInt one(BigInt const & d);

    BigInt const & d() const { return d_; }
    BigInt const & x() const { return x_; }
    BigInt const & y() const { return y_; }
    int e() const { return e_; }

    friend bool operator==(HalfQuadInt const &, HalfQuadInt const &) = default;
};

HalfQuadInt multiply(HalfQuadInt const & u, HalfQuadInt const & v);

/* base^t for odd t and base.e() == 1; the result again has e == 1. */
HalfQuadInt power(HalfQuadInt const & base, unsigned long t);

BigInt norm(HalfQuadInt const & u);
HalfQuadInt conjugate(HalfQuadInt const & u);
HalfQuadInt negate(HalfQuadInt const & u);

inline HalfQuadInt operator*(HalfQuadInt const & u, HalfQuadInt const & v)
{
    return multiply(u, v);
}

} // namespace classdiv::quadring
