#pragma once

// Arithmetic on positive definite binary quadratic forms, generic over the
// coefficient type. Instantiated for __int128 (fast path, |D| < 2^48 with
// reduced operands) and mpz_class.

#include <tuple>
#include <utility>

#include <gmpxx.h>

namespace classdiv::classgroup::kernel {

using i128 = __int128;

template <class Int>
struct RawForm
{
    Int a, b, c;

    friend bool operator==(RawForm const &, RawForm const &) = default;
};

inline i128 fdiv(i128 a, i128 b)
{
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

inline mpz_class fdiv(mpz_class const & a, mpz_class const & b)
{
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

/* non-negative residue, m > 0 */
inline i128 mod(i128 a, i128 m)
{
    i128 r = a % m;
    return r < 0 ? r + m : r;
}

inline mpz_class mod(mpz_class const & a, mpz_class const & m)
{
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

/* (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0 */
inline std::tuple<i128, i128, i128> xgcd(i128 a, i128 b)
{
    i128 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        i128 const q = old_r / r;
        old_r = std::exchange(r, old_r - q * r);
        old_s = std::exchange(s, old_s - q * s);
        old_t = std::exchange(t, old_t - q * t);
    }
    if (old_r < 0)
        return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}

inline std::tuple<mpz_class, mpz_class, mpz_class> xgcd(mpz_class const & a,
                                                         mpz_class const & b)
{
    mpz_class g, x, y;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return {g, x, y};
}

/* Translate so that -a < b <= a. */
template <class Int>
void normalize(RawForm<Int> & f)
{
    Int const two_a = 2 * f.a;
    Int const q = fdiv(Int(f.a - f.b), two_a);
    if (q != 0) {
        f.c = (f.a * q + f.b) * q + f.c;
        f.b = f.b + two_a * q;
    }
}

template <class Int>
void reduce(RawForm<Int> & f)
{
    normalize(f);
    while (f.a > f.c) {
        std::swap(f.a, f.c);
        f.b = -f.b;
        normalize(f);
    }
    if (f.a == f.c && f.b < 0)
        f.b = -f.b;
}

template <class Int>
bool is_reduced(RawForm<Int> const & f)
{
    Int const abs_b = f.b < 0 ? Int(-f.b) : f.b;
    if (abs_b > f.a || f.a > f.c)
        return false;
    if ((abs_b == f.a || f.a == f.c) && f.b < 0)
        return false;
    return true;
}

/*
 * Dirichlet composition: with e = gcd(a1, a2, (b1+b2)/2) = x*a1 + y*a2 + z*(b1+b2)/2,
 *   A = a1*a2/e^2,  B = (a1*b2*x + a2*b1*y + z*(b1*b2 + D)/2)/e  (mod 2A),
 *   C = (B^2 - D)/(4A),
 * followed by reduction. Returns false if C is not integral.
 */
template <class Int>
bool compose(RawForm<Int> const & f, RawForm<Int> const & g, Int const & disc,
             RawForm<Int> & out)
{
    Int const beta = (f.b + g.b) / 2;
    auto const [g1, x1, y1] = xgcd(f.a, g.a);
    auto const [e, x2, z] = xgcd(g1, beta);
    Int const x = x1 * x2;
    Int const y = y1 * x2;
    Int const a1e = f.a / e;
    Int const a2e = g.a / e;
    Int const A = a1e * a2e;
    Int const two_A = 2 * A;
    Int const half = (f.b * g.b + disc) / 2;
    Int const num = f.a * g.b * x + g.a * f.b * y + z * half;
    if (num % e != 0)
        return false;
    Int B = mod(Int(num / e), two_A);
    if (B > A)
        B -= two_A;
    Int const cnum = B * B - disc;
    Int const four_A = 4 * A;
    if (cnum % four_A != 0)
        return false;
    out = RawForm<Int>{A, B, Int(cnum / four_A)};
    reduce(out);
    return true;
}

template <class Int>
RawForm<Int> identity(Int const & disc)
{
    Int const b = (disc % 2 == 0) ? Int(0) : Int(1);
    return RawForm<Int>{Int(1), b, Int((b * b - disc) / 4)};
}

} // namespace classdiv::classgroup::kernel
