#include "classdiv/quadring.hpp"

#include <string>

namespace classdiv::quadring {

namespace {

bool norm_parity_ok(BigInt const & d, BigInt const & x, BigInt const & y)
{
    BigInt const n = x * x + d * y * y;
    return mpz_even_p(n.get_mpz_t());
}

} // namespace

HalfQuadInt::HalfQuadInt(unchecked_t, BigInt d, BigInt x, BigInt y, int e)
    : d_(std::move(d))
    , x_(std::move(x))
    , y_(std::move(y))
    , e_(e)
{
}

HalfQuadInt::HalfQuadInt(BigInt d, BigInt x, BigInt y, int e)
    : HalfQuadInt(unchecked_t{}, std::move(d), std::move(x), std::move(y), e)
{
    if (d_ <= 0 || !intarith::is_squarefree(d_))
        throw DomainError("field parameter must be a positive squarefree integer, got "
                          + d_.get_str());
    if (e_ != 0 && e_ != 1)
        throw DomainError("exponent of sqrt(2) must be 0 or 1");
    if (e_ == 1 && !norm_parity_ok(d_, x_, y_))
        throw DomainError("(" + x_.get_str() + " + " + y_.get_str()
                          + "w)/sqrt(2) is not integral: x^2 + d*y^2 is odd");
}

HalfQuadInt HalfQuadInt::one(BigInt const & d)
{
    return HalfQuadInt(d, 1, 0, 0);
}

HalfQuadInt multiply(HalfQuadInt const & u, HalfQuadInt const & v)
{
    if (u.d_ != v.d_)
        throw DomainError("cannot multiply elements of different fields (d = " + u.d_.get_str()
                          + " vs " + v.d_.get_str() + ")");
    BigInt x = u.x_ * v.x_ - u.d_ * u.y_ * v.y_;
    BigInt y = u.x_ * v.y_ + u.y_ * v.x_;
    int e = u.e_ + v.e_;
    if (e == 2) {
        if (!mpz_even_p(x.get_mpz_t()) || !mpz_even_p(y.get_mpz_t()))
            throw InvariantError("product over 2 is not integral");
        mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), 2);
        mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), 2);
        e = 0;
    }
    return HalfQuadInt(HalfQuadInt::unchecked_t{}, u.d_, std::move(x), std::move(y), e);
}

HalfQuadInt power(HalfQuadInt const & base, unsigned long t)
{
    if (t % 2 == 0)
        throw DomainError("power requires an odd exponent, got " + std::to_string(t));
    if (base.e_ != 1)
        throw DomainError("power requires a base over sqrt(2)");

    // (x + y w)^t in Z[w], then divide out 2^((t-1)/2)
    BigInt const & d = base.d_;
    BigInt rx = 1, ry = 0;
    BigInt bx = base.x_, by = base.y_;
    for (unsigned long k = t;;) {
        if (k & 1) {
            BigInt nx = rx * bx - d * ry * by;
            ry = rx * by + ry * bx;
            rx = std::move(nx);
        }
        k >>= 1;
        if (!k)
            break;
        BigInt nx = bx * bx - d * by * by;
        by = 2 * bx * by;
        bx = std::move(nx);
    }
    unsigned long const shift = (t - 1) / 2;
    if (mpz_scan1(rx.get_mpz_t(), 0) < shift || mpz_scan1(ry.get_mpz_t(), 0) < shift)
        throw InvariantError("power: components not divisible by 2^" + std::to_string(shift));
    mpz_tdiv_q_2exp(rx.get_mpz_t(), rx.get_mpz_t(), shift);
    mpz_tdiv_q_2exp(ry.get_mpz_t(), ry.get_mpz_t(), shift);
    return HalfQuadInt(HalfQuadInt::unchecked_t{}, d, std::move(rx), std::move(ry), 1);
}

BigInt norm(HalfQuadInt const & u)
{
    BigInt n = u.x() * u.x() + u.d() * u.y() * u.y();
    if (u.e() == 1)
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), 2);
    return n;
}

HalfQuadInt conjugate(HalfQuadInt const & u)
{
    return HalfQuadInt(HalfQuadInt::unchecked_t{}, u.d_, u.x_, -u.y_, u.e_);
}

HalfQuadInt negate(HalfQuadInt const & u)
{
    return HalfQuadInt(HalfQuadInt::unchecked_t{}, u.d_, -u.x_, -u.y_, u.e_);
}

} // namespace classdiv::quadring
