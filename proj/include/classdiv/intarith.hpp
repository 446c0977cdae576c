#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "classdiv/errors.hpp"

namespace classdiv {

using BigInt = mpz_class;

struct PrimePower
{
    BigInt prime;
    unsigned long exponent;

    friend bool operator==(PrimePower const &, PrimePower const &) = default;
};

/* Primes are strictly increasing; the product of prime^exponent is n. */
struct Factorization
{
    BigInt n;
    std::vector<PrimePower> factors;
};

/* N = sign * d * s^2 with d squarefree and positive, s positive. */
struct SquarefreeDecomposition
{
    int sign;
    BigInt d;
    BigInt s;

    BigInt reconstruct() const { return BigInt(sign) * d * s * s; }
};

struct FactorLimits
{
    std::uint64_t trial_bound = 1'000'000;
    std::uint64_t rho_iterations = 100'000'000;
};

namespace intarith {

/* floor(sqrt(n)); throws DomainError for n < 0. */
BigInt isqrt(BigInt const & n);

/* The root when n is a perfect square (negatives never are). */
std::optional<BigInt> exact_sqrt(BigInt const & n);
bool is_perfect_square(BigInt const & n);

/*
 * Exact primality. Trial division decides small inputs; a deterministic
 * Miller-Rabin base ladder decides everything below 3.317e24. Larger inputs
 * cannot be certified and raise ResourceLimitError.
 */
bool is_prime(BigInt const & n);

/* Largest input is_prime can certify, exclusive. */
BigInt const & primality_certification_bound();

Factorization factorize(BigInt const & n, FactorLimits const & limits = {});

SquarefreeDecomposition squarefree_decompose(BigInt const & N,
                                             FactorLimits const & limits = {});

bool is_squarefree(BigInt const & n, FactorLimits const & limits = {});

/* num/den is a non-negative integer square. Non-integral quotients are not. */
bool square_ratio(BigInt const & num, BigInt const & den);

BigInt pow(BigInt const & base, unsigned long exponent);

/* Primes below the default trial bound, ascending. */
std::span<std::uint32_t const> small_primes();

/* Exponent of p in n (n != 0). */
unsigned long valuation(BigInt n, unsigned long p);

/* Positive divisors of n, ascending. */
std::vector<unsigned long> divisors(unsigned long n);

} // namespace intarith
} // namespace classdiv
