#pragma once

#include <optional>
#include <string>
#include <vector>

#include "classdiv/intarith.hpp"

namespace classdiv::lehmer {

/*
 * Parameters (a, b) = ((alpha+beta)^2, (alpha-beta)^2) of a Lehmer pair.
 *
 * Construction enforces: a, b nonzero; a = b (mod 4); gcd(a, (a-b)/4) = 1;
 * and alpha/beta is not a root of unity, i.e. 2(a+b)/(a-b) is not one of
 * 0, +-1, +-2.
 */
class LehmerParams
{
    BigInt a_, b_;

  public:
    LehmerParams(BigInt a, BigInt b);

    /* std::nullopt instead of DomainError when (a, b) is not a Lehmer pair. */
    static std::optional<LehmerParams> make(BigInt const & a, BigInt const & b);

    /* Empty when valid, otherwise the first violated condition. */
    static std::string violation(BigInt const & a, BigInt const & b);

    BigInt const & a() const { return a_; }
    BigInt const & b() const { return b_; }

    /* alpha * beta */
    BigInt q() const { return BigInt((a_ - b_) / 4); }
    /* alpha^2 + beta^2 */
    BigInt p() const { return BigInt((a_ + b_) / 2); }

    LehmerParams negated() const { return LehmerParams(-a_, -b_); }

    friend bool operator==(LehmerParams const &, LehmerParams const &) = default;
};

BigInt lehmer_number(LehmerParams const & params, unsigned long n);

/* [L_0, ..., L_upto] */
std::vector<BigInt> lehmer_sequence(LehmerParams const & params, unsigned long upto);

struct PrimitiveDivisorResult
{
    bool has_primitive;
    /* |L_n| with every prime of a*b*L_1*...*L_{n-1} stripped out. */
    BigInt primitive_part;
    /* A prime factor of primitive_part; absent when none exists or when
     * factoring the primitive part exceeds the witness effort budget. */
    std::optional<BigInt> witness;
};

PrimitiveDivisorResult has_primitive_divisor(LehmerParams const & params, unsigned long n,
                                             FactorLimits const & witness_limits = {1'000'000,
                                                                                   1'000'000});

bool is_n_defective(LehmerParams const & params, unsigned long n);

/* Equivalent iff related by alpha -> zeta*alpha, beta -> zeta*beta, zeta^4 = 1. */
bool params_equivalent(LehmerParams const & p1, LehmerParams const & p2);

enum class DefectSource
{
    fixed_table,
    fibonacci_family,
    lucas_family,
};

enum class SequenceKind
{
    fibonacci,
    lucas,
};

struct FamilyIndex
{
    unsigned long k;
    int epsilon;
};

struct DefectRecord
{
    unsigned long n;
    LehmerParams params;
    DefectSource source;
    std::optional<FamilyIndex> family_index;
};

std::string to_string(DefectSource s);

/* The fixed catalog of defective pairs for odd 7 <= n <= 29, validated on first use. */
std::vector<DefectRecord> const & defective_table();

/*
 * Catalog membership up to equivalence. Odd n >= 5 only: n = 5 searches the
 * Fibonacci and Lucas families, 7 <= n <= 29 consults the fixed table, and
 * n >= 31 is never defective.
 */
std::optional<DefectRecord> defective_catalog_lookup(LehmerParams const & params,
                                                     unsigned long n);

BigInt fibonacci(unsigned long k);
BigInt lucas(unsigned long k);

/* (X_{k-2e}, X_{k-2e} - 4 X_k) for X in {F, L}, when defined and a valid pair. */
std::optional<LehmerParams> five_defective_family(unsigned long k, int epsilon,
                                                  SequenceKind kind);

} // namespace classdiv::lehmer
