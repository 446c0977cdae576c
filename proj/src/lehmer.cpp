#include "classdiv/lehmer.hpp"

#include <algorithm>

namespace classdiv::lehmer {

std::string LehmerParams::violation(BigInt const & a, BigInt const & b)
{
    if (a == 0 || b == 0)
        return "a and b must be nonzero";
    BigInt const diff = a - b;
    if (!mpz_divisible_ui_p(diff.get_mpz_t(), 4))
        return "a and b must be congruent mod 4";
    BigInt const q = diff / 4;
    if (q == 0)
        return "alpha*beta must be nonzero";
    if (gcd(a, q) != 1)
        return "(alpha+beta)^2 and alpha*beta must be coprime";
    // alpha/beta + beta/alpha = 2(a+b)/(a-b); roots of unity of degree <= 2
    // over Q give 0, +-1, +-2.
    BigInt const lhs = 2 * (a + b);
    for (int c = -2; c <= 2; ++c) {
        if (lhs == c * diff)
            return "alpha/beta is a root of unity";
    }
    return {};
}

LehmerParams::LehmerParams(BigInt a, BigInt b)
    : a_(std::move(a))
    , b_(std::move(b))
{
    auto const why = violation(a_, b_);
    if (!why.empty())
        throw DomainError("invalid Lehmer parameters (" + a_.get_str() + ", " + b_.get_str()
                          + "): " + why);
}

std::optional<LehmerParams> LehmerParams::make(BigInt const & a, BigInt const & b)
{
    if (!violation(a, b).empty())
        return std::nullopt;
    return LehmerParams(a, b);
}

std::vector<BigInt> lehmer_sequence(LehmerParams const & params, unsigned long upto)
{
    std::vector<BigInt> seq;
    seq.reserve(upto + 1);
    BigInt const p = params.p();
    BigInt const q2 = params.q() * params.q();
    for (unsigned long i = 0; i <= upto; ++i) {
        switch (i) {
        case 0: seq.emplace_back(0); break;
        case 1:
        case 2: seq.emplace_back(1); break;
        case 3: seq.emplace_back((3 * params.a() + params.b()) / 4); break;
        default: seq.emplace_back(p * seq[i - 2] - q2 * seq[i - 4]);
        }
    }
    return seq;
}

BigInt lehmer_number(LehmerParams const & params, unsigned long n)
{
    if (n <= 3)
        return lehmer_sequence(params, n)[n];
    // only the terms of n's parity are needed
    BigInt const p = params.p();
    BigInt const q2 = params.q() * params.q();
    BigInt prev = (n & 1) ? BigInt(1) : BigInt(0);
    BigInt cur = (n & 1) ? BigInt((3 * params.a() + params.b()) / 4) : BigInt(1);
    for (unsigned long i = (n & 1) ? 3 : 2; i < n; i += 2) {
        BigInt next = p * cur - q2 * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

namespace {

/* Remove from m every prime that divides t. */
void strip_common_primes(BigInt & m, BigInt const & t)
{
    BigInt g = gcd(m, t);
    while (g != 1) {
        mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), g.get_mpz_t());
        g = gcd(m, g);
    }
}

BigInt primitive_part(LehmerParams const & params, unsigned long n)
{
    if (n == 0)
        throw DomainError("primitive divisors are defined for n >= 1");
    auto const seq = lehmer_sequence(params, n);
    if (seq[n] == 0)
        throw InvariantError("Lehmer number vanished for valid parameters");

    BigInt m = abs(seq[n]);
    // (alpha^2 - beta^2)^2 = a*b
    strip_common_primes(m, params.a());
    strip_common_primes(m, params.b());
    for (unsigned long k = 1; k < n && m != 1; ++k)
        strip_common_primes(m, seq[k]);
    return m;
}

} // namespace

PrimitiveDivisorResult has_primitive_divisor(LehmerParams const & params, unsigned long n,
                                             FactorLimits const & witness_limits)
{
    BigInt m = primitive_part(params, n);
    PrimitiveDivisorResult r{m != 1, m, std::nullopt};
    if (!r.has_primitive)
        return r;
    try {
        r.witness = intarith::factorize(m, witness_limits).factors.front().prime;
    } catch (ResourceLimitError const &) {
    }
    return r;
}

bool is_n_defective(LehmerParams const & params, unsigned long n)
{
    return primitive_part(params, n) == 1;
}

bool params_equivalent(LehmerParams const & p1, LehmerParams const & p2)
{
    return p1 == p2 || (p2.a() == -p1.a() && p2.b() == -p1.b());
}

std::string to_string(DefectSource s)
{
    switch (s) {
    case DefectSource::fixed_table: return "fixed-table";
    case DefectSource::fibonacci_family: return "fibonacci-family";
    case DefectSource::lucas_family: return "lucas-family";
    }
    return "unknown";
}

std::vector<DefectRecord> const & defective_table()
{
    static std::vector<DefectRecord> const table = [] {
        struct Row
        {
            unsigned long n;
            long a, b;
        };
        static constexpr Row rows[] = {
            {7, 1, -7},  {7, 1, -19}, {7, 3, -5}, {7, 5, -7}, {7, 13, -3}, {7, 14, -22},
            {9, 5, -3},  {9, 7, -1},  {9, 7, -5},
            {13, 1, -7},
            {15, 7, -1}, {15, 10, -2},
        };
        std::vector<DefectRecord> t;
        for (auto const & row : rows)
            t.push_back({row.n, LehmerParams(row.a, row.b), DefectSource::fixed_table,
                         std::nullopt});
        return t;
    }();
    return table;
}

BigInt fibonacci(unsigned long k)
{
    BigInt r;
    mpz_fib_ui(r.get_mpz_t(), k);
    return r;
}

BigInt lucas(unsigned long k)
{
    BigInt r;
    mpz_lucnum_ui(r.get_mpz_t(), k);
    return r;
}

std::optional<LehmerParams> five_defective_family(unsigned long k, int epsilon,
                                                  SequenceKind kind)
{
    if (epsilon != 1 && epsilon != -1)
        throw DomainError("epsilon must be +1 or -1");
    if (kind == SequenceKind::fibonacci && k < 3)
        return std::nullopt;
    if (kind == SequenceKind::lucas && k == 1)
        return std::nullopt;
    // the sequences are not defined at negative indices
    if (epsilon == 1 && k < 2)
        return std::nullopt;
    unsigned long const shifted = epsilon == 1 ? k - 2 : k + 2;
    auto const x = kind == SequenceKind::fibonacci ? &fibonacci : &lucas;
    BigInt const first = x(shifted);
    return LehmerParams::make(first, first - 4 * x(k));
}

namespace {

std::optional<DefectRecord> search_five_families(LehmerParams const & params)
{
    BigInt const abs_a = abs(params.a());
    BigInt const abs_b = abs(params.b());
    BigInt const & scale = abs_a > abs_b ? abs_a : abs_b;
    for (int epsilon : {1, -1}) {
        unsigned run = 0;
        for (unsigned long k = 0; run < 8; ++k) {
            if (epsilon == 1 && k < 2)
                continue;
            unsigned long const shifted = epsilon == 1 ? k - 2 : k + 2;
            if (abs(fibonacci(shifted)) > scale && abs(lucas(shifted)) > scale)
                ++run;
            else
                run = 0;
            for (auto kind : {SequenceKind::fibonacci, SequenceKind::lucas}) {
                auto const cand = five_defective_family(k, epsilon, kind);
                if (cand && params_equivalent(params, *cand)) {
                    auto const src = kind == SequenceKind::fibonacci
                                         ? DefectSource::fibonacci_family
                                         : DefectSource::lucas_family;
                    return DefectRecord{5, *cand, src, FamilyIndex{k, epsilon}};
                }
            }
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<DefectRecord> defective_catalog_lookup(LehmerParams const & params,
                                                     unsigned long n)
{
    if (n % 2 == 0 || n < 5)
        throw DomainError("catalog lookup requires odd n >= 5, got " + std::to_string(n));
    if (n == 5)
        return search_five_families(params);
    for (auto const & rec : defective_table()) {
        if (rec.n == n && params_equivalent(params, rec.params))
            return rec;
    }
    return std::nullopt;
}

} // namespace classdiv::lehmer
