#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "classdiv/classgroup.hpp"
#include "classdiv/intarith.hpp"

namespace classdiv::theorems {

struct EngineConfig
{
    classgroup::EnumerationOptions enumeration;
    FactorLimits factor_limits;
    classgroup::ClassNumberCache * cache = nullptr;
    /* Upper bound on the y-range searched for one norm equation. */
    std::uint64_t norm_search_limit = 100'000'000;
};

/* The field Q(sqrt(ell^(2m) - 2k^n)). */
struct MainTheoremInstance
{
    BigInt ell;
    unsigned long m;
    BigInt k;
    unsigned long n;
};

/* Empty when the instance satisfies every hypothesis, else the reason it does not. */
std::string admissibility_violation(MainTheoremInstance const & inst);

BigInt field_radicand(MainTheoremInstance const & inst);

/*
 * (x + y sqrt(-d))/sqrt(2) = lambda1 * ((x1 + lambda2 y1 sqrt(-d))/sqrt(2))^t
 * with x1^2 + d y1^2 = 2k^z1 and z = z1 * t, t odd.
 */
struct DecompositionWitness
{
    BigInt x1, y1;
    unsigned long z1, t;
    int lambda1, lambda2;

    friend bool operator==(DecompositionWitness const &, DecompositionWitness const &) = default;
};

struct LemmaResult
{
    DecompositionWitness witness;
    BigInt discriminant;
    /* Absent when the class group exceeds the enumeration bound. */
    std::optional<std::uint64_t> class_number;
    /* A class of order 2*z1, when one was found. */
    std::optional<classgroup::QuadForm> order_witness;
    /* Each entry is evidence against the lemma's conclusions. */
    std::vector<std::string> problems;
};

/* Empty when (x, y, z, k, d) satisfies the decomposition lemma's hypotheses. */
std::string lemma_scope_violation(BigInt const & x, BigInt const & y, unsigned long z,
                                  BigInt const & k, BigInt const & d);

/*
 * Finds the decomposition with the least z1, then checks z1 | h(-d) and that
 * the class group has an element of order 2*z1. Throws OutOfScopeError when
 * the hypotheses fail and InvariantError when no decomposition exists.
 */
LemmaResult lemma_bs_decompose(BigInt const & x, BigInt const & y, unsigned long z,
                               BigInt const & k, BigInt const & d,
                               EngineConfig const & cfg = {});

enum class TheoremCase
{
    i,
    ii,
    iii,
};

std::string to_string(TheoremCase c);

struct PredictedDivisor
{
    unsigned long value;
    TheoremCase theorem_case;
    /* Which congruences and square-ratio tests fired. */
    std::vector<std::string> derivation;
};

/* Throws OutOfScopeError when case (iii) applies with d = 1. */
PredictedDivisor predicted_divisor(MainTheoremInstance const & inst, BigInt const & d);

enum class Status
{
    pass,
    fail,
    out_of_lemma_scope,
    resource_limit,
};

std::string to_string(Status s);

struct VerificationReport
{
    std::string kind;
    std::string label;
    std::vector<std::pair<std::string, std::string>> parameters;
    BigInt N;
    BigInt d;
    BigInt s;
    std::optional<BigInt> discriminant;
    std::optional<TheoremCase> theorem_case;
    unsigned long predicted_divisor = 0;
    std::vector<std::string> derivation;
    std::optional<std::uint64_t> class_number;
    std::optional<DecompositionWitness> decomposition;
    /* z1 from the decomposition: an exact divisor of h. */
    std::optional<unsigned long> exact_divisor;
    std::optional<classgroup::QuadForm> order_witness;
    Status status = Status::pass;
    std::vector<std::string> notes;
};

/* Throws DomainError for an inadmissible instance. */
VerificationReport verify_main_theorem(MainTheoremInstance const & inst,
                                       EngineConfig const & cfg = {});

/* The decomposition lemma as a standalone report. */
VerificationReport verify_lemma(BigInt const & x, BigInt const & y, unsigned long z,
                                BigInt const & k, BigInt const & d,
                                EngineConfig const & cfg = {});

/*
 * Every member D of {d, d+1, 4d+1} u {2d + 4^m : 1 <= 4^m <= 2|d|} for
 * d = (1 - 2k^n)^n, checking n | h(Q(sqrt(D))).
 */
std::vector<VerificationReport> verify_tuple_family(BigInt const & k, unsigned long n,
                                                    std::optional<unsigned long> m_max = {},
                                                    EngineConfig const & cfg = {});

struct ScanRanges
{
    std::vector<BigInt> ell_set;
    unsigned long m_lo = 0, m_hi = 0;
    BigInt k_lo = 3, k_hi = 3;
    std::vector<unsigned long> n_set;
    BigInt max_abs_N = BigInt("1000000000");
    unsigned jobs = 1;
};

struct ScanSummary
{
    std::size_t candidates = 0;
    std::size_t admissible = 0;
    std::size_t pass = 0;
    std::size_t fail = 0;
    std::size_t out_of_lemma_scope = 0;
    std::size_t resource_limit = 0;
    /* skip reason -> count */
    std::map<std::string, std::size_t> skipped;
};

struct ScanResult
{
    ScanSummary summary;
    /* In input order: ell, then m, then k, then n. */
    std::vector<VerificationReport> reports;
};

ScanResult scan(ScanRanges const & ranges, EngineConfig const & cfg = {});

struct RamanujanNagellResult
{
    bool none_found;
    unsigned long max_exponent;
    /* (x, y, n) with x^2 + 1 = 2 y^n */
    std::vector<std::tuple<BigInt, BigInt, unsigned long>> solutions;
};

/* Exhaustive over odd 1 < y <= bound and odd 3 <= n <= 2*ceil(log2(bound)) + 1. */
RamanujanNagellResult check_no_ramanujan_nagell_solutions(unsigned long bound);

} // namespace classdiv::theorems
