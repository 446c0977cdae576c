#include "classdiv/intarith.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace classdiv::intarith {

namespace {

constexpr std::uint32_t sieve_limit = 1'000'000;

std::vector<std::uint32_t> build_small_primes()
{
    std::vector<bool> composite(sieve_limit + 1, false);
    std::vector<std::uint32_t> primes;
    primes.reserve(80'000);
    for (std::uint32_t i = 2; i <= sieve_limit; ++i) {
        if (composite[i])
            continue;
        primes.push_back(i);
        for (std::uint64_t j = std::uint64_t(i) * i; j <= sieve_limit; j += i)
            composite[j] = true;
    }
    return primes;
}

bool fits_u64(BigInt const & n)
{
    return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(BigInt const & n)
{
    // mpz_get_ui is 64-bit on LP64 targets.
    return mpz_get_ui(n.get_mpz_t());
}

BigInt from_u64(std::uint64_t v)
{
    BigInt r;
    mpz_set_ui(r.get_mpz_t(), v);
    return r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1)
            r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

constexpr std::uint32_t mr_bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

/* n odd, n > 41 */
bool miller_rabin_u64(std::uint64_t n)
{
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (std::uint64_t a : mr_bases) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

bool miller_rabin(BigInt const & n)
{
    if (fits_u64(n))
        return miller_rabin_u64(to_u64(n));
    BigInt const n1 = n - 1;
    BigInt d = n1;
    unsigned long r = mpz_scan1(d.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), r);
    BigInt x;
    for (std::uint32_t a : mr_bases) {
        BigInt base(a);
        mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == n1)
            continue;
        bool composite = true;
        for (unsigned long i = 1; i < r; ++i) {
            mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
            if (x == n1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

struct RhoBudget
{
    std::uint64_t remaining;
};

/* Brent's cycle variant of Pollard rho on word-sized n. Returns 0 on failure. */
std::uint64_t rho_u64(std::uint64_t n, std::uint64_t c, RhoBudget & budget)
{
    constexpr std::uint64_t block = 128;
    auto f = [&](std::uint64_t x) { return (mulmod(x, x, n) + c) % n; };
    std::uint64_t y = 2, x = 2, ys = 2, q = 1, g = 1;
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i)
            y = f(y);
        for (std::uint64_t k = 0; k < r && g == 1; k += block) {
            ys = y;
            std::uint64_t const steps = std::min(block, r - k);
            if (budget.remaining < steps)
                return 0;
            budget.remaining -= steps;
            for (std::uint64_t i = 0; i < steps; ++i) {
                y = f(y);
                q = mulmod(q, x > y ? x - y : y - x, n);
            }
            g = std::gcd(q, n);
        }
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = std::gcd(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return g == n ? 0 : g;
}

BigInt rho_mpz(BigInt const & n, unsigned long c, RhoBudget & budget)
{
    constexpr std::uint64_t block = 128;
    BigInt y = 2, x = 2, ys = 2, q = 1, g = 1, diff;
    auto step = [&](BigInt & v) {
        v = v * v + c;
        mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    for (std::uint64_t r = 1; g == 1; r <<= 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i)
            step(y);
        for (std::uint64_t k = 0; k < r && g == 1; k += block) {
            ys = y;
            std::uint64_t const steps = std::min(block, r - k);
            if (budget.remaining < steps)
                return 0;
            budget.remaining -= steps;
            for (std::uint64_t i = 0; i < steps; ++i) {
                step(y);
                diff = abs(x - y);
                q *= diff;
                mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            g = gcd(q, n);
        }
    }
    if (g == n) {
        do {
            step(ys);
            g = gcd(abs(x - ys), n);
        } while (g == 1);
    }
    return g == n ? BigInt(0) : g;
}

BigInt find_factor(BigInt const & n, RhoBudget & budget)
{
    for (unsigned long c = 1; budget.remaining > 0; ++c) {
        if (fits_u64(n) && mpz_sizeinbase(n.get_mpz_t(), 2) <= 63) {
            std::uint64_t const g = rho_u64(to_u64(n), c, budget);
            if (g > 1)
                return from_u64(g);
        } else {
            BigInt g = rho_mpz(n, c, budget);
            if (g > 1)
                return g;
        }
    }
    throw ResourceLimitError("factorization effort exhausted; unfactored cofactor "
                             + n.get_str());
}

/* n > 1, no prime factors below the trial bound. */
void split_cofactor(BigInt const & n, RhoBudget & budget, std::vector<BigInt> & out)
{
    if (n == 1)
        return;
    bool prime = false;
    try {
        prime = is_prime(n);
    } catch (ResourceLimitError const &) {
        throw ResourceLimitError("cannot certify primality of cofactor " + n.get_str());
    }
    if (prime) {
        out.push_back(n);
        return;
    }
    BigInt root;
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned long e = mpz_sizeinbase(n.get_mpz_t(), 2); e >= 2; --e) {
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), e)) {
                std::vector<BigInt> sub;
                split_cofactor(root, budget, sub);
                for (unsigned long i = 0; i < e; ++i)
                    out.insert(out.end(), sub.begin(), sub.end());
                return;
            }
        }
    }
    BigInt const g = find_factor(n, budget);
    split_cofactor(g, budget, out);
    split_cofactor(BigInt(n / g), budget, out);
}

} // namespace

std::span<std::uint32_t const> small_primes()
{
    static std::vector<std::uint32_t> const primes = build_small_primes();
    return primes;
}

BigInt isqrt(BigInt const & n)
{
    if (sgn(n) < 0)
        throw DomainError("isqrt of negative integer " + n.get_str());
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

std::optional<BigInt> exact_sqrt(BigInt const & n)
{
    if (sgn(n) < 0 || !mpz_perfect_square_p(n.get_mpz_t()))
        return std::nullopt;
    return isqrt(n);
}

bool is_perfect_square(BigInt const & n)
{
    return sgn(n) >= 0 && mpz_perfect_square_p(n.get_mpz_t());
}

BigInt const & primality_certification_bound()
{
    static BigInt const bound("3317044064679887385961981");
    return bound;
}

bool is_prime(BigInt const & n)
{
    if (n < 2)
        return false;
    for (std::uint32_t p : small_primes().first(168)) { // primes below 1000
        if (n == p)
            return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p))
            return false;
    }
    if (n < 1'000'000)
        return true;
    if (n >= primality_certification_bound())
        throw ResourceLimitError("primality of " + n.get_str()
                                 + " exceeds the deterministic certification range");
    return miller_rabin(n);
}

Factorization factorize(BigInt const & n, FactorLimits const & limits)
{
    if (n <= 1)
        throw DomainError("factorize requires n > 1, got " + n.get_str());

    std::vector<BigInt> primes;
    BigInt m = n;
    bool cofactor_is_prime = false;
    std::uint64_t const bound = std::min<std::uint64_t>(limits.trial_bound, sieve_limit);
    for (std::uint32_t p : small_primes()) {
        if (p > bound)
            break;
        if (fits_u64(m)) {
            std::uint64_t const mm = to_u64(m);
            if (std::uint64_t(p) * p > mm) {
                cofactor_is_prime = true;
                break;
            }
            if (mm % p)
                continue;
        } else if (!mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            continue;
        }
        do {
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
            primes.emplace_back(p);
        } while (mpz_divisible_ui_p(m.get_mpz_t(), p));
    }

    if (m > 1) {
        // m has no prime factor <= bound
        BigInt const b(static_cast<unsigned long>(bound + 1));
        if (cofactor_is_prime || m < b * b) {
            primes.push_back(m);
        } else {
            RhoBudget budget{limits.rho_iterations};
            split_cofactor(m, budget, primes);
        }
    }

    std::sort(primes.begin(), primes.end());
    Factorization f{n, {}};
    for (auto const & p : primes) {
        if (!f.factors.empty() && f.factors.back().prime == p)
            ++f.factors.back().exponent;
        else
            f.factors.push_back({p, 1});
    }
    return f;
}

SquarefreeDecomposition squarefree_decompose(BigInt const & N, FactorLimits const & limits)
{
    if (N == 0)
        throw DomainError("squarefree decomposition of zero");
    SquarefreeDecomposition r{sgn(N) < 0 ? -1 : 1, 1, 1};
    BigInt const a = abs(N);
    if (a == 1)
        return r;
    for (auto const & [p, e] : factorize(a, limits).factors) {
        if (e & 1)
            r.d *= p;
        BigInt pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e / 2);
        r.s *= pe;
    }
    return r;
}

bool is_squarefree(BigInt const & n, FactorLimits const & limits)
{
    if (sgn(n) == 0)
        return false;
    BigInt const a = abs(n);
    if (a == 1)
        return true;
    auto const f = factorize(a, limits);
    return std::all_of(f.factors.begin(), f.factors.end(),
                       [](PrimePower const & pp) { return pp.exponent == 1; });
}

bool square_ratio(BigInt const & num, BigInt const & den)
{
    if (den == 0)
        throw DomainError("square_ratio with zero denominator");
    if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()))
        return false;
    BigInt q;
    mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return is_perfect_square(q);
}

BigInt pow(BigInt const & base, unsigned long exponent)
{
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

unsigned long valuation(BigInt n, unsigned long p)
{
    if (n == 0)
        throw DomainError("valuation of zero");
    unsigned long v = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        ++v;
    }
    return v;
}

std::vector<unsigned long> divisors(unsigned long n)
{
    std::vector<unsigned long> small, large;
    for (unsigned long i = 1; i * i <= n; ++i) {
        if (n % i)
            continue;
        small.push_back(i);
        if (i != n / i)
            large.push_back(n / i);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

} // namespace classdiv::intarith
