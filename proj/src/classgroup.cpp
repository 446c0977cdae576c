#include "classdiv/classgroup.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <span>
#include <thread>
#include <unordered_map>

#include "form_kernel.hpp"

namespace classdiv::classgroup {

using kernel::i128;
using kernel::RawForm;

Discriminant::Discriminant(BigInt D)
    : value_(std::move(D))
{
    if (sgn(value_) >= 0)
        throw DomainError("discriminant must be negative, got " + value_.get_str());
    unsigned long const r = mpz_fdiv_ui(value_.get_mpz_t(), 4);
    if (r != 0 && r != 1)
        throw DomainError("discriminant must be 0 or 1 mod 4, got " + value_.get_str());
}

QuadForm::QuadForm(BigInt a, BigInt b, BigInt c)
    : a_(std::move(a))
    , b_(std::move(b))
    , c_(std::move(c))
{
    if (sgn(a_) <= 0)
        throw DomainError("form (" + a_.get_str() + ", " + b_.get_str() + ", " + c_.get_str()
                          + ") must have a > 0");
    if (sgn(BigInt(b_ * b_ - 4 * a_ * c_)) >= 0)
        throw DomainError("form " + to_string() + " is not positive definite");
    if (gcd(gcd(a_, b_), c_) != 1)
        throw DomainError("form " + to_string() + " is not primitive");
}

Discriminant QuadForm::discriminant() const
{
    return Discriminant(b_ * b_ - 4 * a_ * c_);
}

bool QuadForm::is_reduced() const
{
    return kernel::is_reduced(RawForm<mpz_class>{a_, b_, c_});
}

bool QuadForm::is_principal() const
{
    return reduce(*this).a() == 1;
}

std::string QuadForm::to_string() const
{
    return "(" + a_.get_str() + "," + b_.get_str() + "," + c_.get_str() + ")";
}

std::optional<std::uint64_t> MemoryClassNumberCache::get(BigInt const & D)
{
    std::lock_guard lock(mutex_);
    auto it = entries_.find(D);
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

void MemoryClassNumberCache::put(BigInt const & D, std::uint64_t h, std::string const &)
{
    std::lock_guard lock(mutex_);
    entries_.emplace(D, h);
}

std::size_t MemoryClassNumberCache::size()
{
    std::lock_guard lock(mutex_);
    return entries_.size();
}

Discriminant field_discriminant(BigInt const & d)
{
    if (sgn(d) <= 0 || !intarith::is_squarefree(d))
        throw DomainError("field parameter must be a positive squarefree integer, got "
                          + d.get_str());
    if (mpz_fdiv_ui(d.get_mpz_t(), 4) == 3)
        return Discriminant(-d);
    return Discriminant(-4 * d);
}

namespace {

/* Coefficients of reduced forms with |D| below this fit the int128 kernel. */
constexpr std::int64_t fast_path_limit = std::int64_t(1) << 48;

bool fast_path(BigInt const & D)
{
    return mpz_sizeinbase(D.get_mpz_t(), 2) < 48 && abs(D) < fast_path_limit;
}

std::int64_t to_i64(BigInt const & v)
{
    if (!mpz_fits_slong_p(v.get_mpz_t()))
        throw InvariantError("value " + v.get_str() + " exceeds 64 bits");
    return mpz_get_si(v.get_mpz_t());
}

BigInt from_i128(i128 v)
{
    if (v > INT64_MAX || v < INT64_MIN)
        throw InvariantError("form coefficient exceeds 64 bits");
    return BigInt(static_cast<long>(v));
}

template <class Int>
Int convert(BigInt const & v)
{
    if constexpr (std::is_same_v<Int, i128>)
        return to_i64(v);
    else
        return v;
}

template <class Int>
BigInt to_big(Int const & v)
{
    if constexpr (std::is_same_v<Int, i128>)
        return from_i128(v);
    else
        return v;
}

template <class Int>
struct Group
{
    Int disc;

    RawForm<Int> identity() const { return kernel::identity(disc); }

    RawForm<Int> raw(QuadForm const & f) const
    {
        RawForm<Int> r{convert<Int>(f.a()), convert<Int>(f.b()), convert<Int>(f.c())};
        kernel::reduce(r);
        return r;
    }

    QuadForm form(RawForm<Int> const & r) const
    {
        return QuadForm(to_big(r.a), to_big(r.b), to_big(r.c));
    }

    RawForm<Int> compose(RawForm<Int> const & f, RawForm<Int> const & g) const
    {
        RawForm<Int> out;
        if (!kernel::compose(f, g, disc, out))
            throw InvariantError("composition produced a non-integral form");
        return out;
    }

    RawForm<Int> power(RawForm<Int> base, std::uint64_t n) const
    {
        RawForm<Int> r = identity();
        while (n) {
            if (n & 1)
                r = compose(r, base);
            n >>= 1;
            if (n)
                base = compose(base, base);
        }
        return r;
    }

    static bool is_identity(RawForm<Int> const & f) { return f.a == 1; }
};

/* Calls fn(Group<Int>) with the int128 kernel when D is small enough. */
template <class Fn>
decltype(auto) with_group(BigInt const & D, Fn && fn)
{
    if (fast_path(D))
        return fn(Group<i128>{to_i64(D)});
    return fn(Group<mpz_class>{D});
}

void check_same_discriminant(QuadForm const & f, QuadForm const & g)
{
    if (!(f.discriminant() == g.discriminant()))
        throw DomainError("forms " + f.to_string() + " and " + g.to_string()
                          + " have different discriminants");
}

// ---------------------------------------------------------------------------
// Enumeration of reduced forms.
//
// For each a <= sqrt(|D|/3) the admissible b in (-a, a] are exactly the square
// roots of D modulo 4a taken mod 2a. Roots are assembled by CRT from roots
// modulo the prime powers of 4a, which are cached per discriminant.

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m)
{
    return static_cast<std::int64_t>(static_cast<i128>(a) * b % m);
}

std::int64_t powmod(std::int64_t base, std::int64_t e, std::int64_t m)
{
    std::int64_t r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1)
            r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m)
{
    auto const [g, x, y] = kernel::xgcd(i128(a), i128(m));
    (void)y;
    if (g != 1)
        throw InvariantError("CRT moduli are not coprime");
    return static_cast<std::int64_t>(kernel::mod(x, m));
}

/* A square root of n modulo the odd prime p, or -1. n is reduced and nonzero. */
std::int64_t sqrt_mod_prime(std::int64_t n, std::int64_t p)
{
    if (powmod(n, (p - 1) / 2, p) != 1)
        return -1;
    if (p % 4 == 3)
        return powmod(n, (p + 1) / 4, p);
    // Tonelli-Shanks
    std::int64_t q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    std::int64_t z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1)
        ++z;
    std::int64_t c = powmod(z, q, p);
    std::int64_t r = powmod(n, (q + 1) / 2, p);
    std::int64_t t = powmod(n, q, p);
    int m = s;
    while (t != 1) {
        int i = 0;
        std::int64_t tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        std::int64_t b = c;
        for (int j = 0; j < m - i - 1; ++j)
            b = mulmod(b, b, p);
        r = mulmod(r, b, p);
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        m = i;
    }
    return r;
}

std::vector<std::uint32_t> smallest_prime_factors(std::int64_t limit)
{
    std::vector<std::uint32_t> spf(static_cast<std::size_t>(limit) + 1, 0);
    for (std::int64_t i = 2; i <= limit; ++i) {
        if (spf[i])
            continue;
        for (std::int64_t j = i; j <= limit; j += i) {
            if (!spf[j])
                spf[j] = static_cast<std::uint32_t>(i);
        }
    }
    return spf;
}

class RootTables
{
    std::int64_t disc_;
    // state per odd prime p not dividing D: 0 unknown, 1 none, 2 roots stored
    std::vector<std::uint8_t> prime_state_;
    std::vector<std::array<std::int64_t, 2>> prime_roots_;
    std::unordered_map<std::int64_t, std::vector<std::int64_t>> power_roots_;
    std::vector<std::optional<std::vector<std::int64_t>>> two_roots_;

    std::int64_t residue(std::int64_t m) const
    {
        std::int64_t r = disc_ % m;
        return r < 0 ? r + m : r;
    }

    std::vector<std::int64_t> brute_force(std::int64_t m) const
    {
        std::int64_t const target = residue(m);
        std::vector<std::int64_t> roots;
        for (std::int64_t x = 0; x < m; ++x) {
            if (mulmod(x, x, m) == target)
                roots.push_back(x);
        }
        return roots;
    }

    std::vector<std::int64_t> hensel_lift(std::int64_t root, std::int64_t p, unsigned e) const
    {
        std::int64_t pj = p;
        for (unsigned j = 1; j < e; ++j) {
            std::int64_t const next = pj * p;
            i128 const f = (i128(root) * root - disc_) % next;
            std::int64_t const inv = inverse_mod((2 * root) % next, next);
            root = static_cast<std::int64_t>(kernel::mod(i128(root) - f * inv, next));
            pj = next;
        }
        return {root, pj - root};
    }

  public:
    RootTables(std::int64_t disc, std::int64_t max_prime)
        : disc_(disc)
        , prime_state_(static_cast<std::size_t>(max_prime) + 1, 0)
        , prime_roots_(static_cast<std::size_t>(max_prime) + 1)
        , two_roots_(64)
    {
    }

    std::span<std::int64_t const> odd(std::int64_t p, unsigned e, std::int64_t pe)
    {
        if (disc_ % p == 0 || e > 1) {
            auto it = power_roots_.find(pe);
            if (it == power_roots_.end()) {
                std::vector<std::int64_t> roots;
                if (disc_ % p == 0) {
                    roots = brute_force(pe);
                } else {
                    auto const base = odd(p, 1, p);
                    if (!base.empty())
                        roots = hensel_lift(base[0], p, e);
                }
                it = power_roots_.emplace(pe, std::move(roots)).first;
            }
            return it->second;
        }
        auto & state = prime_state_[p];
        if (state == 0) {
            std::int64_t const r = sqrt_mod_prime(residue(p), p);
            if (r < 0) {
                state = 1;
            } else {
                state = 2;
                prime_roots_[p] = {r, p - r};
            }
        }
        if (state == 1)
            return {};
        return prime_roots_[p];
    }

    std::span<std::int64_t const> two_power(unsigned E)
    {
        auto & slot = two_roots_[E];
        if (!slot)
            slot = brute_force(std::int64_t(1) << E);
        return *slot;
    }
};

struct PrimePowerFactor
{
    std::int64_t p;
    unsigned e;
    std::int64_t pe;
};

/* Calls emit(a, b, c) for each reduced primitive form with a in [a_lo, a_hi]. */
template <class Emit>
void scan_a_range(std::int64_t disc, std::int64_t a_lo, std::int64_t a_hi,
                  std::vector<std::uint32_t> const & spf, Emit && emit)
{
    RootTables tables(disc, a_hi);
    std::vector<PrimePowerFactor> factors;
    std::vector<std::span<std::int64_t const>> root_sets;
    std::vector<std::int64_t> cur, next;

    for (std::int64_t a = a_lo; a <= a_hi; ++a) {
        std::int64_t m = a;
        unsigned v2 = 0;
        while ((m & 1) == 0) {
            m >>= 1;
            ++v2;
        }
        factors.clear();
        root_sets.clear();
        bool solvable = true;
        while (m > 1) {
            std::int64_t const p = spf[m];
            unsigned e = 0;
            std::int64_t pe = 1;
            while (m % p == 0) {
                m /= p;
                pe *= p;
                ++e;
            }
            auto const roots = tables.odd(p, e, pe);
            if (roots.empty()) {
                solvable = false;
                break;
            }
            factors.push_back({p, e, pe});
            root_sets.push_back(roots);
        }
        if (!solvable)
            continue;
        auto const two = tables.two_power(v2 + 2);
        if (two.empty())
            continue;

        cur.assign(two.begin(), two.end());
        std::int64_t modulus = std::int64_t(1) << (v2 + 2);
        for (std::size_t i = 0; i < factors.size(); ++i) {
            std::int64_t const pe = factors[i].pe;
            std::int64_t const inv = inverse_mod(modulus % pe, pe);
            next.clear();
            for (std::int64_t s : cur) {
                for (std::int64_t r : root_sets[i]) {
                    std::int64_t const t = mulmod(((r - s) % pe + pe) % pe, inv, pe);
                    next.push_back(s + modulus * t);
                }
            }
            modulus *= pe;
            cur.swap(next);
        }

        std::int64_t const two_a = 2 * a;
        for (std::int64_t x : cur) {
            if (x >= two_a)
                continue;
            std::int64_t const b = x <= a ? x : x - two_a;
            std::int64_t const c = (b * b - disc) / (4 * a);
            if (c < a || (b < 0 && a == c))
                continue;
            if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1)
                continue;
            emit(a, b, c);
        }
    }
}

std::int64_t checked_discriminant(Discriminant const & D, EnumerationOptions const & opts)
{
    BigInt const abs_d = abs(D.value());
    std::int64_t const limit = std::min(opts.max_abs_discriminant, enumeration_hard_limit);
    if (abs_d > limit)
        throw ResourceLimitError("|D| = " + abs_d.get_str() + " exceeds the enumeration bound "
                                 + std::to_string(limit));
    return to_i64(D.value());
}

std::int64_t a_bound(std::int64_t disc)
{
    // largest a with 3a^2 <= |D|
    std::int64_t const n = -disc;
    auto a = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n) / 3));
    while (3 * (a + 1) * (a + 1) <= n)
        ++a;
    while (a > 0 && 3 * a * a > n)
        --a;
    return a;
}

struct RawTriple
{
    std::int64_t a, b, c;
};

/* Splits [1, A] into `jobs` chunks; fn(lo, hi, chunk_index) runs once per chunk. */
template <class Fn>
void run_chunks(std::int64_t A, unsigned jobs, Fn && fn)
{
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::int64_t>(A, 1))));
    if (jobs == 1) {
        fn(1, A, 0u);
        return;
    }
    std::vector<std::thread> workers;
    std::int64_t const step = (A + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
        std::int64_t const lo = 1 + j * step;
        std::int64_t const hi = std::min(A, lo + step - 1);
        if (lo > hi)
            break;
        workers.emplace_back([&, lo, hi, j] { fn(lo, hi, j); });
    }
    for (auto & w : workers)
        w.join();
}

std::vector<RawTriple> enumerate_raw(Discriminant const & D, EnumerationOptions const & opts)
{
    std::int64_t const disc = checked_discriminant(D, opts);
    std::int64_t const A = a_bound(disc);
    auto const spf = smallest_prime_factors(A);
    std::vector<std::vector<RawTriple>> parts(std::max(1u, opts.jobs));
    run_chunks(A, opts.jobs, [&](std::int64_t lo, std::int64_t hi, unsigned j) {
        scan_a_range(disc, lo, hi, spf, [&](std::int64_t a, std::int64_t b, std::int64_t c) {
            parts[j].push_back({a, b, c});
        });
    });
    std::vector<RawTriple> all;
    for (auto & part : parts)
        all.insert(all.end(), part.begin(), part.end());
    std::sort(all.begin(), all.end(), [](RawTriple const & x, RawTriple const & y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    return all;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n)
{
    std::vector<std::uint64_t> ps;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p)
            continue;
        ps.push_back(p);
        while (n % p == 0)
            n /= p;
    }
    if (n > 1)
        ps.push_back(n);
    return ps;
}

} // namespace

QuadForm principal_form(Discriminant const & D)
{
    BigInt const b = mpz_odd_p(D.value().get_mpz_t()) ? 1 : 0;
    return QuadForm(1, b, (b * b - D.value()) / 4);
}

QuadForm reduce(QuadForm const & f)
{
    RawForm<mpz_class> r{f.a(), f.b(), f.c()};
    kernel::reduce(r);
    return QuadForm(r.a, r.b, r.c);
}

std::vector<QuadForm> enumerate_reduced(Discriminant const & D, EnumerationOptions const & opts)
{
    std::vector<QuadForm> forms;
    for (auto const & t : enumerate_raw(D, opts))
        forms.emplace_back(BigInt(static_cast<long>(t.a)), BigInt(static_cast<long>(t.b)),
                           BigInt(static_cast<long>(t.c)));
    return forms;
}

std::uint64_t count_reduced(Discriminant const & D, EnumerationOptions const & opts)
{
    std::int64_t const disc = checked_discriminant(D, opts);
    std::int64_t const A = a_bound(disc);
    auto const spf = smallest_prime_factors(A);
    std::vector<std::uint64_t> counts(std::max(1u, opts.jobs), 0);
    run_chunks(A, opts.jobs, [&](std::int64_t lo, std::int64_t hi, unsigned j) {
        scan_a_range(disc, lo, hi, spf,
                     [&](std::int64_t, std::int64_t, std::int64_t) { ++counts[j]; });
    });
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t(0));
}

std::uint64_t class_number(Discriminant const & D, EnumerationOptions const & opts,
                           ClassNumberCache * cache)
{
    if (cache) {
        if (auto h = cache->get(D.value()))
            return *h;
    }
    std::uint64_t const h = count_reduced(D, opts);
    if (cache)
        cache->put(D.value(), h, "enumerate");
    return h;
}

QuadForm compose(QuadForm const & f, QuadForm const & g)
{
    check_same_discriminant(f, g);
    BigInt const D = f.b() * f.b() - 4 * f.a() * f.c();
    QuadForm const fr = reduce(f);
    QuadForm const gr = reduce(g);
    return with_group(D, [&](auto const & grp) {
        return grp.form(grp.compose(grp.raw(fr), grp.raw(gr)));
    });
}

QuadForm inverse(QuadForm const & f)
{
    return reduce(QuadForm(f.a(), -f.b(), f.c()));
}

QuadForm power(QuadForm const & f, std::uint64_t n)
{
    BigInt const D = f.b() * f.b() - 4 * f.a() * f.c();
    QuadForm const fr = reduce(f);
    return with_group(D, [&](auto const & grp) { return grp.form(grp.power(grp.raw(fr), n)); });
}

std::uint64_t element_order(QuadForm const & f, std::uint64_t max_steps)
{
    BigInt const D = f.b() * f.b() - 4 * f.a() * f.c();
    QuadForm const fr = reduce(f);
    return with_group(D, [&](auto const & grp) -> std::uint64_t {
        auto const base = grp.raw(fr);
        auto cur = base;
        std::uint64_t r = 1;
        while (!grp.is_identity(cur)) {
            if (r >= max_steps)
                throw ResourceLimitError("element order exceeds " + std::to_string(max_steps));
            cur = grp.compose(cur, base);
            ++r;
        }
        return r;
    });
}

std::optional<QuadForm> exists_element_of_order(Discriminant const & D, std::uint64_t n,
                                                EnumerationOptions const & opts,
                                                ClassNumberCache * cache)
{
    if (n == 0)
        throw DomainError("element order must be positive");
    std::uint64_t const h = class_number(D, opts, cache);
    if (h % n != 0)
        return std::nullopt;
    if (n == 1)
        return principal_form(D);

    auto const primes = prime_divisors(h);
    auto const forms = enumerate_raw(D, opts);
    return with_group(D.value(), [&](auto const & grp) -> std::optional<QuadForm> {
        using Int = decltype(grp.disc);
        for (auto const & t : forms) {
            RawForm<Int> const f{Int(t.a), Int(t.b), Int(t.c)};
            // order of f: strip primes from the exponent h while f^(r/p) stays trivial
            std::uint64_t r = h;
            for (std::uint64_t p : primes) {
                while (r % p == 0 && grp.is_identity(grp.power(f, r / p)))
                    r /= p;
            }
            if (r % n == 0)
                return grp.form(grp.power(f, r / n));
        }
        return std::nullopt;
    });
}

} // namespace classdiv::classgroup
