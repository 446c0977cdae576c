#include "classdiv/theorems.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

#include "classdiv/lehmer.hpp"
#include "classdiv/quadring.hpp"

namespace classdiv::theorems {

namespace {

unsigned long mod4(BigInt const & v)
{
    return mpz_fdiv_ui(v.get_mpz_t(), 4);
}

std::string str(BigInt const & v)
{
    return v.get_str();
}

bool divides(unsigned long d, std::uint64_t h)
{
    return d != 0 && h % d == 0;
}

} // namespace

std::string admissibility_violation(MainTheoremInstance const & inst)
{
    if (inst.ell < 2 || !intarith::is_prime(inst.ell))
        return "ell must be prime";
    if (inst.k < 3 || mpz_even_p(inst.k.get_mpz_t()))
        return "k must be odd and at least 3";
    if (inst.n < 3 || inst.n % 2 == 0)
        return "n must be odd and at least 3";
    if (gcd(inst.k, inst.ell) != 1)
        return "gcd(k, ell) must be 1";
    if (intarith::pow(inst.ell, 2 * inst.m) >= 2 * intarith::pow(inst.k, inst.n))
        return "ell^(2m) must be less than 2k^n";
    return {};
}

BigInt field_radicand(MainTheoremInstance const & inst)
{
    return intarith::pow(inst.ell, 2 * inst.m) - 2 * intarith::pow(inst.k, inst.n);
}

std::string lemma_scope_violation(BigInt const & x, BigInt const & y, unsigned long z,
                                  BigInt const & k, BigInt const & d)
{
    if (x < 1 || y < 1 || z < 1)
        return "x, y and z must be positive";
    if (k <= 1)
        return "k must exceed 1";
    if (d <= 3)
        return "d must exceed 3";
    if (mod4(d) != 1 && mod4(d) != 2)
        return "d must be 1 or 2 mod 4";
    if (!intarith::is_squarefree(d))
        return "d must be squarefree";
    if (gcd(k, 2 * d) != 1)
        return "gcd(k, 2d) must be 1";
    if (gcd(x, y) != 1)
        return "gcd(x, y) must be 1";
    if (x * x + d * y * y != 2 * intarith::pow(k, z))
        return "x^2 + d*y^2 must equal 2k^z";
    return {};
}

namespace {

std::optional<DecompositionWitness> find_decomposition(BigInt const & x, BigInt const & y,
                                                       unsigned long z, BigInt const & k,
                                                       BigInt const & d,
                                                       std::uint64_t search_limit)
{
    for (unsigned long z1 : intarith::divisors(z)) {
        unsigned long const t = z / z1;
        if (t % 2 == 0)
            continue;
        BigInt const target = 2 * intarith::pow(k, z1);
        BigInt const vmax = intarith::isqrt(target / d);
        if (vmax > search_limit)
            throw ResourceLimitError("norm equation u^2 + " + str(d) + "*v^2 = " + str(target)
                                     + " needs more than " + std::to_string(search_limit)
                                     + " candidates");
        for (BigInt v = 1; v <= vmax; ++v) {
            auto const u = intarith::exact_sqrt(target - d * v * v);
            if (!u || *u == 0 || gcd(*u, v) != 1)
                continue;
            quadring::HalfQuadInt const base(d, *u, v, 1);
            auto const raised = quadring::power(base, t);
            for (int lambda2 : {1, -1}) {
                auto const r2 = lambda2 == 1 ? raised : quadring::conjugate(raised);
                for (int lambda1 : {1, -1}) {
                    auto const r = lambda1 == 1 ? r2 : quadring::negate(r2);
                    if (r.x() == x && r.y() == y)
                        return DecompositionWitness{*u, v, z1, t, lambda1, lambda2};
                }
            }
        }
    }
    return std::nullopt;
}

} // namespace

LemmaResult lemma_bs_decompose(BigInt const & x, BigInt const & y, unsigned long z,
                               BigInt const & k, BigInt const & d, EngineConfig const & cfg)
{
    auto const why = lemma_scope_violation(x, y, z, k, d);
    if (!why.empty())
        throw OutOfScopeError(why);

    auto const w = find_decomposition(x, y, z, k, d, cfg.norm_search_limit);
    if (!w)
        throw InvariantError("no decomposition of (" + str(x) + " + " + str(y) + "*sqrt(-"
                             + str(d) + "))/sqrt(2) exists; this contradicts the lemma");

    LemmaResult r{*w, 0, std::nullopt, std::nullopt, {}};
    auto const D = classgroup::field_discriminant(d);
    r.discriminant = D.value();
    auto const h = classgroup::class_number(D, cfg.enumeration, cfg.cache);
    r.class_number = h;
    if (!divides(w->z1, h))
        r.problems.push_back("z1 = " + std::to_string(w->z1) + " does not divide h = "
                             + std::to_string(h));
    if (!divides(2 * w->z1, h)) {
        r.problems.push_back("2*z1 = " + std::to_string(2 * w->z1) + " does not divide h = "
                             + std::to_string(h) + "; falsification candidate");
    } else {
        r.order_witness = classgroup::exists_element_of_order(D, 2 * w->z1, cfg.enumeration,
                                                              cfg.cache);
        if (!r.order_witness)
            r.problems.push_back("no class of order " + std::to_string(2 * w->z1));
    }
    return r;
}

std::string to_string(TheoremCase c)
{
    switch (c) {
    case TheoremCase::i: return "i";
    case TheoremCase::ii: return "ii";
    case TheoremCase::iii: return "iii";
    }
    return "?";
}

std::string to_string(Status s)
{
    switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::out_of_lemma_scope: return "out-of-lemma-scope";
    case Status::resource_limit: return "resource-limit";
    }
    return "?";
}

PredictedDivisor predicted_divisor(MainTheoremInstance const & inst, BigInt const & d)
{
    unsigned long const n = inst.n;
    BigInt const minus_d = -d;
    PredictedDivisor p{n, TheoremCase::i, {}};

    if (inst.m == 0) {
        p.derivation.push_back("m = 0");
        return p;
    }

    BigInt const ell_2m = intarith::pow(inst.ell, 2 * inst.m);
    unsigned long const k4 = mod4(inst.k);

    if (inst.ell == 2) {
        p.theorem_case = TheoremCase::ii;
        if (n % 3 != 0) {
            p.derivation.push_back("3 does not divide n");
            return p;
        }
        if (k4 == 1) {
            p.derivation.push_back("k = 1 mod 4");
            return p;
        }
        p.derivation.push_back("k = 3 mod 4 and 3 | n");
        unsigned long three_j = 1;
        while (n % (three_j * 3) == 0) {
            unsigned long const e = n / (three_j * 3);
            BigInt const num = ell_2m - 2 * intarith::pow(inst.k, e);
            if (!intarith::square_ratio(num, minus_d)) {
                p.derivation.push_back("(4^m - 2k^" + std::to_string(e) + ")/(-d) is not a square");
                p.value = n / three_j;
                return p;
            }
            p.derivation.push_back("(4^m - 2k^" + std::to_string(e) + ")/(-d) is a square");
            three_j *= 3;
        }
        p.derivation.push_back("every 3-level is a square");
        p.value = n / three_j;
        return p;
    }

    p.theorem_case = TheoremCase::iii;
    if (d == 1)
        throw OutOfScopeError("d = 1 in the odd-ell case");
    if (k4 == 3) {
        p.derivation.push_back("k = 3 mod 4");
        return p;
    }
    p.derivation.push_back("k = 1 mod 4");
    unsigned long l = 1;
    for (unsigned long t : intarith::divisors(n)) {
        if (t == 1)
            continue;
        if (intarith::square_ratio(1 - 2 * intarith::pow(inst.k, n / t), minus_d)) {
            p.derivation.push_back("t = " + std::to_string(t) + ": (1 - 2k^"
                                   + std::to_string(n / t) + ")/(-d) is a square");
            l = std::lcm(l, t);
        }
    }
    if (n % 3 == 0 && intarith::square_ratio(ell_2m - 2 * intarith::pow(inst.k, n / 3), minus_d)) {
        p.derivation.push_back("t = 3: (ell^(2m) - 2k^" + std::to_string(n / 3)
                               + ")/(-d) is a square");
        l = std::lcm(l, 3UL);
    }
    if (l == 1)
        p.derivation.push_back("no square-ratio test fired");
    p.value = n / l;
    return p;
}

namespace {

/* |L_t| * u == x for the Lehmer pair with parameters (-2 d v^2, 2 u^2). */
void check_lehmer_consistency(BigInt const & x, BigInt const & d, DecompositionWitness const & w,
                              std::vector<std::string> & problems)
{
    auto const params = lehmer::LehmerParams::make(-2 * d * w.y1 * w.y1, 2 * w.x1 * w.x1);
    if (!params) {
        problems.push_back("(-2dv^2, 2u^2) is not a Lehmer pair");
        return;
    }
    BigInt const L = lehmer::lehmer_number(*params, w.t);
    if (abs(L) * w.x1 != x)
        problems.push_back("|L_t| = " + str(abs(L)) + " but x/u = " + str(x) + "/" + str(w.x1));
}

void attach_lemma(VerificationReport & rep, LemmaResult const & lr, BigInt const & x,
                  BigInt const & d)
{
    rep.decomposition = lr.witness;
    rep.exact_divisor = lr.witness.z1;
    rep.order_witness = lr.order_witness;
    for (auto const & p : lr.problems)
        rep.notes.push_back(p);
    check_lehmer_consistency(x, d, lr.witness, rep.notes);
}

} // namespace

VerificationReport verify_main_theorem(MainTheoremInstance const & inst, EngineConfig const & cfg)
{
    auto const why = admissibility_violation(inst);
    if (!why.empty())
        throw DomainError(why);

    VerificationReport rep;
    rep.kind = "main";
    rep.parameters = {{"ell", str(inst.ell)},
                      {"m", std::to_string(inst.m)},
                      {"k", str(inst.k)},
                      {"n", std::to_string(inst.n)}};
    rep.label = "ell=" + str(inst.ell) + " m=" + std::to_string(inst.m) + " k=" + str(inst.k)
                + " n=" + std::to_string(inst.n);
    rep.N = field_radicand(inst);

    try {
        auto const sf = intarith::squarefree_decompose(rep.N, cfg.factor_limits);
        rep.d = sf.d;
        rep.s = sf.s;
    } catch (ResourceLimitError const & e) {
        rep.status = Status::resource_limit;
        rep.notes.push_back(e.what());
        return rep;
    }

    bool failed = false;
    auto problem = [&](std::string msg) {
        rep.notes.push_back(std::move(msg));
        failed = true;
    };

    if (inst.ell == 2 && inst.m >= 1) {
        if (mod4(rep.d) != 2)
            problem("parity: expected d = 2 mod 4");
    } else {
        if (mod4(rep.N) != 3)
            problem("parity: expected N = 3 mod 4");
        if (mpz_even_p(rep.s.get_mpz_t()))
            problem("parity: expected s odd");
        if (mod4(rep.d) != 1)
            problem("parity: expected d = 1 mod 4");
    }

    try {
        auto const pd = predicted_divisor(inst, rep.d);
        rep.theorem_case = pd.theorem_case;
        rep.predicted_divisor = pd.value;
        rep.derivation = pd.derivation;
    } catch (OutOfScopeError const & e) {
        rep.status = Status::out_of_lemma_scope;
        rep.notes.push_back(e.what());
        return rep;
    }

    auto const D = classgroup::field_discriminant(rep.d);
    rep.discriminant = D.value();
    try {
        rep.class_number = classgroup::class_number(D, cfg.enumeration, cfg.cache);
    } catch (ResourceLimitError const & e) {
        rep.status = Status::resource_limit;
        rep.notes.push_back(e.what());
        return rep;
    }
    if (!divides(rep.predicted_divisor, *rep.class_number))
        problem("predicted divisor " + std::to_string(rep.predicted_divisor)
                + " does not divide h; falsification candidate");

    BigInt const x = intarith::pow(inst.ell, inst.m);
    auto const scope = lemma_scope_violation(x, rep.s, inst.n, inst.k, rep.d);
    bool resource_hit = false;
    if (!scope.empty()) {
        rep.notes.push_back("lemma not applicable: " + scope);
    } else {
        try {
            auto const lr = lemma_bs_decompose(x, rep.s, inst.n, inst.k, rep.d, cfg);
            std::size_t const before = rep.notes.size();
            attach_lemma(rep, lr, x, rep.d);
            failed = failed || rep.notes.size() != before;
        } catch (InvariantError const & e) {
            problem(e.what());
        } catch (ResourceLimitError const & e) {
            rep.notes.push_back(e.what());
            resource_hit = true;
        }
    }

    if (failed)
        rep.status = Status::fail;
    else if (resource_hit)
        rep.status = Status::resource_limit;
    else if (!scope.empty())
        rep.status = Status::out_of_lemma_scope;
    else
        rep.status = Status::pass;
    return rep;
}

VerificationReport verify_lemma(BigInt const & x, BigInt const & y, unsigned long z,
                                BigInt const & k, BigInt const & d, EngineConfig const & cfg)
{
    VerificationReport rep;
    rep.kind = "lemma";
    rep.parameters = {{"x", str(x)}, {"y", str(y)}, {"z", std::to_string(z)},
                      {"k", str(k)}, {"d", str(d)}};
    rep.label = "x=" + str(x) + " y=" + str(y) + " z=" + std::to_string(z) + " k=" + str(k)
                + " d=" + str(d);
    rep.N = x * x - 2 * intarith::pow(k, z);
    rep.d = d;
    rep.s = y;
    try {
        auto const lr = lemma_bs_decompose(x, y, z, k, d, cfg);
        rep.discriminant = lr.discriminant;
        rep.class_number = lr.class_number;
        rep.predicted_divisor = lr.witness.z1;
        attach_lemma(rep, lr, x, d);
        rep.status = rep.notes.empty() ? Status::pass : Status::fail;
    } catch (OutOfScopeError const & e) {
        rep.status = Status::out_of_lemma_scope;
        rep.notes.push_back(e.what());
    } catch (InvariantError const & e) {
        rep.status = Status::fail;
        rep.notes.push_back(e.what());
    } catch (ResourceLimitError const & e) {
        rep.status = Status::resource_limit;
        rep.notes.push_back(e.what());
    }
    return rep;
}

namespace {

VerificationReport tuple_member(std::string label, BigInt const & value,
                                SquarefreeDecomposition const & sf, BigInt const & k,
                                unsigned long n, EngineConfig const & cfg)
{
    VerificationReport rep;
    rep.kind = "tuple";
    rep.label = std::move(label);
    rep.parameters = {{"k", str(k)}, {"n", std::to_string(n)}, {"member", rep.label}};
    rep.N = value;
    rep.d = sf.d;
    rep.s = sf.s;
    rep.predicted_divisor = n;
    auto const D = classgroup::field_discriminant(sf.d);
    rep.discriminant = D.value();
    try {
        rep.class_number = classgroup::class_number(D, cfg.enumeration, cfg.cache);
    } catch (ResourceLimitError const & e) {
        rep.status = Status::resource_limit;
        rep.notes.push_back(e.what());
        return rep;
    }
    if (divides(n, *rep.class_number)) {
        rep.status = Status::pass;
    } else {
        rep.status = Status::fail;
        rep.notes.push_back(std::to_string(n) + " does not divide h; falsification candidate");
    }
    return rep;
}

VerificationReport tuple_member(std::string label, BigInt const & value, BigInt const & k,
                                unsigned long n, EngineConfig const & cfg)
{
    try {
        auto const sf = intarith::squarefree_decompose(value, cfg.factor_limits);
        return tuple_member(std::move(label), value, sf, k, n, cfg);
    } catch (ResourceLimitError const & e) {
        VerificationReport rep;
        rep.kind = "tuple";
        rep.label = std::move(label);
        rep.parameters = {{"k", str(k)}, {"n", std::to_string(n)}, {"member", rep.label}};
        rep.N = value;
        rep.predicted_divisor = n;
        rep.status = Status::resource_limit;
        rep.notes.push_back(e.what());
        return rep;
    }
}

} // namespace

std::vector<VerificationReport> verify_tuple_family(BigInt const & k, unsigned long n,
                                                    std::optional<unsigned long> m_max,
                                                    EngineConfig const & cfg)
{
    if (k < 3 || mpz_even_p(k.get_mpz_t()))
        throw DomainError("k must be odd and at least 3");
    if (n < 3 || n % 2 == 0)
        throw DomainError("n must be odd and at least 3");

    BigInt const base = 1 - 2 * intarith::pow(k, n);
    BigInt const a = -base;
    BigInt const d = intarith::pow(base, n);
    std::vector<VerificationReport> out;

    // d = base^n with n odd: the squarefree part is that of base.
    try {
        auto sf = intarith::squarefree_decompose(base, cfg.factor_limits);
        sf.s *= intarith::pow(a, (n - 1) / 2);
        auto rep = tuple_member("d", d, sf, k, n, cfg);
        rep.derivation.push_back("d = (1 - 2k^n)^n");
        out.push_back(std::move(rep));
    } catch (ResourceLimitError const & e) {
        VerificationReport rep;
        rep.kind = "tuple";
        rep.label = "d";
        rep.parameters = {{"k", str(k)}, {"n", std::to_string(n)}, {"member", "d"}};
        rep.N = d;
        rep.predicted_divisor = n;
        rep.status = Status::resource_limit;
        rep.notes.push_back(e.what());
        out.push_back(std::move(rep));
    }

    if (n == 5 && a == 3) {
        VerificationReport rep;
        rep.kind = "tuple";
        rep.label = "d+1";
        rep.parameters = {{"k", str(k)}, {"n", std::to_string(n)}, {"member", "d+1"}};
        rep.N = d + 1;
        rep.predicted_divisor = n;
        rep.status = Status::out_of_lemma_scope;
        rep.notes.push_back("(n, a) = (5, 3) is excluded from the d+1 family");
        out.push_back(std::move(rep));
    } else {
        auto rep = tuple_member("d+1", d + 1, k, n, cfg);
        rep.derivation.push_back("d + 1 = 1 - a^n with a = 2k^n - 1");
        out.push_back(std::move(rep));
    }

    {
        auto rep = tuple_member("4d+1", 4 * d + 1, k, n, cfg);
        rep.derivation.push_back("4d + 1 = 1 - 4a^n with a = 2k^n - 1");
        if (rep.status == Status::pass) {
            auto const D = classgroup::Discriminant(*rep.discriminant);
            rep.order_witness = classgroup::exists_element_of_order(D, n, cfg.enumeration,
                                                                    cfg.cache);
            if (!rep.order_witness) {
                rep.status = Status::fail;
                rep.notes.push_back("no class of order " + std::to_string(n));
            }
        }
        out.push_back(std::move(rep));
    }

    BigInt const limit = 2 * abs(d);
    BigInt four_m = 1;
    for (unsigned long m = 0; four_m <= limit && (!m_max || m <= *m_max); ++m, four_m *= 4) {
        std::string const label = "2d+4^" + std::to_string(m);
        auto rep = tuple_member(label, 2 * d + four_m, k, n, cfg);
        rep.theorem_case = m == 0 ? TheoremCase::i : TheoremCase::ii;
        rep.derivation.push_back("ell = 2, m = " + std::to_string(m) + ", k = a");
        out.push_back(std::move(rep));
    }
    return out;
}

ScanResult scan(ScanRanges const & ranges, EngineConfig const & cfg)
{
    ScanResult result;
    auto & sum = result.summary;
    std::vector<MainTheoremInstance> admissible;

    auto skip = [&](std::string const & reason) { ++sum.skipped[reason]; };

    for (auto const & ell : ranges.ell_set) {
        bool const ell_prime = ell >= 2 && intarith::is_prime(ell);
        for (unsigned long m = ranges.m_lo; m <= ranges.m_hi; ++m) {
            for (BigInt k = ranges.k_lo; k <= ranges.k_hi; ++k) {
                for (unsigned long n : ranges.n_set) {
                    ++sum.candidates;
                    MainTheoremInstance const inst{ell, m, k, n};
                    if (!ell_prime) {
                        skip("ell-not-prime");
                        continue;
                    }
                    if (k < 3 || mpz_even_p(k.get_mpz_t())) {
                        skip("k-not-odd-at-least-3");
                        continue;
                    }
                    if (n < 3 || n % 2 == 0) {
                        skip("n-not-odd-at-least-3");
                        continue;
                    }
                    if (gcd(k, ell) != 1) {
                        skip("gcd-k-ell");
                        continue;
                    }
                    BigInt const N = field_radicand(inst);
                    if (N >= 0) {
                        skip("not-imaginary");
                        continue;
                    }
                    if (abs(N) > ranges.max_abs_N) {
                        skip("abs-N-above-bound");
                        continue;
                    }
                    admissible.push_back(inst);
                }
            }
        }
    }
    sum.admissible = admissible.size();

    result.reports.resize(admissible.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < admissible.size(); i = next++) {
            try {
                result.reports[i] = verify_main_theorem(admissible[i], cfg);
            } catch (std::exception const & e) {
                auto & rep = result.reports[i];
                rep.kind = "main";
                rep.label = "ell=" + str(admissible[i].ell) + " m=" + std::to_string(admissible[i].m)
                            + " k=" + str(admissible[i].k) + " n=" + std::to_string(admissible[i].n);
                rep.status = Status::fail;
                rep.notes.push_back(std::string("unexpected error: ") + e.what());
            }
        }
    };
    unsigned const jobs = std::max(1U, std::min<unsigned>(ranges.jobs, admissible.size()));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
    }

    for (auto const & rep : result.reports) {
        switch (rep.status) {
        case Status::pass: ++sum.pass; break;
        case Status::fail: ++sum.fail; break;
        case Status::out_of_lemma_scope: ++sum.out_of_lemma_scope; break;
        case Status::resource_limit: ++sum.resource_limit; break;
        }
    }
    return result;
}

RamanujanNagellResult check_no_ramanujan_nagell_solutions(unsigned long bound)
{
    if (bound < 3)
        throw DomainError("bound must be at least 3");
    unsigned long ceil_log2 = 0;
    while ((1UL << ceil_log2) < bound)
        ++ceil_log2;
    RamanujanNagellResult r{true, 2 * ceil_log2 + 1, {}};
    for (unsigned long y = 3; y <= bound; y += 2) {
        BigInt const by = y;
        BigInt power = by * by * by;
        for (unsigned long n = 3; n <= r.max_exponent; n += 2, power *= by * by) {
            if (auto const x = intarith::exact_sqrt(2 * power - 1)) {
                r.solutions.emplace_back(*x, by, n);
                r.none_found = false;
            }
        }
    }
    return r;
}

} // namespace classdiv::theorems
