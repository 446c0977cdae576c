#include "classdiv/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <memory>

#include <CLI11.hpp>

#include "classdiv/cache.hpp"
#include "classdiv/classgroup.hpp"
#include "classdiv/lehmer.hpp"
#include "classdiv/report.hpp"
#include "classdiv/theorems.hpp"

namespace classdiv::cli {

namespace {

BigInt parse_int(std::string const & text, std::string const & what)
{
    BigInt v;
    std::string body = text;
    if (!body.empty() && body.front() == '+')
        body.erase(0, 1);
    if (body.empty() || body.front() == '+' || v.set_str(body, 10) != 0)
        throw DomainError(what + ": '" + text + "' is not an integer");
    return v;
}

unsigned long parse_ulong(std::string const & text, std::string const & what)
{
    BigInt const v = parse_int(text, what);
    if (v < 0 || !mpz_fits_ulong_p(v.get_mpz_t()))
        throw DomainError(what + ": '" + text + "' is not a non-negative machine integer");
    return v.get_ui();
}

std::vector<std::string> split(std::string const & text, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto const pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos)
            return parts;
        start = pos + 1;
    }
}

std::pair<std::string, std::string> parse_range(std::string const & text, std::string const & what)
{
    auto const pos = text.find("..");
    if (pos == std::string::npos)
        throw DomainError(what + ": expected lo..hi, got '" + text + "'");
    return {text.substr(0, pos), text.substr(pos + 2)};
}

std::string join_args(std::vector<std::string> const & args)
{
    std::string s;
    for (std::size_t i = 0; i < args.size(); ++i)
        s += (i ? " " : "") + args[i];
    return s;
}

struct Globals
{
    std::string cache_path;
    unsigned jobs = 1;
    std::string format = "json";
    bool no_timing = false;
    bool audit = false;
    std::string max_abs_D = "40000000000";
};

/* Shared state for one invocation. */
class Session
{
    std::unique_ptr<classgroup::ClassNumberCache> cache_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();

  public:
    Globals g;
    std::string command;
    theorems::EngineConfig cfg;

    void open(std::ostream & err)
    {
        std::int64_t bound = 0;
        BigInt const b = parse_int(g.max_abs_D, "--max-abs-D");
        if (b < 1 || !mpz_fits_slong_p(b.get_mpz_t()))
            throw DomainError("--max-abs-D must be a positive 64-bit integer");
        bound = b.get_si();
        if (g.jobs < 1)
            throw DomainError("--jobs must be at least 1");
        cfg.enumeration.max_abs_discriminant = bound;
        cfg.enumeration.jobs = g.jobs;

        std::string path = g.cache_path;
        if (path.empty()) {
            if (char const * env = std::getenv(cache::path_env_var))
                path = env;
        }
        if (path.empty()) {
            if (g.audit)
                throw DomainError("--audit needs a cache (--cache or " + std::string(cache::path_env_var)
                                  + ")");
            cache_ = std::make_unique<classgroup::MemoryClassNumberCache>();
        } else {
            auto file = std::make_unique<cache::FileCache>(path);
            if (g.audit) {
                auto const r = cache::audit(file->entries(), cfg.enumeration);
                err << "audit: rechecked " << r.checked << " cached class numbers, "
                    << r.mismatches.size() << " mismatches\n";
                for (auto const & e : r.mismatches)
                    err << "audit: cached h(" << e.D << ") = " << e.h << " is wrong\n";
                if (!r.mismatches.empty())
                    throw InvariantError("cache audit found wrong class numbers");
            }
            cache_ = std::move(file);
        }
        cfg.cache = cache_.get();
    }

    double elapsed() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    int emit(report::ReportDocument doc, std::ostream & out) const
    {
        doc.command = command;
        if (!g.no_timing)
            doc.elapsed_seconds = elapsed();
        if (g.format == "csv")
            out << report::render_csv(doc);
        else if (g.format == "text")
            out << report::render_text(doc);
        else
            out << report::render_json(doc);
        return report::exit_code(doc);
    }
};

std::string catalog_text(lehmer::LehmerParams const & params, unsigned long n)
{
    if (n % 2 == 0 || n < 5)
        return "n/a";
    auto const rec = lehmer::defective_catalog_lookup(params, n);
    if (!rec)
        return "none";
    std::string s = lehmer::to_string(rec->source) + "(n=" + std::to_string(rec->n);
    if (rec->family_index)
        s += ",k=" + std::to_string(rec->family_index->k)
             + ",epsilon=" + std::to_string(rec->family_index->epsilon);
    return s + ")";
}

/* Prints the defect analysis; returns 1 if the catalog and the computation disagree. */
int print_defect(lehmer::LehmerParams const & params, unsigned long n, std::ostream & out)
{
    auto const pd = lehmer::has_primitive_divisor(params, n);
    out << "defective=" << (pd.has_primitive ? "false" : "true") << '\n';
    if (pd.has_primitive) {
        if (pd.witness)
            out << "primitive-divisor=" << *pd.witness << '\n';
        else
            out << "primitive-part=" << pd.primitive_part << '\n';
    }
    auto const cat = catalog_text(params, n);
    out << "catalog=" << cat << '\n';
    if (cat == "n/a")
        return 0;
    bool const listed = cat != "none";
    if (listed == pd.has_primitive) {
        out << "consistent=false\n";
        return 1;
    }
    return 0;
}

} // namespace

int run(std::vector<std::string> const & args, std::ostream & out, std::ostream & err)
{
    Session session;
    session.command = join_args(args);
    auto & g = session.g;

    CLI::App app{"Class number divisibility verification toolkit", "classdiv"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--cache", g.cache_path,
                   std::string("Class-number cache file (default: $") + cache::path_env_var + ")");
    app.add_option("--jobs", g.jobs, "Worker threads");
    app.add_option("--format", g.format, "Report format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_flag("--no-timing", g.no_timing, "Omit timing from reports");
    app.add_flag("--audit", g.audit, "Recompute a 5% sample of cached class numbers first");
    app.add_option("--max-abs-D", g.max_abs_D, "Largest |discriminant| to enumerate");

    std::string D, N, a, b, n, ell, m, k, x, y, z, d, mmax, bound;
    std::string ell_set, m_range, k_range, n_set, max_abs_N = "1000000000";

    auto * cmd_h = app.add_subcommand("class-number", "Class number of a negative discriminant");
    cmd_h->add_option("-D", D, "Discriminant")->required();
    auto * cmd_forms = app.add_subcommand("forms", "Reduced forms of a negative discriminant");
    cmd_forms->add_option("-D", D, "Discriminant")->required();
    auto * cmd_sf = app.add_subcommand("squarefree", "Write N = sign * d * s^2");
    cmd_sf->add_option("N", N, "Integer")->required();
    auto * cmd_lehmer = app.add_subcommand("lehmer", "Lehmer number L_n of the pair (a, b)");
    auto * cmd_defect = app.add_subcommand("defective", "Whether (a, b) is n-defective");
    for (auto * c : {cmd_lehmer, cmd_defect}) {
        c->add_option("--a", a, "(alpha + beta)^2")->required();
        c->add_option("--b", b, "(alpha - beta)^2")->required();
        c->add_option("--n", n, "Index")->required();
    }

    auto * cmd_verify = app.add_subcommand("verify", "Verify one instance");
    cmd_verify->require_subcommand(1);
    auto * v_main = cmd_verify->add_subcommand("main", "h(Q(sqrt(ell^(2m) - 2k^n)))");
    v_main->add_option("--ell", ell)->required();
    v_main->add_option("--m", m)->required();
    v_main->add_option("--k", k)->required();
    v_main->add_option("--n", n)->required();
    auto * v_lemma = cmd_verify->add_subcommand("lemma", "Decompose x^2 + d*y^2 = 2k^z");
    v_lemma->add_option("--x", x)->required();
    v_lemma->add_option("--y", y)->required();
    v_lemma->add_option("--z", z)->required();
    v_lemma->add_option("--k", k)->required();
    v_lemma->add_option("--d", d)->required();
    auto * v_tuples = cmd_verify->add_subcommand("tuples", "Members of the (1 - 2k^n)^n family");
    v_tuples->add_option("--k", k)->required();
    v_tuples->add_option("--n", n)->required();
    v_tuples->add_option("--mmax", mmax, "Largest m in the 2d + 4^m members");

    auto * cmd_check = app.add_subcommand("check", "Consistency checks");
    cmd_check->require_subcommand(1);
    auto * c_rn = cmd_check->add_subcommand("rn", "No x^2 + 1 = 2y^n with odd y > 1");
    c_rn->add_option("--bound", bound)->required();

    auto * cmd_scan = app.add_subcommand("scan", "Verify every admissible instance in a box");
    cmd_scan->add_option("--ell-set", ell_set, "Comma separated primes")->required();
    cmd_scan->add_option("--m-range", m_range, "lo..hi")->required();
    cmd_scan->add_option("--k-range", k_range, "lo..hi")->required();
    cmd_scan->add_option("--n-set", n_set, "Comma separated exponents")->required();
    cmd_scan->add_option("--max-abs-N", max_abs_N, "Largest |ell^(2m) - 2k^n|");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (CLI::CallForHelp const & e) {
        out << app.help();
        return 0;
    } catch (CLI::CallForAllHelp const & e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (CLI::ParseError const & e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        session.open(err);
        auto & cfg = session.cfg;

        if (*cmd_h) {
            classgroup::Discriminant const disc(parse_int(D, "-D"));
            out << classgroup::class_number(disc, cfg.enumeration, cfg.cache) << '\n';
            return 0;
        }
        if (*cmd_forms) {
            classgroup::Discriminant const disc(parse_int(D, "-D"));
            for (auto const & f : classgroup::enumerate_reduced(disc, cfg.enumeration))
                out << f.to_string() << '\n';
            return 0;
        }
        if (*cmd_sf) {
            auto const r = intarith::squarefree_decompose(parse_int(N, "N"), cfg.factor_limits);
            out << "sign=" << r.sign << '\n' << "d=" << r.d << '\n' << "s=" << r.s << '\n';
            return 0;
        }
        if (*cmd_lehmer || *cmd_defect) {
            lehmer::LehmerParams const params(parse_int(a, "--a"), parse_int(b, "--b"));
            unsigned long const idx = parse_ulong(n, "--n");
            if (idx == 0)
                throw DomainError("--n must be positive");
            if (*cmd_lehmer)
                out << "L=" << lehmer::lehmer_number(params, idx) << '\n';
            return print_defect(params, idx, out);
        }
        if (*v_main) {
            theorems::MainTheoremInstance const inst{parse_int(ell, "--ell"), parse_ulong(m, "--m"),
                                                     parse_int(k, "--k"), parse_ulong(n, "--n")};
            report::ReportDocument doc;
            doc.parameters = {{"ell", ell}, {"m", m}, {"k", k}, {"n", n}};
            doc.results.push_back(theorems::verify_main_theorem(inst, cfg));
            return session.emit(std::move(doc), out);
        }
        if (*v_lemma) {
            report::ReportDocument doc;
            doc.parameters = {{"x", x}, {"y", y}, {"z", z}, {"k", k}, {"d", d}};
            doc.results.push_back(theorems::verify_lemma(parse_int(x, "--x"), parse_int(y, "--y"),
                                                         parse_ulong(z, "--z"), parse_int(k, "--k"),
                                                         parse_int(d, "--d"), cfg));
            return session.emit(std::move(doc), out);
        }
        if (*v_tuples) {
            std::optional<unsigned long> m_max;
            if (!mmax.empty())
                m_max = parse_ulong(mmax, "--mmax");
            report::ReportDocument doc;
            doc.parameters = {{"k", k}, {"n", n}};
            if (m_max)
                doc.parameters.emplace_back("mmax", mmax);
            doc.results = theorems::verify_tuple_family(parse_int(k, "--k"), parse_ulong(n, "--n"),
                                                        m_max, cfg);
            return session.emit(std::move(doc), out);
        }
        if (*c_rn) {
            auto const r = theorems::check_no_ramanujan_nagell_solutions(parse_ulong(bound, "--bound"));
            out << "exponents=3.." << r.max_exponent << '\n';
            for (auto const & [sx, sy, sn] : r.solutions)
                out << "solution x=" << sx << " y=" << sy << " n=" << sn << '\n';
            out << "no-solutions=" << (r.none_found ? "true" : "false") << '\n';
            return r.none_found ? 0 : 1;
        }
        if (*cmd_scan) {
            theorems::ScanRanges ranges;
            for (auto const & e : split(ell_set, ','))
                ranges.ell_set.push_back(parse_int(e, "--ell-set"));
            auto const [mlo, mhi] = parse_range(m_range, "--m-range");
            ranges.m_lo = parse_ulong(mlo, "--m-range");
            ranges.m_hi = parse_ulong(mhi, "--m-range");
            auto const [klo, khi] = parse_range(k_range, "--k-range");
            ranges.k_lo = parse_int(klo, "--k-range");
            ranges.k_hi = parse_int(khi, "--k-range");
            for (auto const & e : split(n_set, ','))
                ranges.n_set.push_back(parse_ulong(e, "--n-set"));
            ranges.max_abs_N = parse_int(max_abs_N, "--max-abs-N");
            ranges.jobs = g.jobs;
            cfg.enumeration.jobs = 1;

            report::ReportDocument doc;
            doc.parameters = {{"ell-set", ell_set}, {"m-range", m_range}, {"k-range", k_range},
                              {"n-set", n_set}, {"max-abs-N", max_abs_N}};
            auto result = theorems::scan(ranges, cfg);
            doc.results = std::move(result.reports);
            doc.scan_summary = result.summary;
            return session.emit(std::move(doc), out);
        }
    } catch (ResourceLimitError const & e) {
        err << "resource limit: " << e.what() << '\n';
        return 3;
    } catch (InvariantError const & e) {
        err << "invariant violated: " << e.what() << '\n';
        return 1;
    } catch (IntegrityError const & e) {
        err << "cache: " << e.what() << '\n';
        return 2;
    } catch (Error const & e) {
        err << "invalid input: " << e.what() << '\n';
        return 2;
    }
    err << app.help();
    return 2;
}

} // namespace classdiv::cli
