#include "classdiv/cache.hpp"

#include <json.hpp>

namespace classdiv::cache {

namespace {

using json = nlohmann::ordered_json;

std::string where(std::size_t line_number)
{
    return "cache line " + std::to_string(line_number) + ": ";
}

void check_entry(CacheEntry const & e, std::string const & prefix)
{
    if (e.D >= 0 || (mpz_fdiv_ui(e.D.get_mpz_t(), 4) != 0 && mpz_fdiv_ui(e.D.get_mpz_t(), 4) != 1))
        throw IntegrityError(prefix + "D must be a negative discriminant");
    if (e.h < 1)
        throw IntegrityError(prefix + "h must be positive");
}

} // namespace

std::string serialize(CacheEntry const & e)
{
    json j;
    j["v"] = e.version;
    j["D"] = e.D.get_si();
    j["h"] = e.h;
    j["method"] = e.method;
    return j.dump();
}

CacheEntry parse_line(std::string const & line, std::size_t line_number)
{
    json j;
    try {
        j = json::parse(line);
    } catch (json::exception const & ex) {
        throw IntegrityError(where(line_number) + "not valid JSON (" + ex.what() + ")");
    }
    if (!j.is_object())
        throw IntegrityError(where(line_number) + "expected an object");
    for (char const * key : {"v", "D", "h", "method"}) {
        if (!j.contains(key))
            throw IntegrityError(where(line_number) + "missing field '" + key + "'");
    }
    if (!j["v"].is_number_integer() || j["v"].get<int>() != schema_version)
        throw IntegrityError(where(line_number) + "unsupported schema version");
    if (!j["D"].is_number_integer() || !j["h"].is_number_integer() || !j["method"].is_string())
        throw IntegrityError(where(line_number) + "field of the wrong type");
    if (j["h"].get<std::int64_t>() < 1)
        throw IntegrityError(where(line_number) + "h must be positive");
    CacheEntry e{BigInt(static_cast<long>(j["D"].get<std::int64_t>())),
                 j["h"].get<std::uint64_t>(), j["method"].get<std::string>(), schema_version};
    check_entry(e, where(line_number));
    return e;
}

std::vector<CacheEntry> load(std::filesystem::path const & path)
{
    std::map<BigInt, CacheEntry> entries;
    std::ifstream in(path);
    if (!in) {
        if (std::filesystem::exists(path))
            throw IntegrityError("cannot read cache file " + path.string());
        return {};
    }
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
        if (line.empty())
            continue;
        auto e = parse_line(line, number);
        auto [it, inserted] = entries.emplace(e.D, e);
        if (!inserted && it->second.h != e.h)
            throw IntegrityError(where(number) + "D = " + e.D.get_str() + " recorded with h = "
                                 + std::to_string(it->second.h) + " and h = "
                                 + std::to_string(e.h));
    }
    std::vector<CacheEntry> out;
    out.reserve(entries.size());
    for (auto & kv : entries)
        out.push_back(std::move(kv.second));
    return out;
}

FileCache::FileCache(std::filesystem::path path)
    : path_(std::move(path))
{
    for (auto & e : load(path_))
        entries_.emplace(e.D, e);
}

std::optional<std::uint64_t> FileCache::get(BigInt const & D)
{
    std::lock_guard lock(mutex_);
    auto it = entries_.find(D);
    if (it == entries_.end())
        return std::nullopt;
    return it->second.h;
}

void FileCache::put(BigInt const & D, std::uint64_t h, std::string const & method)
{
    CacheEntry e{D, h, method, schema_version};
    check_entry(e, "cache put: ");
    std::lock_guard lock(mutex_);
    auto [it, inserted] = entries_.emplace(D, e);
    if (!inserted) {
        if (it->second.h != h)
            throw IntegrityError("cache put: D = " + D.get_str() + " already has h = "
                                 + std::to_string(it->second.h) + ", refusing h = "
                                 + std::to_string(h));
        return;
    }
    if (!appender_.is_open()) {
        appender_.open(path_, std::ios::app);
        if (!appender_)
            throw IntegrityError("cannot open cache file " + path_.string() + " for append");
    }
    appender_ << serialize(e) << '\n';
    appender_.flush();
}

std::vector<CacheEntry> FileCache::entries()
{
    std::lock_guard lock(mutex_);
    std::vector<CacheEntry> out;
    out.reserve(entries_.size());
    for (auto const & kv : entries_)
        out.push_back(kv.second);
    return out;
}

AuditResult audit(std::vector<CacheEntry> const & entries,
                  classgroup::EnumerationOptions const & opts)
{
    AuditResult r;
    for (std::size_t i = 0; i < entries.size(); i += 20) {
        auto const & e = entries[i];
        ++r.checked;
        if (classgroup::count_reduced(classgroup::Discriminant(e.D), opts) != e.h)
            r.mismatches.push_back(e);
    }
    return r;
}

} // namespace classdiv::cache
