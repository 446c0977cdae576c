#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "classdiv/classgroup.hpp"

namespace classdiv::cache {

inline constexpr int schema_version = 1;
inline constexpr char const * path_env_var = "CLASSDIV_CACHE";

struct CacheEntry
{
    BigInt D;
    std::uint64_t h;
    std::string method;
    int version = schema_version;

    friend bool operator==(CacheEntry const &, CacheEntry const &) = default;
};

/* One JSON line, without the newline: {"v":1,"D":-212,"h":6,"method":"enumerate"} */
std::string serialize(CacheEntry const & e);

/* Throws IntegrityError naming the line number when the line is not a valid v1 entry. */
CacheEntry parse_line(std::string const & line, std::size_t line_number);

/*
 * Reads a cache file. A missing file is an empty cache. Duplicate D entries
 * that agree are collapsed; disagreeing ones raise IntegrityError.
 */
std::vector<CacheEntry> load(std::filesystem::path const & path);

/*
 * Append-only JSON-lines store. The file is loaded once on construction;
 * writes are serialized through one appender.
 */
class FileCache : public classgroup::ClassNumberCache
{
    std::filesystem::path path_;
    std::mutex mutex_;
    std::map<BigInt, CacheEntry> entries_;
    std::ofstream appender_;

  public:
    explicit FileCache(std::filesystem::path path);

    std::optional<std::uint64_t> get(BigInt const & D) override;
    /* Throws IntegrityError if D is already stored with a different h. */
    void put(BigInt const & D, std::uint64_t h, std::string const & method) override;

    /* Ordered by D. */
    std::vector<CacheEntry> entries();
    std::filesystem::path const & path() const { return path_; }
};

struct AuditResult
{
    std::size_t checked = 0;
    std::vector<CacheEntry> mismatches;
};

/* Recomputes every twentieth entry in D order, starting with the first. */
AuditResult audit(std::vector<CacheEntry> const & entries,
                  classgroup::EnumerationOptions const & opts = {});

} // namespace classdiv::cache
