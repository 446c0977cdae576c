#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "classdiv/intarith.hpp"

namespace classdiv::classgroup {

/* Negative integer congruent to 0 or 1 mod 4. */
class Discriminant
{
    BigInt value_;

  public:
    explicit Discriminant(BigInt D);

    BigInt const & value() const { return value_; }

    friend bool operator==(Discriminant const &, Discriminant const &) = default;
};

/*
 * A primitive positive definite form a*x^2 + b*x*y + c*y^2. Reduced means
 * |b| <= a <= c with b >= 0 whenever |b| == a or a == c.
 */
class QuadForm
{
    BigInt a_, b_, c_;

  public:
    /* Throws DomainError unless a > 0, b^2 - 4ac is a negative discriminant
     * and gcd(a, b, c) = 1. */
    QuadForm(BigInt a, BigInt b, BigInt c);

    BigInt const & a() const { return a_; }
    BigInt const & b() const { return b_; }
    BigInt const & c() const { return c_; }

    Discriminant discriminant() const;
    bool is_reduced() const;
    bool is_principal() const;

    std::string to_string() const;

    friend bool operator==(QuadForm const &, QuadForm const &) = default;
};

struct EnumerationOptions
{
    std::int64_t max_abs_discriminant = 40'000'000'000;
    /* Worker threads for enumeration; the a-range is split into contiguous chunks. */
    unsigned jobs = 1;
};

/* Largest |D| the enumerator accepts regardless of configuration. */
inline constexpr std::int64_t enumeration_hard_limit = 4'000'000'000'000;

/* Class numbers keyed by discriminant; implementations must be thread safe. */
class ClassNumberCache
{
  public:
    virtual ~ClassNumberCache() = default;
    virtual std::optional<std::uint64_t> get(BigInt const & D) = 0;
    virtual void put(BigInt const & D, std::uint64_t h, std::string const & method) = 0;
};

class MemoryClassNumberCache : public ClassNumberCache
{
    std::mutex mutex_;
    std::map<BigInt, std::uint64_t> entries_;

  public:
    std::optional<std::uint64_t> get(BigInt const & D) override;
    void put(BigInt const & D, std::uint64_t h, std::string const & method) override;
    std::size_t size();
};

/* -d if d = 3 (mod 4), else -4d; d must be positive and squarefree. */
Discriminant field_discriminant(BigInt const & d);

QuadForm principal_form(Discriminant const & D);

QuadForm reduce(QuadForm const & f);

/* All reduced forms of discriminant D, ordered by (a, b). */
std::vector<QuadForm> enumerate_reduced(Discriminant const & D,
                                        EnumerationOptions const & opts = {});

std::uint64_t count_reduced(Discriminant const & D, EnumerationOptions const & opts = {});

/* count_reduced, through the cache when one is given. */
std::uint64_t class_number(Discriminant const & D, EnumerationOptions const & opts = {},
                           ClassNumberCache * cache = nullptr);

/* Reduced Gauss composite. */
QuadForm compose(QuadForm const & f, QuadForm const & g);

QuadForm inverse(QuadForm const & f);

QuadForm power(QuadForm const & f, std::uint64_t n);

/* Least r >= 1 with f^r principal, by repeated composition. */
std::uint64_t element_order(QuadForm const & f, std::uint64_t max_steps = 1'000'000'000);

/* A reduced form whose class has order exactly n, if one exists. */
std::optional<QuadForm> exists_element_of_order(Discriminant const & D, std::uint64_t n,
                                                EnumerationOptions const & opts = {},
                                                ClassNumberCache * cache = nullptr);

} // namespace classdiv::classgroup
