#pragma once

#include <stdexcept>
#include <string>

namespace classdiv {

class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/* Bad input: violates an operation's precondition. */
class DomainError : public Error
{
  public:
    using Error::Error;
};

/* A configured effort or size bound was hit before the answer was known. */
class ResourceLimitError : public Error
{
  public:
    using Error::Error;
};

/* An internal invariant failed. Either a bug, or a counterexample. */
class InvariantError : public Error
{
  public:
    using Error::Error;
};

/* The inputs fall outside the hypotheses of the decomposition lemma. */
class OutOfScopeError : public Error
{
  public:
    using Error::Error;
};

/* The persistent class-number cache is corrupt or inconsistent. */
class IntegrityError : public Error
{
  public:
    using Error::Error;
};

} // namespace classdiv
