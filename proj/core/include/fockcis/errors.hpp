#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace fockcis
{

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Index outside the admissible set (negative index on a one-sided sequence).
class IndexDomainError : public Error
{
public:
    using Error::Error;
};

/// Argument outside the domain of an operation (zero where C\{0} is required, guard violations).
class DomainError : public Error
{
public:
    using Error::Error;
};

class UnsupportedSideError : public Error
{
public:
    using Error::Error;
};

/// Two nodes of the sequence coincide, so products with a simple zero at a node are undefined.
class DegenerateSequenceError : public Error
{
public:
    using Error::Error;
};

/// A truncated infinite product or series could not be certified within its factor budget.
class TruncationError : public Error
{
public:
    TruncationError(const std::string& what, double achieved_bound)
        : Error(what), achieved_bound_(achieved_bound)
    {}

    double achieved_bound() const noexcept { return achieved_bound_; }

private:
    double achieved_bound_;
};

/// Iterative or quadrature procedure failed to converge or produced non-finite samples.
class NumericError : public Error
{
public:
    using Error::Error;
};

/// Input document does not match the schema. `pointer` is a JSON pointer to the offending field.
class SpecValidationError : public Error
{
public:
    SpecValidationError(std::string pointer, const std::string& message)
        : Error(message + " (at " + (pointer.empty() ? std::string("/") : pointer) + ")"),
          pointer_(std::move(pointer))
    {}

    const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

} // namespace fockcis
