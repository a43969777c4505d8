#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tiltlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad p, reducible modulus, or operands built over different fields.
class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at offset " + std::to_string(pos) + ")"), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

// Level/base mismatch and other caller mistakes.
class UsageError : public Error {
public:
    using Error::Error;
};

// A mathematically meaningful refusal: inverting a non-unit, an unsupported
// generator shape, a sort error in substitution.
class DomainError : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace tiltlab
