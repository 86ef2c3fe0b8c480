#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace psmm {

/// Base class for protocol- and domain-level failures. Violations of plain
/// call preconditions (shape mismatches, bad arguments) throw
/// std::invalid_argument instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
public:
    DivisionByZero() : Error("inverse of zero in prime field") {}
};

class PartitionError : public Error {
public:
    using Error::Error;
};

class EncodingError : public Error {
public:
    using Error::Error;
};

class LiftError : public Error {
public:
    using Error::Error;
};

class SchemeParseError : public Error {
public:
    using Error::Error;
};

class SchemeInvalid : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class PointSelectionError : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

class PrivacyViolation : public Error {
public:
    using Error::Error;
};

/// Too few evaluations (or too low a system rank) to decode.
class InsufficientShares : public Error {
public:
    InsufficientShares(std::size_t needed_, std::size_t got_)
        : Error("insufficient shares: need " + std::to_string(needed_) + ", got " +
                std::to_string(got_)),
          needed(needed_),
          got(got_) {}

    std::size_t needed;
    std::size_t got;
};

/// Exhaustive enumeration would exceed the configured budget.
class BudgetError : public Error {
public:
    BudgetError(double required_, std::uint64_t budget_)
        : Error("enumeration budget exceeded: need " + std::to_string(required_) +
                " assignments, budget " + std::to_string(budget_)),
          required(required_),
          budget(budget_) {}

    double required;
    std::uint64_t budget;
};

}  // namespace psmm
