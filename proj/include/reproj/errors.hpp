#pragma once

#include <stdexcept>
#include <string>

namespace reproj {

/// Raised when an input violates a documented precondition (bad depth,
/// mismatched dimensions, malformed file, ...). The CLI maps this to exit 1.
class InvalidInputError : public std::runtime_error {
public:
    explicit InvalidInputError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a value breaks an internal contract that callers promised to
/// uphold (e.g. photometric errors above 1 fed to a penalty-based loss).
/// The CLI maps this to exit 2.
class ContractViolation : public std::runtime_error {
public:
    explicit ContractViolation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace reproj
