#pragma once

#include <stdexcept>
#include <string>

namespace qpav {

/// Bad input: malformed files, out-of-range indices, parameter order violations.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A configured enumeration or query budget was exceeded.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qpav
