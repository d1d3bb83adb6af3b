#pragma once

#include <stdexcept>
#include <string>

namespace qmcar {

// Precondition and contract violations. The CLI maps these to exit code 2.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// File and serialization problems. The CLI maps these to exit code 3.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qmcar
