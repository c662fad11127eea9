#pragma once

#include <stdexcept>
#include <string>

namespace qperc {

// Bad arguments, malformed configs, broken preconditions. CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable/unwritable files. CLI exit code 2.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values, diverged integrations, out-of-range formula results,
// ambiguous eigenstate assignment. CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace qperc
