// Error taxonomy: validation failures (bad input) vs numerical guards tripped at run time.
#pragma once

#include <stdexcept>
#include <string>

namespace fockbit {

// Structurally invalid input: wrong shape, Hermiticity/PSD violation, value out of range,
// unreadable or malformed state file. CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical guard fired: truncation-guard blocks carry mass, an iteration cap was hit,
// or a result drifted past its tolerance. CLI maps this to exit code 3.
class NumericGuardError : public std::runtime_error {
public:
    explicit NumericGuardError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fockbit
