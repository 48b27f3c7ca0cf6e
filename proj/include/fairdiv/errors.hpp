#pragma once

#include <stdexcept>
#include <string>

namespace fairdiv {

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientMass : std::runtime_error {
    explicit InsufficientMass(const std::string& what) : std::runtime_error(what) {}
};

struct PartitionError : std::runtime_error {
    explicit PartitionError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct SingularError : std::runtime_error {
    explicit SingularError(const std::string& what) : std::runtime_error(what) {}
};

struct InvariantViolation : std::runtime_error {
    explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Refinement would exceed the configured K cap; the run is censored, not truncated.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fairdiv
