#pragma once
#include <stdexcept>
#include <string>

namespace onesided {

// Domain input outside the valid range (e.g. logistic inverse outside (0,1)).
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Gram matrix of the observed design is singular beyond the ridge floor.
struct RankDeficientError : std::runtime_error {
    explicit RankDeficientError(const std::string& msg) : std::runtime_error(msg) {}
};

// Warm-start sample failed the smallest-eigenvalue floor.
struct EigenFloorViolatedError : std::runtime_error {
    explicit EigenFloorViolatedError(const std::string& msg) : std::runtime_error(msg) {}
};

struct StreamTooShortError : std::runtime_error {
    explicit StreamTooShortError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InsufficientWarmStartError : std::runtime_error {
    explicit InsufficientWarmStartError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SchemaMismatchError : std::runtime_error {
    explicit SchemaMismatchError(const std::string& msg) : std::runtime_error(msg) {}
};

// Carries the offending row/column in the message.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Aggregated configuration validation failure; message lists every problem found.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace onesided
