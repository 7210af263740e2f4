// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nris {

/// Input outside the mathematical domain of a model function (non-finite
/// values, zero thickness, impossible detour geometry).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid experiment or codebook configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller broke an API contract (dimension mismatch, too many streams, ...).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not produce a trustworthy result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nris
