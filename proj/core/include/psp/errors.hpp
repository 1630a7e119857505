#pragma once

#include <chrono>
#include <stdexcept>
#include <string>

namespace psp {

/// Base class for all errors raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Input text (corpus line, config file, db file) is malformed.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A configuration table violates its structural constraints.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A value is outside its permitted domain.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Cross-referenced data is inconsistent (e.g. a matched keyword missing from the db).
class IntegrityError : public Error {
public:
    using Error::Error;
};

/// Break-even arithmetic is undefined: unit price does not exceed unit cost.
class MarginError : public Error {
public:
    using Error::Error;
};

/// Persisted file carries a format version this build cannot read.
class MigrationError : public Error {
public:
    using Error::Error;
};

/// Transient live-source failure; retry after the suggested back-off.
class RetryableError : public Error {
public:
    RetryableError(const std::string& what, std::chrono::seconds backoff)
        : Error(what), backoff_(backoff) {}

    std::chrono::seconds suggested_backoff() const { return backoff_; }

private:
    std::chrono::seconds backoff_;
};

}  // namespace psp
