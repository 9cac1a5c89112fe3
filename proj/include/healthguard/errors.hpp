#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hg {

/// Value outside the domain of an operation (malicious label where a benign
/// one is required, non-finite reading, zero-count impurity, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid user configuration: bad config file, unknown algorithm, empty
/// device set. `line` is 0 when the error is not tied to a config line.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Broken structural invariant in data handed between modules
/// (out-of-order timestamps, minute span mismatch, stratification failure).
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller violated an interface contract (length or dimension mismatch).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed file (model or dataset). `offset` is a byte offset for binary
/// files and a line number for text files.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// File could not be opened, read, or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hg
