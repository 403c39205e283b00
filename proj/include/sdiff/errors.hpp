#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace sdiff {

/// Malformed input: invalid instance, sequence or decomposition.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Mathematical domain violation, e.g. a node with zero total influence.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A solver refused an input because it exceeds a configured size cap.
class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The requested operation is not defined for this kind of input.
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// File parse failure. `line` is 1-based (0 when unknown); `field` names the
/// offending JSON field or text column when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line = 0, std::string field = {})
        : std::runtime_error(format(message, line, field)), line_(line), field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    static std::string format(const std::string& message, std::size_t line, const std::string& field) {
        std::string out;
        if (line > 0) out += "line " + std::to_string(line) + ": ";
        if (!field.empty()) out += field + ": ";
        return out + message;
    }

    std::size_t line_;
    std::string field_;
};

}  // namespace sdiff
