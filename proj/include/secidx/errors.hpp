#pragma once

#include <stdexcept>
#include <string>

namespace secidx {

/// Matrix or vector shapes do not line up.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Operands live in different prime fields.
class ModulusMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its documented domain.
class PreconditionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Exhaustive enumeration or search would exceed the configured cap.
class CapExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A code matrix has a row that mixes message symbols only.
class SecurityViolation : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A transformation that must preserve decodability did not.
class DecodabilityLost : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class ParseErrorKind {
    Malformed,
    SelfLoop,
    IndexOutOfRange,
    Groupcast,
    InvalidField,
};

inline const char* to_string(ParseErrorKind kind) {
    switch (kind) {
    case ParseErrorKind::Malformed: return "malformed";
    case ParseErrorKind::SelfLoop: return "self-loop";
    case ParseErrorKind::IndexOutOfRange: return "index-out-of-range";
    case ParseErrorKind::Groupcast: return "groupcast";
    case ParseErrorKind::InvalidField: return "invalid-field";
    }
    return "unknown";
}

class ParseError : public std::runtime_error {
  public:
    ParseError(ParseErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ParseErrorKind kind() const noexcept { return kind_; }

  private:
    ParseErrorKind kind_;
};

}  // namespace secidx
