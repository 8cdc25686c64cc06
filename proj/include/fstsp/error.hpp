#pragma once

#include <stdexcept>
#include <string>

namespace fstsp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid generator or solver argument.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// File that cannot be opened or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed or schema-violating input text. `field` names the offending
/// JSON path (e.g. "truck_time[0][3]"), empty for syntax errors.
class ParseError : public Error {
public:
    ParseError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// A binary LP point that does not decode into a truck route plus sorties.
/// Signals a missing cut rather than an extraction bug.
class DecodeError : public Error {
public:
    using Error::Error;
};

}  // namespace fstsp
