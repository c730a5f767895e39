#pragma once

#include <stdexcept>
#include <string>

namespace kgrag {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A triple was refused before insertion; `field` names the offending part
// ("head", "relation", "tail" or "kind").
class RejectedTripleError : public Error {
public:
    RejectedTripleError(std::string field, const std::string& message)
        : Error(message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

// Corrupt, truncated or version-mismatched persisted data.
class FormatError : public Error {
public:
    using Error::Error;
};

// Transport failure after the retry budget is exhausted.
class TransportError : public Error {
public:
    using Error::Error;
};

// The remote answered, but not in the expected shape.
class ProtocolError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace kgrag
