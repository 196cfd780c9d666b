#pragma once

#include <stdexcept>
#include <string>

namespace forgery {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A caller-supplied argument violates an operation's preconditions.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Filesystem or OS-level failure (missing file, unreadable, write failure).
class IoError : public Error {
public:
    using Error::Error;
};

/// A file or record exists but its content is not syntactically valid.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Content parses but violates a structural contract (wrong point count,
/// out-of-window rect, duplicate ids, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Input uses a format variant this library deliberately does not handle
/// (LBP cascades, tilted features, ...).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// A recipe cannot be applied to this particular input (image too small,
/// all region boxes degenerate, grayscale where color is required).
class InapplicableError : public Error {
public:
    using Error::Error;
};

/// Non-finite values where finite arithmetic is required.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace forgery
