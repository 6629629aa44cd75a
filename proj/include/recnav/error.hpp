#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace recnav {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or precondition was violated by the caller.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// An input file is missing or an output could not be written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Input data does not match the expected schema. Carries the 1-based line
/// of the offending record when one is known (0 otherwise).
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& message)
        : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace recnav
