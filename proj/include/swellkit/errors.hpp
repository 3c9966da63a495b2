#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace swellkit {

/// Root of every error the toolkit throws.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Malformed encoded data (e.g. an RLE whose runs do not cover the grid).
class FormatError : public Error {
  public:
    using Error::Error;
};

/// A JSON document that does not have the expected shape.
class SchemaError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

/// A line of a line-oriented input file that could not be parsed.
class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Well-formed data that violates a domain invariant. Never repaired.
class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string& what) : Error(what) {}
    ValidationError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::optional<std::size_t> line() const { return line_; }

  private:
    std::optional<std::size_t> line_;
};

class TransportError : public Error {
  public:
    using Error::Error;
};

class ProtocolError : public Error {
  public:
    using Error::Error;
};

class EvaluationError : public Error {
  public:
    using Error::Error;
};

} // namespace swellkit
