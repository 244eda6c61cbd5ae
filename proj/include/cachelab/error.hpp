#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cachelab {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Bad parameters detected before any work starts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A ratio whose denominator is zero.
class UndefinedRatioError : public Error {
 public:
  using Error::Error;
};

// Serialized policy is unreadable or from another format version.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace cachelab
