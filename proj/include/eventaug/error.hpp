#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eventaug {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (files, byte buffers).
class FormatError : public Error {
public:
  using Error::Error;

  /// Text-format errors carry the 1-based line they were found on.
  FormatError(const std::string &what, std::size_t line)
      : Error(what + " at line " + std::to_string(line)), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_ = 0;
};

/// An argument or configuration value outside its valid domain.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

} // namespace eventaug
