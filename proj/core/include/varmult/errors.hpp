#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace varmult {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset), detail_(message) {}

  std::size_t offset() const { return offset_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t offset_;
  std::string detail_;
};

/// Numeric evaluation left the domain (log of a nonpositive value, a pole, overflow).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An expression depends on a jet variable beyond the order allowed by a contract.
class DependenceError : public Error {
 public:
  using Error::Error;
};

/// Substitution that would rebind or capture an antiderivative's integration variable.
class SubstitutionError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace varmult
