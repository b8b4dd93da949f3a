#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qroute {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed files, inconsistent parameters, size guards.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

enum class ParseErrorKind {
  MissingSection,
  UnsupportedEdgeWeight,
  DuplicateNode,
  DemandExceedsCapacity,
  Malformed,
};

const char* to_string(ParseErrorKind kind);

class ParseError : public InvalidInput {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& what);

  ParseErrorKind kind() const { return kind_; }
  // 1-based line of the offending input; 0 when the problem is global
  // (e.g. a section that never appeared).
  std::size_t line() const { return line_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace qroute
