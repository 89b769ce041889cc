#pragma once

#include <stdexcept>
#include <string>

namespace bq {

enum class ErrorKind {
  syntax,        // malformed input text
  declaration,   // duplicate or unknown declarations
  grounding,     // unbounded variables, empty domains, undeclared symbols
  validation,    // theory fails its well-formedness checks
  transition,    // successor state is undefined
  cap_exceeded,  // enumeration or search limits hit
  trace,         // answer set does not encode a well-formed episode
  io,
};

/// Line/column of a construct in its source text. Positions are diagnostics
/// only and never participate in equality.
struct SourcePos {
  int line = 0;
  int column = 0;

  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(column);
  }
  friend bool operator==(const SourcePos&, const SourcePos&) noexcept { return true; }
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, SourcePos pos, const std::string& message)
      : Error(kind, pos.str() + ": " + message), pos_(pos) {}
  SourcePos pos() const noexcept { return pos_; }

 private:
  SourcePos pos_;
};

class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& message) : Error(ErrorKind::cap_exceeded, message) {}
};

enum class TransitionFault {
  not_executable,
  conflicting_effects,
  inconsistent_successor,
  multiple_rewards,
};

class TransitionError : public Error {
 public:
  TransitionError(TransitionFault fault, const std::string& message)
      : Error(ErrorKind::transition, message), fault_(fault) {}
  TransitionFault fault() const noexcept { return fault_; }

 private:
  TransitionFault fault_;
};

}  // namespace bq
