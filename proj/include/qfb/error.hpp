#pragma once

#include <stdexcept>
#include <string>

namespace qfb {

// Stable codes surfaced by the CLI and in JSON reports.
enum class ErrorCode {
  DivisionByZero,
  VarTableMismatch,
  NoShiftVariable,
  SingularEvaluation,
  NotCompatible,
  InsufficientData,
  BudgetExceeded,
  ParseError,
  InvalidArgument,
  Inconsistent,
};

const char* errorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class SingularEvaluation : public Error {
 public:
  SingularEvaluation(long index, const std::string& msg)
      : Error(ErrorCode::SingularEvaluation, msg), index_(index) {}
  long index() const { return index_; }

 private:
  long index_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t pos, const std::string& msg)
      : Error(ErrorCode::ParseError, msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

}  // namespace qfb
