#pragma once

#include <stdexcept>
#include <string>

namespace sptlab {

enum class ErrorKind {
  Usage,                // malformed command line, config value, or policy string
  InvalidInput,         // argument violates an operation's precondition
  InsufficientData,     // too few observations for an estimator
  DataValidation,       // input file contents are inconsistent
  MissingCarry,         // no admissible contracts to compute a carry quantity
  ConstraintViolation,  // model parameters break a stability constraint
  UndefinedStatistic,   // e.g. a Sharpe ratio with zero dispersion
  Evaluation,           // a user function returned a non-finite or invalid value
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}
inline void require(bool condition, ErrorKind kind, const char* what) {
  if (!condition) fail(kind, what);
}

}  // namespace sptlab
