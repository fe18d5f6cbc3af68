#include "sptlab/error.hpp"

namespace sptlab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
      return "usage";
    case ErrorKind::InvalidInput:
      return "invalid-input";
    case ErrorKind::InsufficientData:
      return "insufficient-data";
    case ErrorKind::DataValidation:
      return "data-validation";
    case ErrorKind::MissingCarry:
      return "missing-carry";
    case ErrorKind::ConstraintViolation:
      return "constraint-violation";
    case ErrorKind::UndefinedStatistic:
      return "undefined-statistic";
    case ErrorKind::Evaluation:
      return "evaluation";
    case ErrorKind::Io:
      return "io";
  }
  return "unknown";
}

}  // namespace sptlab
