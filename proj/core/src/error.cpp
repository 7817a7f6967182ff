#include "hhlab/error.hpp"

namespace hhlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::DivergentDeclared: return "DivergentDeclared";
    case ErrorKind::NotIntegrable: return "NotIntegrable";
    case ErrorKind::NotSummable: return "NotSummable";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void raise(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace hhlab
