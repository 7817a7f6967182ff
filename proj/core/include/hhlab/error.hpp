#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hhlab {

enum class ErrorKind {
  SingularPoint,
  InvalidParameter,
  NonConvergence,
  DivergentDeclared,
  NotIntegrable,
  NotSummable,
  DegenerateInput,
  HypothesisViolated,
  InvalidEpsilon,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& message);

}  // namespace hhlab
