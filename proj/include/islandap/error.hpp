#pragma once

#include <stdexcept>
#include <string>

namespace islandap {

enum class ErrorKind {
  InvalidConfig,
  SingularPoint,
  DegenerateField,
  TraceFailure,
  Classification,
  OutOfDomain,
  Assembly,
  SingularSystem,
  Io,
};

const char* to_string(ErrorKind kind);

/// Exception type thrown by every module; `kind()` distinguishes the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace islandap
