#pragma once

#include <stdexcept>
#include <string>

namespace gevrey {

enum class ErrorKind {
  InvalidParameter,
  RejectedInput,
  CorruptedField,
  IndexError,
  CoverageError,
  InsufficientSamples,
  Unstable,
  UnstableWeight,
  UndefinedRadius,
  Overflow,
  Usage,
  CalibrationRefused,
  Validation,
  Io,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace gevrey
