#include "gevrey/error.hpp"

namespace gevrey {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::RejectedInput: return "rejected-input";
    case ErrorKind::CorruptedField: return "corrupted-field";
    case ErrorKind::IndexError: return "index-error";
    case ErrorKind::CoverageError: return "coverage-error";
    case ErrorKind::InsufficientSamples: return "insufficient-samples";
    case ErrorKind::Unstable: return "unstable";
    case ErrorKind::UnstableWeight: return "unstable-weight";
    case ErrorKind::UndefinedRadius: return "undefined-radius";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Usage: return "usage";
    case ErrorKind::CalibrationRefused: return "calibration-refused";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace gevrey
