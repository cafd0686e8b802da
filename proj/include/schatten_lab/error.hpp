#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace schatten_lab {

enum class ErrorCode {
  InvalidArgument,
  NotFinite,
  NotHermitian,
  NotPsd,
  NotTracePreserving,
  NotDensityMatrix,
  NearSingular,
  DimensionMismatch,
  DimensionTooLarge,
  InvalidPair,
  NotPositive,
  OutOfRange,
  Unstable,
  NoConvergence,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::NotFinite: return "NOT_FINITE";
    case ErrorCode::NotHermitian: return "NOT_HERMITIAN";
    case ErrorCode::NotPsd: return "NOT_PSD";
    case ErrorCode::NotTracePreserving: return "NOT_TRACE_PRESERVING";
    case ErrorCode::NotDensityMatrix: return "NOT_DENSITY_MATRIX";
    case ErrorCode::NearSingular: return "NEAR_SINGULAR";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::DimensionTooLarge: return "DIMENSION_TOO_LARGE";
    case ErrorCode::InvalidPair: return "INVALID_PAIR";
    case ErrorCode::NotPositive: return "NOT_POSITIVE";
    case ErrorCode::OutOfRange: return "OUT_OF_RANGE";
    case ErrorCode::Unstable: return "UNSTABLE";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
  }
  return "UNKNOWN";
}

/// Numerical errors are the ones the CLI maps to exit code 3.
inline bool is_numerical_error(ErrorCode code) {
  return code == ErrorCode::NearSingular || code == ErrorCode::Unstable ||
         code == ErrorCode::NoConvergence;
}

class LabError : public std::runtime_error {
 public:
  LabError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Float slack used across the library. The mathematics is exact; these are
/// artifact choices and can be overridden per call.
struct Tolerances {
  double hermitian = 1e-12;       // max |A - A*| relative to (1 + max|A|)
  double psd = 1e-10;             // min eigenvalue >= -psd * max(1, ||A||_op)
  double reconstruction = 1e-10;  // eigendecomposition residuals
  double contraction = 1e-10;     // ||R||_op <= 1 + contraction
  double trace_preservation = 1e-10;
  double density_trace = 1e-12;
  double check_rel = 1e-8;        // CheckRecord pass threshold
};

}  // namespace schatten_lab
