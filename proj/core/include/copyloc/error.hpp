#pragma once

#include <stdexcept>
#include <string>

namespace copyloc {

// Error codes surfaced by the library. File loaders attach line/offset
// context to the message; the code stays machine-checkable.
enum class Errc {
  bad_magic,
  truncated_file,
  nonfinite_value,
  dim_zero,
  invalid_norm,
  sequence_too_long,
  malformed_json,
  invariant_violation,
  dim_mismatch,
  odd_dimension,
  weight_shape_mismatch,
  zero_vector,
  zero_denominator,
  wrong_kind,
  empty_target,
  length_mismatch,
  empty_dataset,
  overlap_in_plan,
  does_not_fit,
  io_error,
  bad_argument,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::bad_magic: return "BadMagic";
    case Errc::truncated_file: return "TruncatedFile";
    case Errc::nonfinite_value: return "NonFiniteValue";
    case Errc::dim_zero: return "DimZero";
    case Errc::invalid_norm: return "InvalidNorm";
    case Errc::sequence_too_long: return "SequenceTooLong";
    case Errc::malformed_json: return "MalformedJson";
    case Errc::invariant_violation: return "InvariantViolation";
    case Errc::dim_mismatch: return "DimMismatch";
    case Errc::odd_dimension: return "OddDimension";
    case Errc::weight_shape_mismatch: return "WeightShapeMismatch";
    case Errc::zero_vector: return "ZeroVector";
    case Errc::zero_denominator: return "ZeroDenominator";
    case Errc::wrong_kind: return "WrongKind";
    case Errc::empty_target: return "EmptyTarget";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::empty_dataset: return "EmptyDataset";
    case Errc::overlap_in_plan: return "OverlapInPlan";
    case Errc::does_not_fit: return "DoesNotFit";
    case Errc::io_error: return "IoError";
    case Errc::bad_argument: return "BadArgument";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace copyloc
