#pragma once

#include <stdexcept>
#include <string>

namespace qcspan {

enum class Errc {
  // mesh / grid construction
  TooFew,
  NotSorted,
  EndpointsNotUnit,
  DimensionMismatch,
  IndexOutOfRange,
  MeshMismatch,
  // mathematical preconditions
  ZeroFunction,
  NotGrounded,
  NotTwoIncreasing,
  NotQuasiCopula,
  NotCopula,
  BaseHasZeroCell,
  AlphaTooSmall,
  IsCopula,
  RoundingBrokeAxioms,
  StagesNotConsecutive,
  TooFewLevels,
  NotInSpan,
  BoundViolated,
  OverlappingIntervals,
  UnknownName,
  InvalidArgument,
  // input / output
  MalformedJson,
  BadRational,
  MeshInvalid,
  IoError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::TooFew: return "TooFew";
    case Errc::NotSorted: return "NotSorted";
    case Errc::EndpointsNotUnit: return "EndpointsNotUnit";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::MeshMismatch: return "MeshMismatch";
    case Errc::ZeroFunction: return "ZeroFunction";
    case Errc::NotGrounded: return "NotGrounded";
    case Errc::NotTwoIncreasing: return "NotTwoIncreasing";
    case Errc::NotQuasiCopula: return "NotQuasiCopula";
    case Errc::NotCopula: return "NotCopula";
    case Errc::BaseHasZeroCell: return "BaseHasZeroCell";
    case Errc::AlphaTooSmall: return "AlphaTooSmall";
    case Errc::IsCopula: return "IsCopula";
    case Errc::RoundingBrokeAxioms: return "RoundingBrokeAxioms";
    case Errc::StagesNotConsecutive: return "StagesNotConsecutive";
    case Errc::TooFewLevels: return "TooFewLevels";
    case Errc::NotInSpan: return "NotInSpan";
    case Errc::BoundViolated: return "BoundViolated";
    case Errc::OverlappingIntervals: return "OverlappingIntervals";
    case Errc::UnknownName: return "UnknownName";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::MalformedJson: return "MalformedJson";
    case Errc::BadRational: return "BadRational";
    case Errc::MeshInvalid: return "MeshInvalid";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

/// True for failures of file format, parsing, or command usage (CLI exit 2);
/// everything else is a mathematical validation failure (CLI exit 1).
inline bool is_io_errc(Errc c) {
  switch (c) {
    case Errc::MalformedJson:
    case Errc::BadRational:
    case Errc::MeshInvalid:
    case Errc::IoError:
    case Errc::InvalidArgument:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace qcspan
