#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bsm {

// Every failure the library reports, one kind per contract violation.
enum class ErrorKind {
  MissingMetric,
  NonNumericValue,
  UnknownOutcome,
  EmptyInput,
  InsufficientData,
  PoolTooSmall,
  DomainError,
  SchemaMismatch,
  EmptyModel,
  InvalidPath,
  SignalOutOfRange,
  EmptyDataset,
  TooFewInstances,
  SingleClass,
  EmptyPhase,
  DegenerateVariance,
  UndefinedRate,
  EmptyCurrentTree,
  InvalidScript,
  FileNotFound,
  ParseError,
  ConfigError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingMetric: return "MissingMetric";
    case ErrorKind::NonNumericValue: return "NonNumericValue";
    case ErrorKind::UnknownOutcome: return "UnknownOutcome";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::PoolTooSmall: return "PoolTooSmall";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::EmptyModel: return "EmptyModel";
    case ErrorKind::InvalidPath: return "InvalidPath";
    case ErrorKind::SignalOutOfRange: return "SignalOutOfRange";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::TooFewInstances: return "TooFewInstances";
    case ErrorKind::SingleClass: return "SingleClass";
    case ErrorKind::EmptyPhase: return "EmptyPhase";
    case ErrorKind::DegenerateVariance: return "DegenerateVariance";
    case ErrorKind::UndefinedRate: return "UndefinedRate";
    case ErrorKind::EmptyCurrentTree: return "EmptyCurrentTree";
    case ErrorKind::InvalidScript: return "InvalidScript";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace bsm
