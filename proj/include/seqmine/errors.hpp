#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seqmine {

// Base for everything thrown by this library. Two categories drive the CLI
// exit codes: InputError -> 1, InternalError -> 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : Error {
  using Error::Error;
};

struct InternalError : Error {
  using Error::Error;
};

// --- log ingestion ---------------------------------------------------------

struct MalformedRecord final : InputError {
  MalformedRecord(std::size_t line_no, const std::string& what)
      : InputError("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
  std::size_t line;
};

struct UnknownActionKind final : InputError {
  UnknownActionKind(std::size_t line_no, const std::string& token)
      : InputError("line " + std::to_string(line_no) + ": unknown action kind '" + token + "'"),
        line(line_no) {}
  std::size_t line;
};

struct EmptyLog final : InputError {
  EmptyLog() : InputError("event log contains no valid records") {}
};

struct EmptyCollection final : InputError {
  using InputError::InputError;
};

// --- segmentation ----------------------------------------------------------

struct TooFewSequences final : InputError {
  using InputError::InputError;
};

struct DegenerateData final : InputError {
  using InputError::InputError;
};

struct BadThresholds final : InputError {
  using InputError::InputError;
};

// --- sequence clustering ---------------------------------------------------

struct TooFewItems final : InputError {
  using InputError::InputError;
};

struct BadK final : InputError {
  using InputError::InputError;
};

struct EmptyCluster final : InputError {
  using InputError::InputError;
};

struct TooFewClusters final : InputError {
  using InputError::InputError;
};

// --- learner clustering ----------------------------------------------------

struct NoModels final : InputError {
  using InputError::InputError;
};

struct TooFewLearners final : InputError {
  using InputError::InputError;
};

struct DimensionMismatch final : InputError {
  using InputError::InputError;
};

// --- model quality ---------------------------------------------------------

struct SchemaError final : InputError {
  using InputError::InputError;
};

struct DanglingEndpoint final : InputError {
  using InputError::InputError;
};

struct DuplicateComponentId final : InputError {
  using InputError::InputError;
};

// --- statistics ------------------------------------------------------------

struct ZeroExpected final : InputError {
  using InputError::InputError;
};

struct DegenerateVariance final : InputError {
  using InputError::InputError;
};

struct TooFewValues final : InputError {
  using InputError::InputError;
};

// --- synthetic generator ---------------------------------------------------

struct InvalidSpec final : InputError {
  using InputError::InputError;
};

struct LengthMismatch final : InputError {
  using InputError::InputError;
};

// --- numerics --------------------------------------------------------------

struct NumericalFailure final : InternalError {
  using InternalError::InternalError;
};

}  // namespace seqmine
