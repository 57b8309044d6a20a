#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gazekit {

enum class ErrorCode {
  MalformedRow,
  NonMonotoneTime,
  EmptyFile,
  InvertedWindow,
  MalformedJson,
  NegativeGid,
  EmptyWindow,
  EmptyInput,
  EmptySelection,
  UnknownFocusAoi,
  MixedMetric,
  AlphabetMismatch,
  GeometryMismatch,
  UnsupportedCombination,
  IndexOutOfRange,
  UnknownScopeTarget,
  UnknownId,
  DegenerateShape,
  MissingFile,
  SchemaMismatch,
  InvalidArgument,
  PortInUse,
  DataDirUnwritable,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `line` is set for text-format errors
/// (1-based physical line number).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail, std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::string detail_;
};

}  // namespace gazekit
