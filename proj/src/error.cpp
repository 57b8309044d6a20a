#include "gazekit/error.hpp"

namespace gazekit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonMonotoneTime: return "NonMonotoneTime";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::InvertedWindow: return "InvertedWindow";
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::NegativeGid: return "NegativeGid";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::UnknownFocusAoi: return "UnknownFocusAoi";
    case ErrorCode::MixedMetric: return "MixedMetric";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::GeometryMismatch: return "GeometryMismatch";
    case ErrorCode::UnsupportedCombination: return "UnsupportedCombination";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnknownScopeTarget: return "UnknownScopeTarget";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::DegenerateShape: return "DegenerateShape";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PortInUse: return "PortInUse";
    case ErrorCode::DataDirUnwritable: return "DataDirUnwritable";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& detail, std::optional<std::size_t> line) {
  std::string out(to_string(code));
  if (line) out += "(" + std::to_string(*line) + ")";
  if (!detail.empty()) out += ": " + detail;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& detail, std::optional<std::size_t> line)
    : std::runtime_error(compose(code, detail, line)), code_(code), line_(line), detail_(detail) {}

}  // namespace gazekit
