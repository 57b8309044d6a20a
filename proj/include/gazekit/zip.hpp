#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gazekit {

struct ZipEntry {
  std::string name;  // '/'-separated; a trailing '/' marks a directory
  std::string data;
};

/// Writes a store-only archive. Entries keep the given order and every
/// timestamp is fixed to 1980-01-01 00:00, so equal input gives equal bytes.
std::string write_zip(const std::vector<ZipEntry>& entries);

/// Reads stored and deflated entries. Throws SchemaMismatch on a damaged or
/// unsupported archive, with `label` naming it in the message.
std::vector<ZipEntry> read_zip(std::string_view bytes, const std::string& label = "archive");

}  // namespace gazekit
