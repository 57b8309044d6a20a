#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gazekit {

/// Shortest decimal form that parses back to the identical double.
std::string format_number(double value);

/// Locale-independent parse of the whole field; '.' is the only decimal separator.
/// Returns nullopt for partial parses, empty fields and non-finite values.
std::optional<double> parse_number(std::string_view field);

/// Splits on single tabs; adjacent tabs yield empty fields.
std::vector<std::string_view> split_tabs(std::string_view line);

/// Splits text into lines on LF, stripping a trailing CR from each.
std::vector<std::string_view> split_lines(std::string_view text);

}  // namespace gazekit
