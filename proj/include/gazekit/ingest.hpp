#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gazekit/model.hpp"

namespace gazekit {

struct IngestOptions {
  enum class Header { Auto, Yes, No };
  Header has_header = Header::Auto;
  /// Read inline TWI labels from a 4th column.
  bool twi_column = false;
};

struct GazeIngest {
  GazeSample sample;
  std::vector<Twi> twis;
};

/// Parses a gaze TSV (time, x, y[, twi label]). Blank lines and '#' comments are
/// skipped. With `twi_column`, every maximal run of rows sharing a non-empty label
/// becomes one window owned by this sample, spanning
/// [t of first row, t of last row + median sampling interval of the file).
GazeIngest parse_gaze_tsv(std::string_view bytes, const std::string& sample_id, const IngestOptions& opts = {});

/// Parses "start\tend[\tlabel[\tgid[\tsample[\tdisplay label]]]]" rows. Unlabelled
/// rows are named twi_<row>; a missing or "*" sample means the window is shared.
std::vector<Twi> parse_twi_tsv(std::string_view bytes);

/// Parses {"samples": {id: gid}, "aois": {...}, "twis": {...}}; every key optional.
GroupTable parse_groups_json(std::string_view bytes);

/// Serializes points as a 3-column gaze TSV with shortest round-trip numbers.
std::string format_gaze_tsv(const GazeSample& sample);

/// Serializes windows in the 6-column form accepted by parse_twi_tsv.
std::string format_twi_tsv(const std::vector<Twi>& twis);

std::string format_groups_json(const GroupTable& groups);

/// Parses a list of {id, name, shape, precedence, gid}. A shape is
/// {"type": "rect", "x", "y", "w", "h"} or {"type": "polygon", "vertices": [[x, y], ...]}.
/// `name` defaults to the id, precedence and gid to 0. Shape validity is left to
/// dataset_validate.
std::vector<Aoi> parse_aois_json(std::string_view bytes);
std::string format_aois_json(const std::vector<Aoi>& aois);

}  // namespace gazekit
