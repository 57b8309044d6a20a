#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "gazekit/session.hpp"

namespace gazekit {

inline constexpr const char* kBundleFormat = "gazekit-bundle";
inline constexpr int kBundleFormatVersion = 1;

/// Zip bundle of one session snapshot. Layout:
///   samples/<id>.tsv     gaze points (time, x, y)
///   fixations/<id>.tsv   index, cx, cy, t_start, t_end, duration, aoi_id
///   saccades/<id>.tsv    from, to, length, duration, angle
///   aois.json, twis.tsv, groups.json
///   metrics.tsv          metric catalogue under the session scope
///   metrics/<view>.tsv   one file per open matrix view
///   config.json          parameters, scope, views with orderings, version
/// Ids are percent-encoded in file names. Output is deterministic.
std::string export_bundle(const Session& session);

struct ImportResult {
  Session session;
  std::vector<std::string> warnings;  // "RecomputationMismatch: <path>" for stale derived files
};

/// Rebuilds a session from a bundle. Raw gaze points are authoritative; derived
/// files are only compared against recomputation. Throws MissingFile or
/// SchemaMismatch naming the offending path.
ImportResult import_bundle(std::string_view zip_bytes);

/// Percent-encodes every byte outside [A-Za-z0-9._-], and a leading '.'.
std::string encode_file_name(std::string_view id);

std::string format_fixations_tsv(const std::vector<LabeledFixation>& labels);
std::string format_saccades_tsv(const std::vector<Saccade>& saccades);

nlohmann::json config_to_json(const SessionConfig& config);
/// Overlays the keys present in `doc` onto `base`. Throws InvalidArgument on a
/// wrong type or value.
SessionConfig merge_config_json(const nlohmann::json& doc, SessionConfig base);

nlohmann::json view_to_json(const MatrixView& view);
MatrixView view_from_json(const nlohmann::json& doc);

std::string_view to_string(PctDenominator d);
PctDenominator parse_pct_denominator(std::string_view text);

}  // namespace gazekit
