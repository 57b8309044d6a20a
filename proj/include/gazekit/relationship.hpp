#pragma once

#include <string>
#include <vector>

#include "gazekit/metrics.hpp"
#include "gazekit/model.hpp"
#include "gazekit/session.hpp"

namespace gazekit {

/// Builds a relationship matrix between two entity dimensions under `scope`.
///
/// Supported combinations (group dimensions aggregate their members; gid 0 is
/// never a group entity):
///  - {Sample, SampleGroup, Twi, TwiGroup} x {Aoi, AoiGroup}: fixation_count,
///    total_duration, mean_duration, median_duration, pct_time, visit_count,
///    mean_visit_duration, haar (the row's hit-any-AOI rate in every column).
///  - Aoi x Aoi, AoiGroup x AoiGroup: transitions_direct, transitions_indirect,
///    transitions_glance, transitions_through:<aoi or gid>.
///  - {Sample, SampleGroup} x {Sample, SampleGroup} and
///    {Twi, TwiGroup} x {Twi, TwiGroup}: nw, nw_group, transition_cosine,
///    transition_cosine_group, density_overlap.
///  - {Sample, SampleGroup} x {Twi, TwiGroup}: fixation_count, total_duration,
///    mean_duration, median_duration, saccade_count, mean_saccade_length,
///    median_saccade_length, mean_saccade_duration.
/// Anything else throws UnsupportedCombination.
MetricMatrix relationship_matrix(const Session& session, Dimension row_dim, Dimension col_dim,
                                 const std::string& metric_id, const Scope& scope);

/// Computes every open matrix view of the session, applying stored orderings
/// (or a fresh global reordering when the view asks for it).
MetricMatrix compute_view(const Session& session, const MatrixView& view);

/// Scope rendered as "samples=<selection>;twis=<selection>".
std::string format_scope(const Scope& scope);
/// Parses "all" or "samples=<selection>[;|,]twis=<selection>" (either part optional).
Scope parse_scope(std::string_view text);

/// Per-sample metric catalogue under the session scope: every AOI statistic per
/// (sample, AOI), HAAR and saccade statistics per sample, and the same rows
/// aggregated per sample group.
std::vector<MetricRow> metric_catalogue(const Session& session);

/// "row_id\tcol_id\tvalue" in display order, with a header line.
std::string format_matrix_tsv(const MetricMatrix& matrix);

}  // namespace gazekit
