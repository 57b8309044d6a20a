#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gazekit/aoi.hpp"
#include "gazekit/model.hpp"

namespace gazekit {

struct NwScoring {
  double match = 1.0;
  double mismatch = -1.0;
  double gap = -1.0;
  friend bool operator==(const NwScoring&, const NwScoring&) = default;
};

/// Throws InvalidArgument unless match > mismatch and gap < match.
void check(const NwScoring& scoring);

struct NwResult {
  double raw = 0.0;
  double normalized = 0.0;  // raw / (match * max(|a|, |b|)); 1 for two empty sequences
};

/// Global alignment score (Needleman-Wunsch, linear gap cost).
NwResult nw_score(std::span<const std::string> a, std::span<const std::string> b, const NwScoring& scoring = {});

/// Cosine of the flattened off-diagonal counts. Two all-zero operands give 1,
/// exactly one all-zero operand gives 0. Throws AlphabetMismatch when the kind,
/// focus or symbol axes differ.
double transition_cosine(const TransitionCounts& a, const TransitionCounts& b);

/// Histogram intersection of two grids with identical geometry; throws
/// GeometryMismatch otherwise.
double density_overlap(const DensityGrid& a, const DensityGrid& b);

/// Measure between entities i and j (indices into the id list).
using PairMeasure = std::function<double(std::size_t, std::size_t)>;

/// Symmetric matrix of `measure` over all pairs; the upper triangle (with the
/// diagonal) is evaluated and mirrored. Throws EmptyInput for no entities.
MetricMatrix similarity_matrix(const std::vector<std::string>& ids, Dimension dim, const std::string& metric_id,
                               const PairMeasure& measure);

}  // namespace gazekit
