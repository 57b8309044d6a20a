#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gazekit/model.hpp"

namespace gazekit {

/// AOI id (or AOI-group symbol); nullopt means the fixation hit no AOI.
using Label = std::optional<std::string>;

struct LabeledFixation {
  Fixation fixation;
  Label aoi_id;
};

/// Maximal run of consecutive fixations with the same label. Ordinals are
/// `Fixation::index` values of the first and last member.
struct Visit {
  std::string aoi_id;
  std::size_t first_fixation = 0;
  std::size_t last_fixation = 0;
  std::size_t fixation_count = 0;
  double duration = 0.0;
  friend bool operator==(const Visit&, const Visit&) = default;
};

enum class TransitionKind { Direct, Indirect, Through, Glance };
enum class Collapse { PerFixation, PerVisit };
enum class FocusClass { Entering, Leaving, GlancingOut, Inside, Unrelated };

std::string_view to_string(TransitionKind kind);
std::string_view to_string(FocusClass cls);

struct TransitionCounts {
  TransitionKind kind = TransitionKind::Direct;
  std::optional<std::string> focus;
  std::vector<std::string> symbols;
  std::vector<std::uint64_t> counts;  // row-major |symbols| x |symbols|, from -> to

  std::uint64_t at(std::size_t from, std::size_t to) const { return counts[from * symbols.size() + to]; }
  std::uint64_t at(const std::string& from, const std::string& to) const;
  std::uint64_t total() const;
};

/// Edge-inclusive for rects; even-odd with boundary counted inside for polygons.
bool contains(const Shape& shape, Point2 p);

/// The containing AOI with the lowest precedence rank, if any.
Label hit_test(double x, double y, std::span<const Aoi> aois);

std::vector<LabeledFixation> label_fixations(std::span<const Fixation> fixations, std::span<const Aoi> aois);

/// Swaps each AOI label for its group id (as a decimal string). AOIs in the
/// ungrouped gid 0 map to no label.
std::vector<LabeledFixation> map_to_groups(std::span<const LabeledFixation> labels, std::span<const Aoi> aois);

/// Hit-any-AOI rate. Throws EmptyInput for an empty sequence.
double haar(std::span<const LabeledFixation> labels);

std::vector<Visit> visits(std::span<const LabeledFixation> labels);

/// Symbol sequence; unlabelled fixations are dropped. Map labels with
/// `map_to_groups` first for the AOI-group alphabet.
std::vector<std::string> aoi_sequence(std::span<const LabeledFixation> labels, Collapse collapse);

/// Counts transitions over the visit sequence:
///  - Direct: consecutive visits with no unlabelled fixation between them.
///  - Indirect: visits separated only by unlabelled fixations.
///  - Through(f): visit triple (i, f, j) with no unlabelled fixation inside; i may equal j.
///  - Glance: visit triple (i, j, i) with no unlabelled fixation inside.
/// `symbols` fixes the matrix axes; for Through, `focus` must be one of them.
TransitionCounts transition_counts(std::span<const LabeledFixation> labels, TransitionKind kind,
                                   const std::vector<std::string>& symbols,
                                   const std::optional<std::string>& focus = std::nullopt);

/// Per-fixation context relative to a focus AOI. A sequence-initial visit to
/// the focus has no Entering mark. Throws UnknownFocusAoi when `focus` is not
/// in `known_aois`.
std::vector<FocusClass> focus_context(std::span<const LabeledFixation> labels, const std::string& focus,
                                      std::span<const Aoi> known_aois);

}  // namespace gazekit
