#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gazekit/aoi.hpp"
#include "gazekit/detection.hpp"
#include "gazekit/model.hpp"
#include "gazekit/similarity.hpp"
#include "gazekit/spatial.hpp"

namespace gazekit {

/// Denominator for pct_time: the scoped recording span, or the scoped fixation time.
enum class PctDenominator { ScopedSpan, FixationTime };

/// An open matrix view: what to compute plus the display order last chosen for it.
struct MatrixView {
  std::string id;
  Dimension rows = Dimension::Sample;
  Dimension cols = Dimension::Aoi;
  std::string metric;
  bool reorder_global = false;
  std::vector<std::string> row_order;  // empty = canonical order
  std::vector<std::string> col_order;
  friend bool operator==(const MatrixView&, const MatrixView&) = default;
};

struct SessionConfig {
  DetectionParams detection;
  Scope scope;
  double time_fraction = 1.0;
  KdeParams kde;
  BundleParams bundle;
  NwScoring nw;
  PctDenominator pct_denominator = PctDenominator::ScopedSpan;
  std::vector<MatrixView> matrices;
  friend bool operator==(const SessionConfig&, const SessionConfig&) = default;
};

void check(const SessionConfig& config);

/// Detection and labelling results for one sample.
struct SampleAnalysis {
  std::vector<Fixation> fixations;
  std::vector<Saccade> saccades;
  std::vector<LabeledFixation> labels;
};

/// Per-sample results, parallel to `Dataset::samples`.
struct Analysis {
  std::vector<SampleAnalysis> samples;
};

/// Immutable, versioned snapshot of an analysis session. Every edit returns a
/// new snapshot with a higher version. Derived results are computed on first
/// use and shared by copies of the same snapshot.
class Session {
 public:
  Session();
  /// Validates the dataset and config; throws InvalidArgument listing the issues.
  Session(Dataset dataset, SessionConfig config, std::uint64_t version = 0);

  std::uint64_t version() const { return version_; }
  const Dataset& dataset() const { return *dataset_; }
  const SessionConfig& config() const { return config_; }

  /// Fixations, saccades and AOI labels for every sample. Thread-safe.
  const Analysis& analysis() const;

  /// New snapshot (version + 1) with `dataset` and/or `config` replaced.
  Session with_dataset(Dataset dataset) const;
  Session with_config(SessionConfig config) const;

 private:
  struct Lazy;
  Session(std::shared_ptr<const Dataset> dataset, SessionConfig config, std::uint64_t version,
          std::shared_ptr<Lazy> detection);

  std::shared_ptr<const Dataset> dataset_;
  SessionConfig config_;
  std::uint64_t version_ = 0;
  std::shared_ptr<Lazy> detection_;
  std::shared_ptr<Lazy> labels_;
};

/// Half-open [start, end) time window.
struct Window {
  double start = 0.0;
  double end = 0.0;
  friend bool operator==(const Window&, const Window&) = default;
};

/// One sample's events after temporal filtering.
struct ScopedSample {
  std::size_t sample_index = 0;
  std::string sample_id;
  Gid gid = kUngrouped;
  bool full_span = true;        // no temporal filter
  std::vector<Window> windows;  // merged, sorted; used when !full_span
  std::vector<LabeledFixation> labels;
  std::vector<Saccade> saccades;       // both endpoint fixations kept
  std::vector<IndexRange> segments;    // runs of `labels` inside one window
  double duration = 0.0;               // scoped span length
  double span_start = 0.0;
  double span_end = 0.0;

  std::vector<Fixation> fixations() const;
};

struct ScopedView {
  Scope scope;
  std::vector<ScopedSample> samples;
};

/// Samples picked by a selection, as indices into the dataset. Throws
/// UnknownScopeTarget for an unknown sample id or gid.
std::vector<std::size_t> select_samples(const Dataset& dataset, const Selection& selection);

/// TWIs picked by a selection; nullopt stands for "all time".
std::optional<std::vector<const Twi*>> select_twis(const Dataset& dataset, const Selection& selection);

/// Restricts one sample to `twis` (those that apply to it), or to its full span.
ScopedSample scope_sample(const Session& session, std::size_t sample_index,
                          const std::optional<std::vector<const Twi*>>& twis);

/// Resolves the session's own scope.
ScopedView resolve_scope(const Session& session);
ScopedView resolve_scope(const Session& session, const Scope& scope);

/// Keeps fixations starting before t_min + f * (t_max - t_min) of each sample's
/// scoped span; f = 1 keeps everything.
ScopedView time_fraction_filter(const ScopedView& view, double fraction);

enum class EntityKind { Sample, Aoi, Twi };

/// Reassigns gids. Throws UnknownId when an id does not exist.
Session edit_groups(const Session& session, EntityKind kind, const std::map<std::string, Gid>& assignments);

/// Replaces one AOI's shape. Throws UnknownId or DegenerateShape.
Session edit_aoi_geometry(const Session& session, const std::string& aoi_id, const Shape& shape);

}  // namespace gazekit
