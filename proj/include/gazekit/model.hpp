#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gazekit {

/// Logical group id. 0 is "ungrouped" and never shows up as a group-level entity.
using Gid = std::uint32_t;
inline constexpr Gid kUngrouped = 0;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// One recorded gaze position; `t` in milliseconds, x/y in stimulus units.
struct GazePoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const GazePoint&, const GazePoint&) = default;
};

struct GazeSample {
  std::string id;
  std::string label;
  std::vector<GazePoint> points;  // strictly increasing t
  Gid group_id = kUngrouped;
};

/// Half-open [begin, end) range of indices.
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct Fixation {
  std::size_t index = 0;
  double cx = 0.0;
  double cy = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
  double duration = 0.0;
  IndexRange point_span;
  friend bool operator==(const Fixation&, const Fixation&) = default;
};

struct Saccade {
  std::size_t from_fixation = 0;
  std::size_t to_fixation = 0;
  double length = 0.0;
  double duration = 0.0;
  double angle = 0.0;  // radians, atan2(dy, dx)
  friend bool operator==(const Saccade&, const Saccade&) = default;
};

struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Polygon {
  std::vector<Point2> vertices;
  friend bool operator==(const Polygon&, const Polygon&) = default;
};

using Shape = std::variant<Rect, Polygon>;

/// Returns a description of why `shape` is unusable, or nullopt when it is valid.
std::optional<std::string> shape_problem(const Shape& shape);

/// Signed shoelace area; positive for counter-clockwise vertex order.
double signed_area(const Polygon& polygon);

struct Aoi {
  std::string id;
  std::string name;
  Shape shape;
  int precedence = 0;  // lower wins on overlap
  Gid group_id = kUngrouped;
};

/// Time window of interest. A window with no `sample_id` is shared by every sample.
/// Membership is half-open: t_start <= t < t_end.
struct Twi {
  std::string id;
  std::string label;
  std::optional<std::string> sample_id;
  double t_start = 0.0;
  double t_end = 0.0;
  Gid group_id = kUngrouped;

  bool applies_to(std::string_view sample) const { return !sample_id || *sample_id == sample; }
  bool contains(double t) const { return t >= t_start && t < t_end; }
};

/// One axis of the level-of-detail toggle: everything, one group, or one entity.
struct Selection {
  enum class Kind { All, Group, One };
  Kind kind = Kind::All;
  Gid gid = kUngrouped;
  std::string id;

  static Selection all() { return {}; }
  static Selection group(Gid g) { return {Kind::Group, g, {}}; }
  static Selection one(std::string entity) { return {Kind::One, kUngrouped, std::move(entity)}; }
  friend bool operator==(const Selection&, const Selection&) = default;
};

struct Scope {
  Selection samples;
  Selection twis;
  friend bool operator==(const Scope&, const Scope&) = default;
};

/// Parses "all", "group:<gid>" or "id:<entity>".
Selection parse_selection(std::string_view text);
std::string format_selection(const Selection& selection);

struct GroupTable {
  std::map<std::string, Gid> samples;
  std::map<std::string, Gid> aois;
  std::map<std::string, Gid> twis;
  friend bool operator==(const GroupTable&, const GroupTable&) = default;
};

struct Dataset {
  std::vector<GazeSample> samples;
  std::vector<Aoi> aois;
  std::vector<Twi> twis;

  const GazeSample* find_sample(std::string_view id) const;
  const Aoi* find_aoi(std::string_view id) const;
  const Twi* find_twi(std::string_view id) const;
};

/// Group assignments currently carried by the entities of `dataset`.
GroupTable group_table_of(const Dataset& dataset);

/// Copies gids from `table` onto matching entities. Unknown ids are ignored here;
/// `dataset_validate` reports them.
void apply_groups(Dataset& dataset, const GroupTable& table);

enum class Dimension { Sample, SampleGroup, Aoi, AoiGroup, Twi, TwiGroup };

std::string_view to_string(Dimension dim);
Dimension parse_dimension(std::string_view text);

/// Relationship or similarity matrix. `values` is row-major in the canonical
/// (construction) order of `row_ids`/`col_ids`; display orderings live in
/// `row_order`/`col_order` as permutations and never touch the data.
struct MetricMatrix {
  Dimension row_dim = Dimension::Sample;
  Dimension col_dim = Dimension::Sample;
  std::string metric_id;
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
  std::vector<double> values;
  bool symmetric = false;
  std::vector<std::size_t> row_order;
  std::vector<std::size_t> col_order;

  std::size_t rows() const { return row_ids.size(); }
  std::size_t cols() const { return col_ids.size(); }
  double at(std::size_t r, std::size_t c) const { return values[r * col_ids.size() + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * col_ids.size() + c]; }
  /// Value at display position (r, c) after applying the orderings.
  double display_at(std::size_t r, std::size_t c) const { return at(row_order[r], col_order[c]); }
  std::vector<std::string> display_row_ids() const;
  std::vector<std::string> display_col_ids() const;
};

/// Builds an empty matrix with identity orderings and zeroed values.
MetricMatrix make_matrix(Dimension row_dim, Dimension col_dim, std::string metric_id,
                         std::vector<std::string> row_ids, std::vector<std::string> col_ids,
                         bool symmetric);

/// Regular raster of non-negative mass. Cell (ix, iy) covers
/// [origin.x + ix*cell_size, origin.x + (ix+1)*cell_size) and likewise in y.
struct DensityGrid {
  Point2 origin;
  double cell_size = 1.0;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> mass;  // row-major, index = iy * width + ix
  double total_mass = 0.0;

  double at(std::size_t ix, std::size_t iy) const { return mass[iy * width + ix]; }
  Point2 cell_center(std::size_t ix, std::size_t iy) const {
    return {origin.x + (static_cast<double>(ix) + 0.5) * cell_size,
            origin.y + (static_cast<double>(iy) + 0.5) * cell_size};
  }
};

struct ValidationReport {
  std::vector<std::string> issues;
  bool accepted() const { return issues.empty(); }
};

/// Lists every invariant violation in the dataset; never throws.
ValidationReport dataset_validate(const std::vector<GazeSample>& samples, const std::vector<Aoi>& aois,
                                  const std::vector<Twi>& twis, const GroupTable& groups);

}  // namespace gazekit
