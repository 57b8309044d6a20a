#include "gazekit/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "gazekit/error.hpp"

namespace gazekit {

namespace {

double cross(Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

bool on_segment(Point2 p, Point2 a, Point2 b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

int sign(double v) { return (v > 0) - (v < 0); }

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  int d1 = sign(cross(c, d, a));
  int d2 = sign(cross(c, d, b));
  int d3 = sign(cross(a, b, c));
  int d4 = sign(cross(a, b, d));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(a, c, d)) return true;
  if (d2 == 0 && on_segment(b, c, d)) return true;
  if (d3 == 0 && on_segment(c, a, b)) return true;
  if (d4 == 0 && on_segment(d, a, b)) return true;
  return false;
}

bool self_intersects(const Polygon& polygon) {
  const auto& v = polygon.vertices;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // skip edges sharing a vertex
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return true;
    }
  }
  return false;
}

template <typename T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
  auto it = std::find_if(items.begin(), items.end(), [&](const T& item) { return item.id == id; });
  return it == items.end() ? nullptr : &*it;
}

}  // namespace

double signed_area(const Polygon& polygon) {
  const auto& v = polygon.vertices;
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return twice / 2.0;
}

std::optional<std::string> shape_problem(const Shape& shape) {
  if (const auto* rect = std::get_if<Rect>(&shape)) {
    if (!std::isfinite(rect->x) || !std::isfinite(rect->y) || !std::isfinite(rect->w) || !std::isfinite(rect->h))
      return "degenerate rect: non-finite coordinate";
    if (!(rect->w > 0.0) || !(rect->h > 0.0)) return "degenerate rect: non-positive size";
    return std::nullopt;
  }
  const auto& polygon = std::get<Polygon>(shape);
  if (polygon.vertices.size() < 3) return "degenerate polygon: fewer than 3 vertices";
  for (const auto& p : polygon.vertices)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return "degenerate polygon: non-finite vertex";
  if (signed_area(polygon) == 0.0) return "degenerate polygon: zero area";
  if (self_intersects(polygon)) return "degenerate polygon: self-intersecting";
  return std::nullopt;
}

Selection parse_selection(std::string_view text) {
  if (text == "all") return Selection::all();
  if (text.starts_with("group:")) {
    auto digits = text.substr(6);
    Gid gid = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), gid);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size())
      throw Error(ErrorCode::InvalidArgument, "bad group selection '" + std::string(text) + "'");
    return Selection::group(gid);
  }
  if (text.starts_with("id:") && text.size() > 3) return Selection::one(std::string(text.substr(3)));
  throw Error(ErrorCode::InvalidArgument, "bad selection '" + std::string(text) + "'");
}

std::string format_selection(const Selection& selection) {
  switch (selection.kind) {
    case Selection::Kind::All: return "all";
    case Selection::Kind::Group: return "group:" + std::to_string(selection.gid);
    case Selection::Kind::One: return "id:" + selection.id;
  }
  return "all";
}

const GazeSample* Dataset::find_sample(std::string_view id) const { return find_by_id(samples, id); }
const Aoi* Dataset::find_aoi(std::string_view id) const { return find_by_id(aois, id); }
const Twi* Dataset::find_twi(std::string_view id) const { return find_by_id(twis, id); }

GroupTable group_table_of(const Dataset& dataset) {
  GroupTable table;
  for (const auto& s : dataset.samples) table.samples[s.id] = s.group_id;
  for (const auto& a : dataset.aois) table.aois[a.id] = a.group_id;
  for (const auto& t : dataset.twis) table.twis[t.id] = t.group_id;
  return table;
}

void apply_groups(Dataset& dataset, const GroupTable& table) {
  auto apply = [](auto& items, const std::map<std::string, Gid>& gids) {
    for (auto& item : items) {
      if (auto it = gids.find(item.id); it != gids.end()) item.group_id = it->second;
    }
  };
  apply(dataset.samples, table.samples);
  apply(dataset.aois, table.aois);
  apply(dataset.twis, table.twis);
}

std::string_view to_string(Dimension dim) {
  switch (dim) {
    case Dimension::Sample: return "sample";
    case Dimension::SampleGroup: return "sample_group";
    case Dimension::Aoi: return "aoi";
    case Dimension::AoiGroup: return "aoi_group";
    case Dimension::Twi: return "twi";
    case Dimension::TwiGroup: return "twi_group";
  }
  return "sample";
}

Dimension parse_dimension(std::string_view text) {
  for (auto dim : {Dimension::Sample, Dimension::SampleGroup, Dimension::Aoi, Dimension::AoiGroup, Dimension::Twi,
                   Dimension::TwiGroup}) {
    if (to_string(dim) == text) return dim;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown dimension '" + std::string(text) + "'");
}

std::vector<std::string> MetricMatrix::display_row_ids() const {
  std::vector<std::string> out;
  out.reserve(row_order.size());
  for (auto i : row_order) out.push_back(row_ids[i]);
  return out;
}

std::vector<std::string> MetricMatrix::display_col_ids() const {
  std::vector<std::string> out;
  out.reserve(col_order.size());
  for (auto i : col_order) out.push_back(col_ids[i]);
  return out;
}

MetricMatrix make_matrix(Dimension row_dim, Dimension col_dim, std::string metric_id,
                         std::vector<std::string> row_ids, std::vector<std::string> col_ids, bool symmetric) {
  MetricMatrix m;
  m.row_dim = row_dim;
  m.col_dim = col_dim;
  m.metric_id = std::move(metric_id);
  m.row_ids = std::move(row_ids);
  m.col_ids = std::move(col_ids);
  m.symmetric = symmetric;
  m.values.assign(m.row_ids.size() * m.col_ids.size(), 0.0);
  m.row_order.resize(m.row_ids.size());
  m.col_order.resize(m.col_ids.size());
  std::iota(m.row_order.begin(), m.row_order.end(), std::size_t{0});
  std::iota(m.col_order.begin(), m.col_order.end(), std::size_t{0});
  return m;
}

ValidationReport dataset_validate(const std::vector<GazeSample>& samples, const std::vector<Aoi>& aois,
                                  const std::vector<Twi>& twis, const GroupTable& groups) {
  ValidationReport report;
  auto issue = [&](std::string text) { report.issues.push_back(std::move(text)); };

  std::set<std::string> sample_ids;
  for (const auto& sample : samples) {
    const std::string where = "sample '" + sample.id + "': ";
    if (sample.id.empty()) issue("sample with empty id");
    if (!sample_ids.insert(sample.id).second) issue("duplicate sample id '" + sample.id + "'");
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
      const auto& p = sample.points[i];
      if (!std::isfinite(p.t) || !std::isfinite(p.x) || !std::isfinite(p.y)) {
        issue(where + "non-finite value at index " + std::to_string(i));
        continue;
      }
      if (p.t < 0.0) issue(where + "negative timestamp at index " + std::to_string(i));
      if (i > 0 && !(p.t > sample.points[i - 1].t))
        issue(where + "non-increasing timestamp at index " + std::to_string(i));
    }
  }

  std::set<std::string> aoi_ids;
  std::set<int> precedences;
  for (const auto& aoi : aois) {
    if (aoi.id.empty()) issue("aoi with empty id");
    if (!aoi_ids.insert(aoi.id).second) issue("duplicate aoi id '" + aoi.id + "'");
    if (!precedences.insert(aoi.precedence).second)
      issue("aoi '" + aoi.id + "': duplicate precedence " + std::to_string(aoi.precedence));
    if (auto problem = shape_problem(aoi.shape)) issue("aoi '" + aoi.id + "': " + *problem);
  }

  std::set<std::string> twi_ids;
  for (const auto& twi : twis) {
    if (twi.id.empty()) issue("twi with empty id");
    if (!twi_ids.insert(twi.id).second) issue("duplicate twi id '" + twi.id + "'");
    if (!std::isfinite(twi.t_start) || !std::isfinite(twi.t_end) || !(twi.t_start < twi.t_end))
      issue("twi '" + twi.id + "': inverted window");
    if (twi.sample_id && !sample_ids.contains(*twi.sample_id))
      issue("twi '" + twi.id + "': dangling sample reference '" + *twi.sample_id + "'");
  }

  auto dangling = [&](const std::map<std::string, Gid>& table, const std::set<std::string>& known,
                      const char* what) {
    for (const auto& [id, gid] : table) {
      if (!known.contains(id)) issue(std::string("dangling group reference: ") + what + " '" + id + "'");
    }
  };
  dangling(groups.samples, sample_ids, "sample");
  dangling(groups.aois, aoi_ids, "aoi");
  dangling(groups.twis, twi_ids, "twi");
  return report;
}

}  // namespace gazekit
