#include "gazekit/ingest.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>

#include "gazekit/error.hpp"
#include "gazekit/text.hpp"

namespace gazekit {

namespace {

struct Row {
  std::size_t line_no;
  std::vector<std::string_view> fields;
};

bool skippable(std::string_view line) {
  return line.empty() || line.front() == '#' ||
         line.find_first_not_of(" \t") == std::string_view::npos;
}

std::vector<Row> data_rows(std::string_view bytes) {
  std::vector<Row> rows;
  if (bytes.starts_with("\xEF\xBB\xBF")) bytes.remove_prefix(3);
  auto lines = split_lines(bytes);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (skippable(lines[i])) continue;
    rows.push_back({i + 1, split_tabs(lines[i])});
  }
  return rows;
}

// A short row whose fields are all numbers is a malformed data row, not a header.
bool looks_numeric(const Row& row, std::size_t columns) {
  for (std::size_t i = 0; i < std::min(columns, row.fields.size()); ++i)
    if (!parse_number(row.fields[i])) return false;
  return true;
}

double number_at(const Row& row, std::size_t column) {
  auto value = parse_number(row.fields[column]);
  if (!value) {
    throw Error(ErrorCode::MalformedRow,
                "unparseable number '" + std::string(row.fields[column]) + "' in column " + std::to_string(column + 1),
                row.line_no);
  }
  return *value;
}

double median_interval(const std::vector<GazePoint>& points) {
  if (points.size() < 2) return 1.0;
  std::vector<double> gaps;
  gaps.reserve(points.size() - 1);
  for (std::size_t i = 1; i < points.size(); ++i) gaps.push_back(points[i].t - points[i - 1].t);
  std::sort(gaps.begin(), gaps.end());
  const auto n = gaps.size();
  return n % 2 == 1 ? gaps[n / 2] : (gaps[n / 2 - 1] + gaps[n / 2]) / 2.0;
}

Gid parse_gid(const nlohmann::json& value, const std::string& where) {
  if (!value.is_number_integer()) throw Error(ErrorCode::MalformedJson, where + ": gid must be an integer");
  if (value.is_number_unsigned()) {
    auto gid = value.get<std::uint64_t>();
    if (gid > std::numeric_limits<Gid>::max()) throw Error(ErrorCode::MalformedJson, where + ": gid too large");
    return static_cast<Gid>(gid);
  }
  auto gid = value.get<std::int64_t>();
  if (gid < 0) throw Error(ErrorCode::NegativeGid, where + " = " + std::to_string(gid));
  if (gid > std::numeric_limits<Gid>::max()) throw Error(ErrorCode::MalformedJson, where + ": gid too large");
  return static_cast<Gid>(gid);
}

}  // namespace

GazeIngest parse_gaze_tsv(std::string_view bytes, const std::string& sample_id, const IngestOptions& opts) {
  auto rows = data_rows(bytes);
  std::size_t first = 0;
  if (!rows.empty()) {
    bool header = opts.has_header == IngestOptions::Header::Yes ||
                  (opts.has_header == IngestOptions::Header::Auto && !looks_numeric(rows.front(), 3));
    if (header) first = 1;
  }
  if (first >= rows.size()) throw Error(ErrorCode::EmptyFile, "no gaze rows in sample '" + sample_id + "'");

  GazeIngest out;
  out.sample.id = sample_id;
  out.sample.label = sample_id;
  std::vector<std::string_view> labels;
  for (std::size_t r = first; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const bool field_count_ok = row.fields.size() == 3 || (opts.twi_column && row.fields.size() == 4);
    if (!field_count_ok) {
      throw Error(ErrorCode::MalformedRow, "expected " + std::string(opts.twi_column ? "3 or 4" : "3") +
                                               " fields, got " + std::to_string(row.fields.size()),
                  row.line_no);
    }
    GazePoint p{number_at(row, 0), number_at(row, 1), number_at(row, 2)};
    if (p.t < 0.0) throw Error(ErrorCode::MalformedRow, "negative timestamp", row.line_no);
    if (!out.sample.points.empty() && !(p.t > out.sample.points.back().t))
      throw Error(ErrorCode::NonMonotoneTime, "timestamp does not increase", row.line_no);
    out.sample.points.push_back(p);
    labels.push_back(row.fields.size() == 4 ? row.fields[3] : std::string_view{});
  }

  if (opts.twi_column) {
    const double tail = median_interval(out.sample.points);
    std::map<std::string, int, std::less<>> seen;
    std::size_t i = 0;
    while (i < labels.size()) {
      if (labels[i].empty()) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j + 1 < labels.size() && labels[j + 1] == labels[i]) ++j;
      Twi twi;
      twi.label = std::string(labels[i]);
      int occurrence = ++seen[twi.label];
      twi.id = sample_id + ":" + twi.label + (occurrence > 1 ? "#" + std::to_string(occurrence) : "");
      twi.sample_id = sample_id;
      twi.t_start = out.sample.points[i].t;
      twi.t_end = out.sample.points[j].t + tail;
      out.twis.push_back(std::move(twi));
      i = j + 1;
    }
  }
  return out;
}

std::vector<Twi> parse_twi_tsv(std::string_view bytes) {
  auto rows = data_rows(bytes);
  std::size_t first = 0;
  if (!rows.empty() && !looks_numeric(rows.front(), 2)) first = 1;

  std::vector<Twi> twis;
  for (std::size_t r = first; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() < 2 || row.fields.size() > 6) {
      throw Error(ErrorCode::MalformedRow, "expected 2 to 6 fields, got " + std::to_string(row.fields.size()),
                  row.line_no);
    }
    Twi twi;
    twi.t_start = number_at(row, 0);
    twi.t_end = number_at(row, 1);
    if (!(twi.t_start < twi.t_end)) throw Error(ErrorCode::InvertedWindow, "start >= end", row.line_no);
    const std::size_t ordinal = twis.size() + 1;
    twi.id = row.fields.size() > 2 && !row.fields[2].empty() ? std::string(row.fields[2])
                                                               : "twi_" + std::to_string(ordinal);
    if (row.fields.size() > 3 && !row.fields[3].empty()) {
      auto gid = parse_number(row.fields[3]);
      if (!gid || *gid != static_cast<double>(static_cast<long long>(*gid)))
        throw Error(ErrorCode::MalformedRow, "gid must be an integer", row.line_no);
      if (*gid < 0) throw Error(ErrorCode::NegativeGid, "gid " + std::string(row.fields[3]), row.line_no);
      if (*gid > std::numeric_limits<Gid>::max()) throw Error(ErrorCode::MalformedRow, "gid too large", row.line_no);
      twi.group_id = static_cast<Gid>(*gid);
    }
    if (row.fields.size() > 4 && !row.fields[4].empty() && row.fields[4] != "*")
      twi.sample_id = std::string(row.fields[4]);
    twi.label = row.fields.size() > 5 && !row.fields[5].empty() ? std::string(row.fields[5]) : twi.id;
    twis.push_back(std::move(twi));
  }
  return twis;
}

GroupTable parse_groups_json(std::string_view bytes) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::MalformedJson, "top level must be an object");

  GroupTable table;
  auto read = [&](const char* key, std::map<std::string, Gid>& into) {
    auto it = doc.find(key);
    if (it == doc.end()) return;
    if (!it->is_object()) throw Error(ErrorCode::MalformedJson, std::string("\"") + key + "\" must be an object");
    for (const auto& [id, value] : it->items()) into[id] = parse_gid(value, std::string(key) + "." + id);
  };
  read("samples", table.samples);
  read("aois", table.aois);
  read("twis", table.twis);
  return table;
}

std::string format_gaze_tsv(const GazeSample& sample) {
  std::string out;
  for (const auto& p : sample.points) {
    out += format_number(p.t);
    out += '\t';
    out += format_number(p.x);
    out += '\t';
    out += format_number(p.y);
    out += '\n';
  }
  return out;
}

std::string format_twi_tsv(const std::vector<Twi>& twis) {
  std::string out = "start\tend\tid\tgid\tsample\tlabel\n";
  for (const auto& t : twis) {
    out += format_number(t.t_start) + '\t' + format_number(t.t_end) + '\t' + t.id + '\t' +
           std::to_string(t.group_id) + '\t' + (t.sample_id ? *t.sample_id : "*") + '\t' + (t.label.empty() ? t.id : t.label) + '\n';
  }
  return out;
}

std::string format_groups_json(const GroupTable& groups) {
  nlohmann::json doc = {{"samples", groups.samples}, {"aois", groups.aois}, {"twis", groups.twis}};
  return doc.dump(2) + "\n";
}

namespace {

double json_number(const nlohmann::json& doc, const char* key, const std::string& where) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_number()) throw Error(ErrorCode::MalformedJson, where + ": \"" + key + "\" must be a number");
  return it->get<double>();
}

Shape parse_shape(const nlohmann::json& doc, const std::string& where) {
  if (!doc.is_object()) throw Error(ErrorCode::MalformedJson, where + ": shape must be an object");
  const auto type = doc.value("type", std::string());
  if (type == "rect") {
    return Rect{json_number(doc, "x", where), json_number(doc, "y", where), json_number(doc, "w", where),
                json_number(doc, "h", where)};
  }
  if (type == "polygon") {
    auto it = doc.find("vertices");
    if (it == doc.end() || !it->is_array()) throw Error(ErrorCode::MalformedJson, where + ": polygon needs vertices");
    Polygon poly;
    for (const auto& v : *it) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw Error(ErrorCode::MalformedJson, where + ": vertex must be [x, y]");
      poly.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return poly;
  }
  throw Error(ErrorCode::MalformedJson, where + ": unknown shape type '" + type + "'");
}

}  // namespace

std::vector<Aoi> parse_aois_json(std::string_view bytes) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::MalformedJson, "top level must be a list of AOIs");
  std::vector<Aoi> aois;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const std::string where = "aoi #" + std::to_string(i);
    if (!item.is_object()) throw Error(ErrorCode::MalformedJson, where + " must be an object");
    Aoi aoi;
    auto id = item.find("id");
    if (id == item.end() || !id->is_string() || id->get<std::string>().empty())
      throw Error(ErrorCode::MalformedJson, where + ": \"id\" must be a non-empty string");
    aoi.id = id->get<std::string>();
    aoi.name = item.contains("name") && item["name"].is_string() ? item["name"].get<std::string>() : aoi.id;
    auto shape = item.find("shape");
    if (shape == item.end()) throw Error(ErrorCode::MalformedJson, where + ": missing shape");
    aoi.shape = parse_shape(*shape, where);
    if (auto p = item.find("precedence"); p != item.end()) {
      if (!p->is_number_integer()) throw Error(ErrorCode::MalformedJson, where + ": precedence must be an integer");
      aoi.precedence = p->get<int>();
    }
    if (auto g = item.find("gid"); g != item.end()) aoi.group_id = parse_gid(*g, where + ".gid");
    aois.push_back(std::move(aoi));
  }
  return aois;
}

std::string format_aois_json(const std::vector<Aoi>& aois) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& a : aois) {
    nlohmann::json shape;
    if (const auto* r = std::get_if<Rect>(&a.shape)) {
      shape = {{"type", "rect"}, {"x", r->x}, {"y", r->y}, {"w", r->w}, {"h", r->h}};
    } else {
      nlohmann::json vertices = nlohmann::json::array();
      for (const auto& v : std::get<Polygon>(a.shape).vertices) vertices.push_back({v.x, v.y});
      shape = {{"type", "polygon"}, {"vertices", vertices}};
    }
    doc.push_back({{"id", a.id}, {"name", a.name}, {"shape", shape}, {"precedence", a.precedence}, {"gid", a.group_id}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace gazekit
