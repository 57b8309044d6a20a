#include "gazekit/bundle.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <tuple>

#include "gazekit/error.hpp"
#include "gazekit/ingest.hpp"
#include "gazekit/relationship.hpp"
#include "gazekit/text.hpp"
#include "gazekit/zip.hpp"

namespace gazekit {

using nlohmann::json;

std::string_view to_string(PctDenominator d) {
  return d == PctDenominator::ScopedSpan ? "scoped_span" : "fixation_time";
}

PctDenominator parse_pct_denominator(std::string_view text) {
  if (text == "scoped_span") return PctDenominator::ScopedSpan;
  if (text == "fixation_time") return PctDenominator::FixationTime;
  throw Error(ErrorCode::InvalidArgument, "unknown pct_denominator '" + std::string(text) + "'");
}

std::string encode_file_name(std::string_view id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (std::size_t i = 0; i < id.size(); ++i) {
    const auto c = static_cast<unsigned char>(id[i]);
    const bool plain = std::isalnum(c) || c == '_' || c == '-' || (c == '.' && i > 0);
    if (plain) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xf];
    }
  }
  return out;
}

std::string format_fixations_tsv(const std::vector<LabeledFixation>& labels) {
  std::string out = "index\tcx\tcy\tt_start\tt_end\tduration\taoi_id\n";
  for (const auto& lf : labels) {
    const auto& f = lf.fixation;
    out += std::to_string(f.index) + '\t' + format_number(f.cx) + '\t' + format_number(f.cy) + '\t' +
           format_number(f.t_start) + '\t' + format_number(f.t_end) + '\t' + format_number(f.duration) + '\t' +
           lf.aoi_id.value_or("") + '\n';
  }
  return out;
}

std::string format_saccades_tsv(const std::vector<Saccade>& saccades) {
  std::string out = "from\tto\tlength\tduration\tangle\n";
  for (const auto& s : saccades) {
    out += std::to_string(s.from_fixation) + '\t' + std::to_string(s.to_fixation) + '\t' + format_number(s.length) +
           '\t' + format_number(s.duration) + '\t' + format_number(s.angle) + '\n';
  }
  return out;
}

json view_to_json(const MatrixView& view) {
  return {{"id", view.id},
          {"rows", to_string(view.rows)},
          {"cols", to_string(view.cols)},
          {"metric", view.metric},
          {"reorder", view.reorder_global ? "global" : "none"},
          {"row_order", view.row_order},
          {"col_order", view.col_order}};
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

const json& member(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) bad(std::string("missing \"") + key + "\"");
  return *it;
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) bad("\"" + key + "\" must be a number");
  return v.get<double>();
}

std::size_t count(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) bad("\"" + key + "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

std::string text(const json& v, const std::string& key) {
  if (!v.is_string()) bad("\"" + key + "\" must be a string");
  return v.get<std::string>();
}

std::vector<std::string> text_list(const json& v, const std::string& key) {
  if (!v.is_array()) bad("\"" + key + "\" must be a list of strings");
  std::vector<std::string> out;
  for (const auto& item : v) out.push_back(text(item, key));
  return out;
}

template <typename F>
void if_present(const json& doc, const char* key, F&& apply) {
  if (auto it = doc.find(key); it != doc.end()) apply(*it);
}

}  // namespace

MatrixView view_from_json(const json& doc) {
  if (!doc.is_object()) bad("matrix view must be an object");
  MatrixView view;
  view.id = text(member(doc, "id"), "id");
  view.rows = parse_dimension(text(member(doc, "rows"), "rows"));
  view.cols = parse_dimension(text(member(doc, "cols"), "cols"));
  view.metric = text(member(doc, "metric"), "metric");
  if_present(doc, "reorder", [&](const json& v) {
    const auto mode = text(v, "reorder");
    if (mode != "global" && mode != "none") bad("reorder must be \"global\" or \"none\"");
    view.reorder_global = mode == "global";
  });
  if_present(doc, "row_order", [&](const json& v) { view.row_order = text_list(v, "row_order"); });
  if_present(doc, "col_order", [&](const json& v) { view.col_order = text_list(v, "col_order"); });
  return view;
}

json config_to_json(const SessionConfig& c) {
  json matrices = json::array();
  for (const auto& m : c.matrices) matrices.push_back(view_to_json(m));
  return {
      {"detection", {{"dispersion_threshold", c.detection.dispersion_threshold}, {"min_duration", c.detection.min_duration}}},
      {"scope", {{"samples", format_selection(c.scope.samples)}, {"twis", format_selection(c.scope.twis)}}},
      {"time_fraction", c.time_fraction},
      {"kde",
       {{"kernel", to_string(c.kde.kernel)},
        {"bandwidth", c.kde.bandwidth},
        {"grid_width", c.kde.grid_width},
        {"weighting", to_string(c.kde.weighting)}}},
      {"bundle",
       {{"iterations", c.bundle.iterations},
        {"kernel_bandwidth", c.bundle.kernel_bandwidth},
        {"smoothing", c.bundle.smoothing},
        {"direction_split_deg", c.bundle.direction_split_deg},
        {"subdivisions", c.bundle.subdivisions},
        {"advection", c.bundle.advection}}},
      {"nw", {{"match", c.nw.match}, {"mismatch", c.nw.mismatch}, {"gap", c.nw.gap}}},
      {"pct_denominator", to_string(c.pct_denominator)},
      {"matrices", matrices},
  };
}

SessionConfig merge_config_json(const json& doc, SessionConfig c) {
  if (!doc.is_object()) bad("config must be an object");
  if_present(doc, "detection", [&](const json& d) {
    if_present(d, "dispersion_threshold", [&](const json& v) { c.detection.dispersion_threshold = number(v, "dispersion_threshold"); });
    if_present(d, "min_duration", [&](const json& v) { c.detection.min_duration = number(v, "min_duration"); });
  });
  if_present(doc, "scope", [&](const json& s) {
    if (s.is_string()) {
      c.scope = parse_scope(s.get<std::string>());
      return;
    }
    if_present(s, "samples", [&](const json& v) { c.scope.samples = parse_selection(text(v, "samples")); });
    if_present(s, "twis", [&](const json& v) { c.scope.twis = parse_selection(text(v, "twis")); });
  });
  if_present(doc, "time_fraction", [&](const json& v) { c.time_fraction = number(v, "time_fraction"); });
  if_present(doc, "kde", [&](const json& k) {
    if_present(k, "kernel", [&](const json& v) { c.kde.kernel = parse_kernel(text(v, "kernel")); });
    if_present(k, "bandwidth", [&](const json& v) { c.kde.bandwidth = number(v, "bandwidth"); });
    if_present(k, "grid_width", [&](const json& v) { c.kde.grid_width = count(v, "grid_width"); });
    if_present(k, "weighting", [&](const json& v) { c.kde.weighting = parse_weighting(text(v, "weighting")); });
  });
  if_present(doc, "bundle", [&](const json& b) {
    if_present(b, "iterations", [&](const json& v) { c.bundle.iterations = count(v, "iterations"); });
    if_present(b, "kernel_bandwidth", [&](const json& v) { c.bundle.kernel_bandwidth = number(v, "kernel_bandwidth"); });
    if_present(b, "smoothing", [&](const json& v) { c.bundle.smoothing = number(v, "smoothing"); });
    if_present(b, "direction_split_deg", [&](const json& v) { c.bundle.direction_split_deg = number(v, "direction_split_deg"); });
    if_present(b, "subdivisions", [&](const json& v) { c.bundle.subdivisions = count(v, "subdivisions"); });
    if_present(b, "advection", [&](const json& v) { c.bundle.advection = number(v, "advection"); });
  });
  if_present(doc, "nw", [&](const json& n) {
    if_present(n, "match", [&](const json& v) { c.nw.match = number(v, "match"); });
    if_present(n, "mismatch", [&](const json& v) { c.nw.mismatch = number(v, "mismatch"); });
    if_present(n, "gap", [&](const json& v) { c.nw.gap = number(v, "gap"); });
  });
  if_present(doc, "pct_denominator",
             [&](const json& v) { c.pct_denominator = parse_pct_denominator(text(v, "pct_denominator")); });
  if_present(doc, "matrices", [&](const json& v) {
    if (!v.is_array()) bad("\"matrices\" must be a list");
    c.matrices.clear();
    for (const auto& m : v) c.matrices.push_back(view_from_json(m));
  });
  check(c);
  return c;
}

namespace {

std::string metric_rows_tsv(const Session& session) {
  try {
    std::vector<MetricRow> rows = metric_catalogue(session);
    return format_metrics_tsv(rows);
  } catch (const Error&) {
    // a scope naming entities that no longer exist has no catalogue
    return format_metrics_tsv({});
  }
}

std::optional<std::string> view_tsv(const Session& session, const MatrixView& view) {
  try {
    return format_matrix_tsv(compute_view(session, view));
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

std::string export_bundle(const Session& session) {
  const auto& ds = session.dataset();
  const auto& analysis = session.analysis();
  std::vector<ZipEntry> entries = {{"samples/", ""}, {"fixations/", ""}, {"saccades/", ""}, {"metrics/", ""}};

  json samples = json::array();
  for (const auto& s : ds.samples) {
    const auto file = "samples/" + encode_file_name(s.id) + ".tsv";
    entries.push_back({file, format_gaze_tsv(s)});
    samples.push_back({{"id", s.id}, {"label", s.label}, {"file", file}});
  }
  for (std::size_t i = 0; i < ds.samples.size(); ++i)
    entries.push_back({"fixations/" + encode_file_name(ds.samples[i].id) + ".tsv",
                       format_fixations_tsv(analysis.samples[i].labels)});
  for (std::size_t i = 0; i < ds.samples.size(); ++i)
    entries.push_back({"saccades/" + encode_file_name(ds.samples[i].id) + ".tsv",
                       format_saccades_tsv(analysis.samples[i].saccades)});

  entries.push_back({"aois.json", format_aois_json(ds.aois)});
  entries.push_back({"twis.tsv", format_twi_tsv(ds.twis)});
  entries.push_back({"groups.json", format_groups_json(group_table_of(ds))});
  entries.push_back({"metrics.tsv", metric_rows_tsv(session)});
  for (const auto& view : session.config().matrices)
    if (auto tsv = view_tsv(session, view)) entries.push_back({"metrics/" + encode_file_name(view.id) + ".tsv", *tsv});

  json config = config_to_json(session.config());
  config["format"] = kBundleFormat;
  config["format_version"] = kBundleFormatVersion;
  config["version"] = session.version();
  config["samples"] = samples;
  entries.push_back({"config.json", config.dump(2) + "\n"});
  return write_zip(entries);
}

namespace {

[[noreturn]] void mismatch(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SchemaMismatch, path + ": " + what);
}

// Runs `parse`, reporting any parse failure as SchemaMismatch on `path`.
// A missing file stays MissingFile.
template <typename F>
auto parse_file(const std::string& path, F&& parse) {
  try {
    return parse();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MissingFile) throw;
    mismatch(path, e.what());
  } catch (const json::exception& e) {
    mismatch(path, e.what());
  }
}

}  // namespace

ImportResult import_bundle(std::string_view zip_bytes) {
  std::map<std::string, std::string> files;
  for (auto& e : read_zip(zip_bytes, "bundle")) files[e.name] = std::move(e.data);
  auto file = [&](const std::string& path) -> const std::string& {
    auto it = files.find(path);
    if (it == files.end()) throw Error(ErrorCode::MissingFile, path);
    return it->second;
  };

  const auto& config_text = file("config.json");
  const json config = parse_file("config.json", [&] { return json::parse(config_text); });
  if (!config.is_object() || config.value("format", std::string()) != kBundleFormat)
    mismatch("config.json", "not a gazekit bundle");
  if (config.value("format_version", 0) != kBundleFormatVersion) mismatch("config.json", "unsupported format_version");

  Dataset ds;
  ds.aois = parse_file("aois.json", [&] { return parse_aois_json(file("aois.json")); });
  ds.twis = parse_file("twis.tsv", [&] { return parse_twi_tsv(file("twis.tsv")); });
  const auto groups = parse_file("groups.json", [&] { return parse_groups_json(file("groups.json")); });

  const auto samples = config.find("samples");
  if (samples == config.end() || !samples->is_array()) mismatch("config.json", "\"samples\" must be a list");
  for (const auto& entry : *samples) {
    const auto [id, label, path] = parse_file("config.json", [&] {
      return std::tuple{text(member(entry, "id"), "id"), text(member(entry, "label"), "label"),
                        text(member(entry, "file"), "file")};
    });
    auto ingest = parse_file(path, [&] {
      IngestOptions opts;
      opts.has_header = IngestOptions::Header::No;
      return parse_gaze_tsv(file(path), id, opts);
    });
    ingest.sample.label = label;
    ds.samples.push_back(std::move(ingest.sample));
  }
  apply_groups(ds, groups);

  const auto session_config = parse_file("config.json", [&] { return merge_config_json(config, SessionConfig{}); });
  const auto version = parse_file("config.json", [&] {
    const auto& v = member(config, "version");
    if (!v.is_number_unsigned() && !v.is_number_integer()) bad("\"version\" must be an integer");
    return v.get<std::uint64_t>();
  });

  ImportResult result{parse_file("bundle", [&] { return Session(std::move(ds), session_config, version); }), {}};

  const auto& session = result.session;
  const auto& analysis = session.analysis();
  auto cross_check = [&](const std::string& path, const std::string& expected) {
    auto it = files.find(path);
    if (it != files.end() && it->second != expected) result.warnings.push_back("RecomputationMismatch: " + path);
  };
  for (std::size_t i = 0; i < session.dataset().samples.size(); ++i) {
    const auto name = encode_file_name(session.dataset().samples[i].id) + ".tsv";
    cross_check("fixations/" + name, format_fixations_tsv(analysis.samples[i].labels));
    cross_check("saccades/" + name, format_saccades_tsv(analysis.samples[i].saccades));
  }
  cross_check("metrics.tsv", metric_rows_tsv(session));
  for (const auto& view : session.config().matrices)
    if (auto tsv = view_tsv(session, view)) cross_check("metrics/" + encode_file_name(view.id) + ".tsv", *tsv);
  return result;
}

}  // namespace gazekit
