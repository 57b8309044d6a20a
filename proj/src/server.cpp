#include "gazekit/server.hpp"

#include <httplib.h>
#include <sys/socket.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <shared_mutex>

#include "gazekit/bundle.hpp"
#include "gazekit/error.hpp"
#include "gazekit/ingest.hpp"
#include "gazekit/matrix.hpp"
#include "gazekit/relationship.hpp"
#include "gazekit/text.hpp"

namespace gazekit {

using nlohmann::json;

ServerOptions server_options_from_env() {
  ServerOptions options;
  if (const char* port = std::getenv("GAZEKIT_PORT")) {
    if (auto value = parse_number(port); value && *value >= 0 && *value <= 65535) options.port = static_cast<int>(*value);
  }
  if (const char* dir = std::getenv("GAZEKIT_DATA_DIR"); dir && *dir) options.data_dir = dir;
  return options;
}

namespace {

constexpr const char* kServiceVersion = "0.1.0";
constexpr const char* kJson = "application/json";

struct Reply {
  int status = 200;
  std::string body;
  std::string content_type = kJson;
};

Reply json_reply(const json& doc, int status = 200) { return {status, doc.dump() + "\n", kJson}; }

int status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownId:
    case ErrorCode::UnknownScopeTarget:
      return 404;
    case ErrorCode::EmptySelection:
      return 422;
    case ErrorCode::PortInUse:
    case ErrorCode::DataDirUnwritable:
    case ErrorCode::IoError:
      return 500;
    default:
      return 400;
  }
}

Reply error_reply(ErrorCode code, const std::string& message) {
  return json_reply({{"error", to_string(code)}, {"message", message}}, status_of(code));
}

// One analysis session: edits serialize on `write`, readers take the current
// immutable snapshot and never wait for each other.
struct Entry {
  std::mutex write;
  mutable std::shared_mutex snap_mu;
  std::shared_ptr<const Session> current = std::make_shared<const Session>();

  std::mutex cache_mu;
  std::uint64_t cache_version = 0;
  std::map<std::string, Reply> cache;

  std::shared_ptr<const Session> snapshot() const {
    std::shared_lock lock(snap_mu);
    return current;
  }
};

class SessionStore {
 public:
  std::pair<std::string, std::shared_ptr<Entry>> create() {
    std::unique_lock lock(mu_);
    auto id = "s" + std::to_string(++counter_);
    auto entry = std::make_shared<Entry>();
    sessions_[id] = entry;
    return {id, entry};
  }
  std::shared_ptr<Entry> find(const std::string& id) const {
    std::shared_lock lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(ErrorCode::UnknownId, "session '" + id + "'");
    return it->second;
  }
  std::vector<std::string> ids() const {
    std::shared_lock lock(mu_);
    std::vector<std::string> out;
    for (const auto& [id, e] : sessions_) out.push_back(id);
    return out;
  }

 private:
  mutable std::shared_mutex mu_;
  std::uint64_t counter_ = 0;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

std::string param(const httplib::Request& req, const std::string& key, const std::string& fallback = "") {
  return req.has_param(key) ? req.get_param_value(key) : fallback;
}

double number_param(const httplib::Request& req, const std::string& key, double fallback) {
  if (!req.has_param(key)) return fallback;
  auto value = parse_number(req.get_param_value(key));
  if (!value) throw Error(ErrorCode::InvalidArgument, "query parameter '" + key + "' must be a number");
  return *value;
}

std::string cache_key(const httplib::Request& req) {
  std::string key = req.path;
  // multimap iteration is ordered by name, so equal queries give equal keys
  for (const auto& [k, v] : req.params) key += "&" + k + "=" + v;
  return key;
}

json parse_json_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedJson, e.what());
  }
}

Scope scope_param(const httplib::Request& req, const Session& s) {
  return req.has_param("scope") ? parse_scope(req.get_param_value("scope")) : s.config().scope;
}

ScopedView event_view(const httplib::Request& req, const Session& s) {
  const double fraction = number_param(req, "fraction", s.config().time_fraction);
  return time_fraction_filter(resolve_scope(s, scope_param(req, s)), fraction);
}

json label_json(const Label& label) { return label ? json(*label) : json(nullptr); }

json fixation_json(const LabeledFixation& lf) {
  const auto& f = lf.fixation;
  return {{"index", f.index},     {"cx", f.cx},         {"cy", f.cy},
          {"t_start", f.t_start}, {"t_end", f.t_end},   {"duration", f.duration},
          {"aoi_id", label_json(lf.aoi_id)}};
}

json saccade_json(const Saccade& s) {
  return {{"from", s.from_fixation}, {"to", s.to_fixation}, {"length", s.length},
          {"duration", s.duration},  {"angle", s.angle}};
}

json metric_json(const MetricValue& v) {
  return {{"metric_id", v.metric_id}, {"value", v.value}, {"unit", to_string(v.unit)}, {"support", v.support}};
}

json summary_json(const std::string& id, const Session& s) {
  json samples = json::array();
  for (const auto& sample : s.dataset().samples)
    samples.push_back({{"id", sample.id}, {"label", sample.label}, {"gid", sample.group_id}, {"points", sample.points.size()}});
  json twis = json::array();
  for (const auto& t : s.dataset().twis) {
    twis.push_back({{"id", t.id},
                    {"label", t.label},
                    {"sample_id", t.sample_id ? json(*t.sample_id) : json(nullptr)},
                    {"t_start", t.t_start},
                    {"t_end", t.t_end},
                    {"gid", t.group_id}});
  }
  return {{"session_id", id},
          {"version", s.version()},
          {"samples", samples},
          {"aois", json::parse(format_aois_json(s.dataset().aois))},
          {"twis", twis},
          {"config", config_to_json(s.config())}};
}

json matrix_json(const MetricMatrix& m) {
  json values = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.display_at(r, c));
    values.push_back(row);
  }
  return {{"rows", to_string(m.row_dim)}, {"cols", to_string(m.col_dim)}, {"metric", m.metric_id},
          {"symmetric", m.symmetric},     {"row_ids", m.display_row_ids()},  {"col_ids", m.display_col_ids()},
          {"values", values}};
}

std::map<std::string, Gid> aoi_gids(const Dataset& ds) {
  std::map<std::string, Gid> out;
  for (const auto& a : ds.aois) out[a.id] = a.group_id;
  return out;
}

}  // namespace

struct Server::Impl {
  ServerOptions options;
  httplib::Server http;
  SessionStore store;
  int bound_port = -1;

  using ReadHandler = std::function<Reply(const Session&, const httplib::Request&)>;
  using EditHandler = std::function<Session(const Session&, const httplib::Request&)>;

  static void send(httplib::Response& res, const Reply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
  }

  template <typename F>
  static void guarded(httplib::Response& res, F&& body) {
    try {
      send(res, body());
    } catch (const Error& e) {
      send(res, error_reply(e.code(), e.what()));
    } catch (const json::exception& e) {
      send(res, error_reply(ErrorCode::MalformedJson, e.what()));
    } catch (const std::exception& e) {
      send(res, json_reply({{"error", "Internal"}, {"message", e.what()}}, 500));
    }
  }

  // GET over the current snapshot, cached by (version, path, query).
  void get(const std::string& suffix, ReadHandler handler) {
    http.Get("/api/sessions/([^/]+)" + suffix, [this, handler](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        auto entry = store.find(req.matches[1]);
        auto snapshot = entry->snapshot();
        const auto key = cache_key(req);
        {
          std::lock_guard lock(entry->cache_mu);
          if (entry->cache_version == snapshot->version()) {
            if (auto it = entry->cache.find(key); it != entry->cache.end()) return it->second;
          }
        }
        Reply reply = handler(*snapshot, req);
        if (reply.status == 200) {
          std::lock_guard lock(entry->cache_mu);
          if (entry->cache_version != snapshot->version() && snapshot->version() > entry->cache_version) {
            entry->cache.clear();
            entry->cache_version = snapshot->version();
          }
          if (entry->cache_version == snapshot->version()) entry->cache.emplace(key, reply);
        }
        return reply;
      });
    });
  }

  // Edit producing a new snapshot; replies with the new version.
  void edit(const std::string& method, const std::string& suffix, EditHandler handler) {
    auto route = [this, handler](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        auto entry = store.find(req.matches[1]);
        std::lock_guard writer(entry->write);
        auto next = std::make_shared<const Session>(handler(*entry->snapshot(), req));
        {
          std::unique_lock lock(entry->snap_mu);
          entry->current = next;
        }
        return json_reply({{"session_id", std::string(req.matches[1])}, {"version", next->version()}});
      });
    };
    const auto pattern = "/api/sessions/([^/]+)" + suffix;
    if (method == "PUT")
      http.Put(pattern, route);
    else
      http.Post(pattern, route);
  }

  void routes();
};

void Server::Impl::routes() {
  http.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
    send(res, json_reply({{"status", "ok"}, {"version", kServiceVersion}}));
  });

  http.Post("/api/sessions", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      auto [id, entry] = store.create();
      return json_reply({{"session_id", id}, {"version", entry->snapshot()->version()}});
    });
  });

  http.Get("/api/sessions", [this](const httplib::Request&, httplib::Response& res) {
    send(res, json_reply({{"sessions", store.ids()}}));
  });

  get("", [](const Session& s, const httplib::Request& req) { return json_reply(summary_json(req.matches[1], s)); });

  edit("POST", "/samples", [](const Session& s, const httplib::Request& req) {
    IngestOptions opts;
    opts.twi_column = param(req, "twi_column") == "1" || param(req, "twi_column") == "true";
    std::vector<std::pair<std::string, std::string>> uploads;  // sample id, bytes
    if (req.is_multipart_form_data()) {
      for (const auto& [field, file] : req.files) {
        std::string id = file.filename.empty() ? field : std::filesystem::path(file.filename).stem().string();
        if (req.files.size() == 1 && req.has_param("sample_id")) id = req.get_param_value("sample_id");
        uploads.emplace_back(id, file.content);
      }
    } else {
      if (!req.has_param("sample_id"))
        throw Error(ErrorCode::InvalidArgument, "raw uploads need the sample_id query parameter");
      uploads.emplace_back(req.get_param_value("sample_id"), req.body);
    }
    if (uploads.empty()) throw Error(ErrorCode::InvalidArgument, "no sample uploaded");
    Dataset ds = s.dataset();
    for (auto& [id, bytes] : uploads) {
      auto ingest = parse_gaze_tsv(bytes, id, opts);
      ingest.sample.label = param(req, "label", id);
      auto it = std::find_if(ds.samples.begin(), ds.samples.end(), [&](const GazeSample& g) { return g.id == id; });
      if (it != ds.samples.end()) {
        ingest.sample.group_id = it->group_id;
        *it = std::move(ingest.sample);
        std::erase_if(ds.twis, [&](const Twi& t) { return t.sample_id == id && t.id.starts_with(id + ":"); });
      } else {
        ds.samples.push_back(std::move(ingest.sample));
      }
      for (auto& t : ingest.twis) ds.twis.push_back(std::move(t));
    }
    return s.with_dataset(std::move(ds));
  });

  edit("PUT", "/aois", [](const Session& s, const httplib::Request& req) {
    Dataset ds = s.dataset();
    ds.aois = parse_aois_json(req.body);
    return s.with_dataset(std::move(ds));
  });

  edit("PUT", "/aois/([^/]+)", [](const Session& s, const httplib::Request& req) {
    auto doc = parse_json_body(req);
    if (!doc.is_object() || !doc.contains("shape"))
      throw Error(ErrorCode::InvalidArgument, "body must be {\"shape\": ...}");
    json wrapped = json::array({{{"id", std::string(req.matches[2])}, {"shape", doc["shape"]}}});
    const auto parsed = parse_aois_json(wrapped.dump());
    return edit_aoi_geometry(s, req.matches[2], parsed.front().shape);
  });

  edit("PUT", "/twis", [](const Session& s, const httplib::Request& req) {
    Dataset ds = s.dataset();
    ds.twis = parse_twi_tsv(req.body);
    return s.with_dataset(std::move(ds));
  });

  edit("PUT", "/groups", [](const Session& s, const httplib::Request& req) {
    const auto table = parse_groups_json(req.body);
    Session next = edit_groups(s, EntityKind::Sample, table.samples);
    next = edit_groups(next, EntityKind::Aoi, table.aois);
    next = edit_groups(next, EntityKind::Twi, table.twis);
    // one version step for the whole request
    return s.with_dataset(next.dataset());
  });

  edit("PUT", "/params", [](const Session& s, const httplib::Request& req) {
    return s.with_config(merge_config_json(parse_json_body(req), s.config()));
  });

  edit("PUT", "/scope", [](const Session& s, const httplib::Request& req) {
    SessionConfig config = s.config();
    auto doc = parse_json_body(req);
    json wrapped = {{"scope", doc}};
    if (doc.is_object() && doc.contains("time_fraction")) wrapped["time_fraction"] = doc["time_fraction"];
    if (doc.is_object()) wrapped["scope"].erase("time_fraction");
    config = merge_config_json(wrapped, config);
    resolve_scope(Session(s.dataset(), config, s.version()));  // reject unknown targets now
    return s.with_config(config);
  });

  edit("POST", "/import", [](const Session& s, const httplib::Request& req) {
    auto imported = import_bundle(req.body).session;
    const auto version = std::max(imported.version(), s.version() + 1);
    return Session(imported.dataset(), imported.config(), version);
  });

  http.Post("/api/sessions/([^/]+)/save", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto snapshot = store.find(req.matches[1])->snapshot();
      const auto path = std::filesystem::path(options.data_dir) / (encode_file_name(req.matches[1].str()) + ".zip");
      std::ofstream out(path, std::ios::binary);
      out << export_bundle(*snapshot);
      if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
      return json_reply({{"path", path.string()}, {"version", snapshot->version()}});
    });
  });

  get("/fixations", [](const Session& s, const httplib::Request& req) {
    const auto view = event_view(req, s);
    json samples = json::array();
    for (const auto& part : view.samples) {
      json fixations = json::array();
      for (const auto& lf : part.labels) fixations.push_back(fixation_json(lf));
      samples.push_back({{"id", part.sample_id}, {"gid", part.gid}, {"fixations", fixations}});
    }
    return json_reply({{"version", s.version()}, {"scope", format_scope(view.scope)}, {"samples", samples}});
  });

  get("/saccades", [](const Session& s, const httplib::Request& req) {
    const auto view = event_view(req, s);
    json samples = json::array();
    for (const auto& part : view.samples) {
      json saccades = json::array();
      for (const auto& sc : part.saccades) saccades.push_back(saccade_json(sc));
      samples.push_back({{"id", part.sample_id}, {"gid", part.gid}, {"saccades", saccades}});
    }
    return json_reply({{"version", s.version()}, {"scope", format_scope(view.scope)}, {"samples", samples}});
  });

  get("/labels", [](const Session& s, const httplib::Request& req) {
    const auto view = resolve_scope(s, scope_param(req, s));
    const auto gids = aoi_gids(s.dataset());
    json samples = json::array();
    for (const auto& part : view.samples) {
      json labels = json::array();
      for (const auto& lf : part.labels) {
        labels.push_back({{"index", lf.fixation.index},
                          {"aoi_id", label_json(lf.aoi_id)},
                          {"aoi_gid", lf.aoi_id ? json(gids.at(*lf.aoi_id)) : json(nullptr)}});
      }
      json visit_list = json::array();
      for (const auto& seg : part.segments) {
        auto span = std::span<const LabeledFixation>(part.labels).subspan(seg.begin, seg.size());
        for (const auto& v : visits(span)) {
          visit_list.push_back({{"aoi_id", v.aoi_id},
                                {"first_fixation", v.first_fixation},
                                {"last_fixation", v.last_fixation},
                                {"fixation_count", v.fixation_count},
                                {"duration", v.duration}});
        }
      }
      samples.push_back({{"id", part.sample_id},
                         {"gid", part.gid},
                         {"haar", part.labels.empty() ? 0.0 : haar(part.labels)},
                         {"labels", labels},
                         {"visits", visit_list}});
    }
    return json_reply({{"version", s.version()}, {"scope", format_scope(view.scope)}, {"samples", samples}});
  });

  get("/metrics", [](const Session& s, const httplib::Request& req) {
    const auto rows = metric_catalogue(s);
    if (param(req, "format") == "tsv") return Reply{200, format_metrics_tsv(rows), "text/tab-separated-values"};
    json list = json::array();
    for (const auto& r : rows) {
      auto item = metric_json(r.metric);
      item["scope"] = r.scope;
      item["entity"] = r.entity;
      list.push_back(item);
    }
    return json_reply({{"version", s.version()}, {"metrics", list}});
  });

  get("/matrix", [](const Session& s, const httplib::Request& req) {
    const auto rows = parse_dimension(param(req, "rows", "sample"));
    const auto cols = parse_dimension(param(req, "cols", "aoi"));
    const auto metric = param(req, "metric", "fixation_count");
    const auto reorder = param(req, "reorder", "none");
    if (reorder != "global" && reorder != "none")
      throw Error(ErrorCode::InvalidArgument, "reorder must be global or none");
    auto m = relationship_matrix(s, rows, cols, metric, scope_param(req, s));
    if (reorder == "global" && m.rows() > 0 && m.cols() > 0) apply(m, reorder_global(m));
    if (param(req, "format") == "tsv") return Reply{200, format_matrix_tsv(m), "text/tab-separated-values"};
    auto doc = matrix_json(m);
    doc["version"] = s.version();
    return json_reply(doc);
  });

  get("/density", [](const Session& s, const httplib::Request& req) {
    KdeParams kde = s.config().kde;
    kde.bandwidth = number_param(req, "bandwidth", kde.bandwidth);
    if (req.has_param("kernel")) kde.kernel = parse_kernel(req.get_param_value("kernel"));
    if (req.has_param("weighting")) kde.weighting = parse_weighting(req.get_param_value("weighting"));
    const double width = number_param(req, "grid_width", static_cast<double>(kde.grid_width));
    if (!(width >= 0) || width != static_cast<double>(static_cast<std::size_t>(width)))
      throw Error(ErrorCode::InvalidArgument, "grid_width must be a non-negative integer");
    kde.grid_width = static_cast<std::size_t>(width);
    check(kde);

    std::vector<Fixation> all;
    for (const auto& sa : s.analysis().samples) all.insert(all.end(), sa.fixations.begin(), sa.fixations.end());
    const Rect bounds = fixation_bounds(all, 4.0 * kde.bandwidth);
    std::vector<Fixation> scoped;
    for (const auto& part : event_view(req, s).samples)
      for (const auto& lf : part.labels) scoped.push_back(lf.fixation);
    const auto grid = density_grid(scoped, bounds, kde);
    return json_reply({{"version", s.version()},
                       {"origin", {grid.origin.x, grid.origin.y}},
                       {"cell_size", grid.cell_size},
                       {"width", grid.width},
                       {"height", grid.height},
                       {"mass", grid.mass}});
  });

  get("/bundles", [](const Session& s, const httplib::Request& req) {
    BundleParams params = s.config().bundle;
    params.iterations = static_cast<std::size_t>(number_param(req, "iterations", static_cast<double>(params.iterations)));
    params.kernel_bandwidth = number_param(req, "kernel_bandwidth", params.kernel_bandwidth);
    params.smoothing = number_param(req, "smoothing", params.smoothing);
    params.direction_split_deg = number_param(req, "direction_split_deg", params.direction_split_deg);
    std::vector<SaccadeSegment> segments;
    for (const auto& part : event_view(req, s).samples) {
      const auto fixations = part.fixations();
      const auto segs = saccade_segments(fixations, part.saccades);
      segments.insert(segments.end(), segs.begin(), segs.end());
    }
    json lines = json::array();
    for (const auto& line : bundle_saccades(segments, params)) {
      json points = json::array();
      for (const auto& p : line) points.push_back({p.x, p.y});
      lines.push_back(points);
    }
    return json_reply({{"version", s.version()}, {"lines", lines}});
  });

  get("/timeline", [](const Session& s, const httplib::Request& req) {
    const auto view = event_view(req, s);
    const auto gids = aoi_gids(s.dataset());
    json samples = json::array();
    for (const auto& part : view.samples) {
      json segments = json::array();
      for (const auto& seg : part.segments) {
        for (std::size_t i = seg.begin; i < seg.end;) {
          std::size_t j = i;
          while (j + 1 < seg.end && part.labels[j + 1].aoi_id == part.labels[i].aoi_id) ++j;
          if (const auto& aoi = part.labels[i].aoi_id) {
            segments.push_back({{"t_start", part.labels[i].fixation.t_start},
                                {"t_end", part.labels[j].fixation.t_end},
                                {"aoi_id", *aoi},
                                {"gid", gids.at(*aoi)}});
          }
          i = j + 1;
        }
      }
      json windows = json::array();
      for (const auto& w : part.windows) windows.push_back({w.start, w.end});
      samples.push_back({{"id", part.sample_id}, {"gid", part.gid}, {"windows", windows}, {"segments", segments}});
    }
    return json_reply({{"version", s.version()}, {"scope", format_scope(view.scope)}, {"samples", samples}});
  });

  get("/focus-context", [](const Session& s, const httplib::Request& req) {
    if (!req.has_param("aoi")) throw Error(ErrorCode::InvalidArgument, "missing aoi query parameter");
    const auto focus = req.get_param_value("aoi");
    const auto view = resolve_scope(s, scope_param(req, s));
    json samples = json::array();
    for (const auto& part : view.samples) {
      json classes = json::array();
      for (const auto& seg : part.segments) {
        auto span = std::span<const LabeledFixation>(part.labels).subspan(seg.begin, seg.size());
        const auto cls = focus_context(span, focus, s.dataset().aois);
        for (std::size_t i = 0; i < span.size(); ++i)
          classes.push_back({{"index", span[i].fixation.index}, {"class", to_string(cls[i])}});
      }
      if (part.segments.empty()) focus_context({}, focus, s.dataset().aois);
      samples.push_back({{"id", part.sample_id}, {"fixations", classes}});
    }
    return json_reply({{"version", s.version()}, {"aoi", focus}, {"samples", samples}});
  });

  get("/export", [](const Session& s, const httplib::Request&) {
    return Reply{200, export_bundle(s), "application/zip"};
  });
}

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  namespace fs = std::filesystem;
  const fs::path dir = impl_->options.data_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  const auto probe = dir / ".gazekit-write-test";
  {
    std::ofstream out(probe);
    out << "ok";
    if (ec || !out) throw Error(ErrorCode::DataDirUnwritable, dir.string());
  }
  fs::remove(probe, ec);

  auto& http = impl_->http;
  http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  http.set_payload_max_length(std::size_t{1} << 30);
  impl_->routes();
  if (!impl_->options.static_dir.empty() && fs::is_directory(impl_->options.static_dir))
    http.set_mount_point("/", impl_->options.static_dir);
}

Server::~Server() { stop(); }

int Server::bind() {
  auto& o = impl_->options;
  if (o.port == 0) {
    impl_->bound_port = impl_->http.bind_to_any_port(o.host);
    if (impl_->bound_port < 0) throw Error(ErrorCode::PortInUse, o.host + ":0");
  } else {
    if (!impl_->http.bind_to_port(o.host, o.port))
      throw Error(ErrorCode::PortInUse, o.host + ":" + std::to_string(o.port));
    impl_->bound_port = o.port;
  }
  return impl_->bound_port;
}

void Server::run() { impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace gazekit
