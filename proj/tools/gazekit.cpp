// gazekit command line: batch analytics over TSV/JSON inputs and the HTTP server.
#include <glob.h>

#include <CLI11.hpp>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "gazekit/bundle.hpp"
#include "gazekit/error.hpp"
#include "gazekit/ingest.hpp"
#include "gazekit/relationship.hpp"
#include "gazekit/server.hpp"
#include "gazekit/text.hpp"

namespace fs = std::filesystem;
using namespace gazekit;

namespace {

constexpr int kOk = 0;
constexpr int kIoFailure = 1;
constexpr int kValidationFailure = 2;

struct Inputs {
  std::vector<std::string> gaze;
  bool twi_column = false;
  std::string aois;
  std::string twis;
  std::string groups;
  std::string bundle;
  std::string scope;
  std::optional<double> dispersion;
  std::optional<double> min_duration;
};

void add_inputs(CLI::App* cmd, Inputs& in, bool with_scope = true) {
  cmd->add_option("--gaze", in.gaze, "Gaze TSV files or glob patterns; the file stem is the sample id");
  cmd->add_flag("--twi-column", in.twi_column, "Read TWI labels from a 4th gaze column");
  cmd->add_option("--aois", in.aois, "AOI definitions JSON");
  cmd->add_option("--twis", in.twis, "TWI TSV");
  cmd->add_option("--groups", in.groups, "Groups JSON");
  cmd->add_option("--bundle", in.bundle, "Start from an exported bundle zip");
  cmd->add_option("--dispersion", in.dispersion, "I-DT dispersion threshold");
  cmd->add_option("--min-duration", in.min_duration, "I-DT minimum fixation duration (ms)");
  if (with_scope) cmd->add_option("--scope", in.scope, "Scope, e.g. all or samples=group:1;twis=id:task1");
}

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream out;
  out << file.rdbuf();
  return out.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  file << bytes;
  if (!file) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

std::vector<std::string> expand(const std::vector<std::string>& patterns) {
  std::vector<std::string> out;
  for (const auto& pattern : patterns) {
    glob_t g{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    if (rc == 0) {
      for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    }
    globfree(&g);
    if (rc == GLOB_NOMATCH) throw Error(ErrorCode::IoError, "no file matches " + pattern);
    if (rc != 0 && rc != GLOB_NOMATCH) throw Error(ErrorCode::IoError, "cannot expand " + pattern);
  }
  return out;
}

Session load(const Inputs& in) {
  Dataset ds;
  SessionConfig config;
  std::uint64_t version = 0;
  if (!in.bundle.empty()) {
    auto imported = import_bundle(read_file(in.bundle));
    for (const auto& w : imported.warnings) std::cerr << "warning: " << w << "\n";
    ds = imported.session.dataset();
    config = imported.session.config();
    version = imported.session.version();
  }
  IngestOptions opts;
  opts.twi_column = in.twi_column;
  for (const auto& path : expand(in.gaze)) {
    const auto id = fs::path(path).stem().string();
    try {
      auto ingest = parse_gaze_tsv(read_file(path), id, opts);
      ingest.sample.label = id;
      ds.samples.push_back(std::move(ingest.sample));
      for (auto& t : ingest.twis) ds.twis.push_back(std::move(t));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IoError) throw;
      throw Error(e.code(), path + ": " + e.detail(), e.line());
    }
  }
  auto with_path = [](const std::string& path, auto&& parse) {
    try {
      return parse(read_file(path));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IoError) throw;
      throw Error(e.code(), path + ": " + e.detail(), e.line());
    }
  };
  if (!in.aois.empty()) ds.aois = with_path(in.aois, [](const std::string& b) { return parse_aois_json(b); });
  if (!in.twis.empty()) {
    auto twis = with_path(in.twis, [](const std::string& b) { return parse_twi_tsv(b); });
    ds.twis.insert(ds.twis.end(), twis.begin(), twis.end());
  }
  if (!in.groups.empty()) apply_groups(ds, with_path(in.groups, [](const std::string& b) { return parse_groups_json(b); }));
  if (in.dispersion) config.detection.dispersion_threshold = *in.dispersion;
  if (in.min_duration) config.detection.min_duration = *in.min_duration;
  if (!in.scope.empty()) config.scope = parse_scope(in.scope);
  return Session(std::move(ds), std::move(config), version);
}

void emit(const std::string& out, const std::string& bytes) {
  if (out.empty() || out == "-")
    std::cout << bytes;
  else
    write_file(out, bytes);
}

int exit_code_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::MissingFile:
    case ErrorCode::DataDirUnwritable:
    case ErrorCode::PortInUse:
      return kIoFailure;
    default:
      return kValidationFailure;
  }
}

Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gazekit: eye-tracking analytics toolkit"};
  app.require_subcommand(1);

  Inputs in;
  auto* ingest = app.add_subcommand("ingest", "Validate inputs and print a JSON summary");
  add_inputs(ingest, in, false);

  std::string out;
  auto* metrics = app.add_subcommand("metrics", "Write the metric catalogue as metrics.tsv");
  add_inputs(metrics, in);
  metrics->add_option("--out", out, "Output directory")->required();

  std::string metric, rows = "sample", cols = "aoi", reorder = "none";
  auto* matrix = app.add_subcommand("matrix", "Write one relationship or similarity matrix TSV");
  add_inputs(matrix, in);
  matrix->add_option("--metric", metric, "Metric id")->required();
  matrix->add_option("--rows", rows, "Row dimension")->capture_default_str();
  matrix->add_option("--cols", cols, "Column dimension")->capture_default_str();
  matrix->add_option("--reorder", reorder, "global or none")->capture_default_str();
  matrix->add_option("--out", out, "Output file (stdout when omitted)");

  KdeParams kde;
  std::string kernel = "gaussian", weighting = "duration";
  auto* density = app.add_subcommand("density", "Write a KDE grid as <out>.tsv plus <out>.json");
  add_inputs(density, in);
  density->add_option("--bandwidth", kde.bandwidth)->capture_default_str();
  density->add_option("--kernel", kernel)->capture_default_str();
  density->add_option("--weighting", weighting)->capture_default_str();
  density->add_option("--grid-width", kde.grid_width)->capture_default_str();
  density->add_option("--out", out, "Output path prefix")->required();

  auto* exporter = app.add_subcommand("export", "Write a session bundle zip");
  add_inputs(exporter, in);
  exporter->add_option("--out", out, "Bundle path")->required();

  ServerOptions server = server_options_from_env();
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--port", server.port, "Port; 0 picks a free one")->capture_default_str();
  serve->add_option("--host", server.host)->capture_default_str();
  serve->add_option("--data-dir", server.data_dir)->capture_default_str();
  serve->add_option("--static", server.static_dir, "UI asset directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidationFailure;
  }

  try {
    if (*ingest) {
      const auto session = load(in);
      nlohmann::json samples = nlohmann::json::array();
      for (std::size_t i = 0; i < session.dataset().samples.size(); ++i) {
        const auto& s = session.dataset().samples[i];
        samples.push_back({{"id", s.id},
                           {"points", s.points.size()},
                           {"fixations", session.analysis().samples[i].fixations.size()},
                           {"gid", s.group_id}});
      }
      nlohmann::json doc = {{"samples", samples},
                            {"aois", session.dataset().aois.size()},
                            {"twis", session.dataset().twis.size()}};
      std::cout << doc.dump(2) << "\n";
    } else if (*metrics) {
      const auto session = load(in);
      write_file(fs::path(out) / "metrics.tsv", format_metrics_tsv(metric_catalogue(session)));
    } else if (*matrix) {
      const auto session = load(in);
      if (reorder != "global" && reorder != "none") throw Error(ErrorCode::InvalidArgument, "--reorder must be global or none");
      MatrixView view{"cli", parse_dimension(rows), parse_dimension(cols), metric, reorder == "global", {}, {}};
      emit(out, format_matrix_tsv(compute_view(session, view)));
    } else if (*density) {
      const auto session = load(in);
      kde.kernel = parse_kernel(kernel);
      kde.weighting = parse_weighting(weighting);
      std::vector<Fixation> all, scoped;
      for (const auto& sa : session.analysis().samples) all.insert(all.end(), sa.fixations.begin(), sa.fixations.end());
      const auto view = time_fraction_filter(resolve_scope(session), session.config().time_fraction);
      for (const auto& part : view.samples)
        for (const auto& lf : part.labels) scoped.push_back(lf.fixation);
      const auto grid = density_grid(scoped, fixation_bounds(all, 4.0 * kde.bandwidth), kde);
      std::string tsv = "x_cell\ty_cell\tmass\n";
      for (std::size_t iy = 0; iy < grid.height; ++iy)
        for (std::size_t ix = 0; ix < grid.width; ++ix)
          tsv += std::to_string(ix) + '\t' + std::to_string(iy) + '\t' + format_number(grid.at(ix, iy)) + '\n';
      nlohmann::json header = {{"origin", {grid.origin.x, grid.origin.y}},
                               {"cell_size", grid.cell_size},
                               {"width", grid.width},
                               {"height", grid.height},
                               {"kernel", to_string(kde.kernel)},
                               {"bandwidth", kde.bandwidth},
                               {"weighting", to_string(kde.weighting)}};
      write_file(out + ".tsv", tsv);
      write_file(out + ".json", header.dump(2) + "\n");
    } else if (*exporter) {
      write_file(out, export_bundle(load(in)));
    } else if (*serve) {
      Server s(server);
      const int port = s.bind();
      std::cout << "listening on http://" << server.host << ":" << port << std::endl;
      g_server = &s;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      s.run();
      g_server = nullptr;
    }
  } catch (const Error& e) {
    std::cerr << "gazekit: " << e.what() << "\n";
    return exit_code_of(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "gazekit: " << e.what() << "\n";
    return kIoFailure;
  }
  return kOk;
}
