// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fail.
#include <httplib.h>

#include <atomic>
#include <bit>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "gazekit/bundle.hpp"
#include "gazekit/detection.hpp"
#include "gazekit/error.hpp"
#include "gazekit/ingest.hpp"
#include "gazekit/matrix.hpp"
#include "gazekit/metrics.hpp"
#include "gazekit/relationship.hpp"
#include "gazekit/server.hpp"
#include "gazekit/text.hpp"
#include "oracles/oracles.hpp"
#include "support/sessions.hpp"

using namespace gazekit;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<LabeledFixation> labelled(const oracle::Labels& l) {
  std::vector<LabeledFixation> out;
  for (std::size_t k = 0; k < l.size(); ++k)
    out.push_back({{k, 0, 0, 100.0 * k, 100.0 * k + 60, 60, {}}, l[k].empty() ? Label{} : Label{l[k]}});
  return out;
}

oracle::Counts counts_of(const TransitionCounts& tc) {
  oracle::Counts c;
  for (std::size_t i = 0; i < tc.symbols.size(); ++i)
    for (std::size_t j = 0; j < tc.symbols.size(); ++j)
      if (tc.at(i, j) != 0) c[{tc.symbols[i], tc.symbols[j]}] = tc.at(i, j);
  return c;
}

// ---------------------------------------------------------------------------

Verdict idt_correctness() {
  Verdict v;
  const std::vector<GazePoint> worked = {{0, 0, 0}, {50, 1, 1}, {100, 2, 0}, {150, 200, 200}};
  const auto w = detect_fixations(worked, {5, 100});
  if (w.size() != 1 || w[0].cx != 1.0 || w[0].cy != 1.0 / 3.0 || w[0].duration != 100 || w[0].t_start != 0)
    v.fail("worked example");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> thr(2, 40), dur(20, 250);
  for (int trial = 0; trial < 1000 && v.ok; ++trial) {
    const auto pts = oracle::random_stream(rng, 5000);
    const DetectionParams p{thr(rng), dur(rng)};
    for (const auto& f : detect_fixations(pts, p)) {
      if (oracle::spread(pts, f.point_span.begin, f.point_span.end - 1) > p.dispersion_threshold)
        v.fail("dispersion above threshold in stream " + std::to_string(trial));
      if (!(f.duration >= p.min_duration) || f.duration != pts[f.point_span.end - 1].t - pts[f.point_span.begin].t)
        v.fail("duration below minimum in stream " + std::to_string(trial));
    }
  }
  return v;
}

Verdict nw_oracle() {
  Verdict v;
  const auto all = oracle::all_strings("ABC", 5);
  std::vector<std::vector<std::string>> symbols;
  for (const auto& s : all) symbols.push_back(oracle::symbols_of(s));
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < all.size() && v.ok; ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      const double got = nw_score(symbols[i], symbols[j]).raw;
      const double want = oracle::best_alignment(all[i], all[j], 0, 0, 1, -1, -1);
      if (got != want) {
        v.fail(all[i] + " vs " + all[j]);
        break;
      }
      ++pairs;
    }
  }
  v.detail = v.ok ? std::to_string(pairs) + " pairs" : v.detail;
  return v;
}

Verdict transition_oracle() {
  Verdict v;
  const std::vector<std::string> alphabet = {"A", "B", "C", ""};
  const std::vector<std::string> symbols = {"A", "B", "C"};
  std::size_t checked = 0;
  for (std::size_t len = 0; len <= 8 && v.ok; ++len) {
    std::vector<std::size_t> digits(len, 0);
    for (;;) {
      oracle::Labels l;
      for (auto d : digits) l.push_back(alphabet[d]);
      const auto lf = labelled(l);
      const auto got = visits(lf);
      const auto want = oracle::visits(l);
      bool same = got.size() == want.size();
      for (std::size_t k = 0; same && k < got.size(); ++k)
        same = got[k].aoi_id == want[k].aoi && got[k].first_fixation == want[k].first &&
               got[k].fixation_count == want[k].count;
      same = same && counts_of(transition_counts(lf, TransitionKind::Direct, symbols)) == oracle::direct(l);
      same = same && counts_of(transition_counts(lf, TransitionKind::Indirect, symbols)) == oracle::indirect(l);
      same = same && counts_of(transition_counts(lf, TransitionKind::Glance, symbols)) == oracle::glance(l);
      for (const auto& f : symbols)
        same = same && counts_of(transition_counts(lf, TransitionKind::Through, symbols, f)) == oracle::through(l, f);
      if (!same) {
        std::string text;
        for (const auto& s : l) text += s.empty() ? "." : s;
        v.fail("sequence " + text);
        break;
      }
      ++checked;
      std::size_t pos = 0;
      while (pos < len && ++digits[pos] == alphabet.size()) digits[pos++] = 0;
      if (pos == len) break;
    }
  }
  if (v.ok) v.detail = std::to_string(checked) + " sequences";
  return v;
}

Verdict haar_arc() {
  Verdict v;
  const std::string dir = std::string(GAZEKIT_SOURCE_DIR) + "/data/haar_demo/";
  Dataset ds;
  ds.samples = {parse_gaze_tsv(slurp(dir + "P01.tsv"), "P01").sample};
  ds.aois = parse_aois_json(slurp(dir + "aois_stage1.json"));
  Session s(ds, {});
  const double want[] = {0.77, 0.88, 0.93};
  std::string seen;
  for (int stage = 1; stage <= 3; ++stage) {
    if (stage > 1) {
      const auto aois = parse_aois_json(slurp(dir + "aois_stage" + std::to_string(stage) + ".json"));
      for (const auto& a : aois) s = edit_aoi_geometry(s, a.id, a.shape);
    }
    const double h = haar(s.analysis().samples[0].labels);
    seen += (stage > 1 ? " " : "") + format_number(h);
    if (h != want[stage - 1]) v.fail("stage " + std::to_string(stage) + " gave " + format_number(h));
  }
  if (s.analysis().samples[0].fixations.size() != 100) v.fail("expected 100 fixations");
  if (v.ok) v.detail = seen;
  return v;
}

Verdict similarity_properties() {
  Verdict v;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> count(0, 9), k(1, 5), scale(1, 1000), len(0, 6), sym(0, 2);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 10000 && v.ok; ++trial) {
    const std::size_t n = k(rng);
    TransitionCounts a, b;
    for (std::size_t i = 0; i < n; ++i) a.symbols.push_back(std::string(1, char('A' + i)));
    b.symbols = a.symbols;
    for (std::size_t i = 0; i < n * n; ++i) {
      a.counts.push_back(count(rng) > 5 ? count(rng) : 0);
      b.counts.push_back(count(rng) > 5 ? count(rng) : 0);
    }
    const double c = transition_cosine(a, b);
    if (!(c >= 0 && c <= 1)) v.fail("cosine out of range");
    if (c != transition_cosine(b, a)) v.fail("cosine not symmetric");
    auto scaled = a;
    const auto factor = static_cast<std::uint64_t>(scale(rng));
    for (auto& e : scaled.counts) e *= factor;
    if (std::abs(transition_cosine(scaled, b) - c) > 1e-12) v.fail("cosine not scale invariant");

    std::vector<Fixation> fs;
    for (int f = 0; f < 1 + trial % 5; ++f) fs.push_back({0, 300 * u(rng), 200 * u(rng), 0, 100, 50 + 400 * u(rng), {}});
    KdeParams p;
    // cells stay narrower than the kernel so a compact kernel always lands on a cell centre
    p.bandwidth = 15 + 30 * u(rng);
    p.grid_width = 32 + trial % 32;
    p.kernel = trial % 2 ? Kernel::Gaussian : Kernel::Epanechnikov;
    const auto g = density_grid(fs, fixation_bounds(fs, 4 * p.bandwidth), p);
    if (std::abs(density_overlap(g, g) - 1.0) > 1e-9) v.fail("overlap(a, a) != 1");

    std::vector<std::string> x, y;
    for (int i = len(rng); i > 0; --i) x.push_back(std::string(1, char('A' + sym(rng))));
    for (int i = len(rng); i > 0; --i) y.push_back(std::string(1, char('A' + sym(rng))));
    if (trial % 3 == 0) y = x;
    if ((nw_score(x, y).normalized == 1.0) != (x == y)) v.fail("normalized nw = 1 does not match identity");
  }
  return v;
}

Verdict seriation_recovery() {
  Verdict v;
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> size(2, 16);
  int recovered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = size(rng);
    const std::size_t cut = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
    std::vector<int> block(n);
    for (std::size_t i = 0; i < n; ++i) block[i] = i < cut ? 0 : 1;
    std::shuffle(block.begin(), block.end(), rng);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("e" + std::to_string(i));
    auto m = make_matrix(Dimension::Sample, Dimension::Sample, "sim", ids, ids, true);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m.at(i, j) = i == j ? 1.0 : block[i] == block[j] ? 0.8 : 0.2;
    const auto r = reorder_global(m);
    if (is_permutation_of(r.row_perm, n) && r.row_perm == r.col_perm && oracle::blocks_contiguous(r.row_perm, block))
      ++recovered;
  }
  v.detail = std::to_string(recovered) + "/100 recovered";
  if (recovered != 100) v.ok = false;
  return v;
}

Verdict kde_properties() {
  Verdict v;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200 && v.ok; ++trial) {
    KdeParams p;
    p.bandwidth = 3 + 25 * u(rng);
    p.grid_width = 16 + trial % 100;
    p.kernel = trial % 2 ? Kernel::Gaussian : Kernel::Epanechnikov;
    p.weighting = trial % 3 ? Weighting::ByDuration : Weighting::Uniform;
    std::vector<Fixation> fs;
    for (int f = 0; f < 1 + trial % 6; ++f) {
      const double dx = 150 * u(rng), y = 400 * u(rng), d = 40 + 500 * u(rng);
      fs.push_back({0, 500 + dx, y, 0, d, d, {}});
      fs.push_back({1, 500 - dx, y, 0, d, d, {}});
    }
    const Rect tight = fixation_bounds(fs, 4 * p.bandwidth);
    const Rect centred{500 - tight.w / 2, tight.y, tight.w, tight.h};
    const auto g = density_grid(fs, centred, p);
    double sum = 0;
    for (double m : g.mass) sum += m;
    if (std::abs(sum - 1.0) > 1e-6) v.fail("total mass " + format_number(sum));
    for (std::size_t iy = 0; iy < g.height; ++iy)
      for (std::size_t ix = 0; ix < g.width; ++ix)
        if (std::abs(g.at(ix, iy) - g.at(g.width - 1 - ix, iy)) > 1e-9) v.fail("mirror asymmetry");
  }
  return v;
}

Verdict scope_algebra() {
  Verdict v;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  using Event = std::pair<std::string, std::size_t>;
  auto events = [](const ScopedView& view) {
    std::vector<Event> out;
    for (const auto& s : view.samples)
      for (const auto& lf : s.labels) out.push_back({s.sample_id, lf.fixation.index});
    return out;
  };
  for (int trial = 0; trial < 500 && v.ok; ++trial) {
    Dataset ds;
    const int n = 1 + trial % 4;
    for (int i = 0; i < n; ++i)
      ds.samples.push_back(synth::sample("S" + std::to_string(i), synth::random_plan(rng, 4 + trial % 30, 500, 500)));
    const int groups = 1 + trial % 4;
    double t = 0;
    for (int k = 0; t < 9000; ++k) {
      const double start = t + std::round(u(rng) * 500), end = start + 20 + std::round(u(rng) * 1200);
      Twi w{"w" + std::to_string(k), "", std::nullopt, start, end, static_cast<Gid>(1 + u(rng) * groups)};
      if (u(rng) < 0.25) w.sample_id = ds.samples[static_cast<std::size_t>(u(rng) * n)].id;
      ds.twis.push_back(w);
      t = end;
    }
    const Session s(ds, {});
    const auto all = events(resolve_scope(s, Scope{}));
    std::size_t total = 0;
    for (const auto& sa : s.analysis().samples) total += sa.fixations.size();
    if (all.size() != total) v.fail("(all, all) is not the identity");

    std::set<Event> in_window;
    for (std::size_t i = 0; i < ds.samples.size(); ++i)
      for (const auto& f : s.analysis().samples[i].fixations)
        for (const auto& w : ds.twis)
          if (w.applies_to(ds.samples[i].id) && w.contains(f.t_start)) in_window.insert({ds.samples[i].id, f.index});

    std::set<Event> joined;
    std::size_t sizes = 0;
    std::set<Gid> present;
    for (const auto& w : ds.twis) present.insert(w.group_id);
    for (Gid g : present) {
      const auto part = events(resolve_scope(s, Scope{Selection::all(), Selection::group(g)}));
      sizes += part.size();
      joined.insert(part.begin(), part.end());
    }
    if (sizes != joined.size()) v.fail("group scopes overlap in trial " + std::to_string(trial));
    if (joined != in_window) v.fail("group scopes do not cover the in-window set in trial " + std::to_string(trial));
  }
  return v;
}

Verdict bundle_round_trip() {
  Verdict v;
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 60 && v.ok; ++trial) {
    const auto s = support::random_session(rng, trial);
    const auto first = export_bundle(s);
    const auto back = import_bundle(first);
    if (!back.warnings.empty()) v.fail("import warned: " + back.warnings.front());
    if (export_bundle(back.session) != first) v.fail("second export differs in trial " + std::to_string(trial));
    for (const auto& view : s.config().matrices) {
      std::optional<MetricMatrix> a, b;
      try {
        a = compute_view(s, view);
      } catch (const Error&) {
      }
      try {
        b = compute_view(back.session, view);
      } catch (const Error&) {
      }
      if (a.has_value() != b.has_value()) {
        v.fail("view " + view.id + " computable on one side only");
        continue;
      }
      if (!a) continue;
      bool same = a->values.size() == b->values.size() && a->row_order == b->row_order && a->col_order == b->col_order;
      for (std::size_t i = 0; same && i < a->values.size(); ++i)
        same = std::bit_cast<std::uint64_t>(a->values[i]) == std::bit_cast<std::uint64_t>(b->values[i]);
      if (!same) v.fail("matrix " + view.id + " differs after import");
    }
  }
  return v;
}

Verdict group_aggregation() {
  Verdict v;
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> dur(10, 1000);
  std::uniform_int_distribution<int> parts(1, 8), len(0, 60), lab(0, 2);
  for (int trial = 0; trial < 2000 && v.ok; ++trial) {
    std::vector<std::vector<double>> groups(parts(rng));
    std::vector<double> pooled;
    std::vector<std::vector<MetricValue>> per;
    for (auto& g : groups) {
      std::vector<LabeledFixation> labels;
      double t = 0;
      for (int k = len(rng); k > 0; --k) {
        const double d = dur(rng);
        const bool hit = lab(rng) != 0;
        labels.push_back({{labels.size(), 0, 0, t, t + d, d, {}}, hit ? Label{"A"} : Label{}});
        if (hit) g.push_back(d);
        t += d + 5;
      }
      pooled.insert(pooled.end(), g.begin(), g.end());
      per.push_back(fixation_aoi_stats(labels, {"A"}, 1e9).values());
    }
    double total = 0;
    for (double d : pooled) total += d;
    const double mean = pooled.empty() ? 0.0 : total / static_cast<double>(pooled.size());
    auto agg = [&](const std::string& id) {
      std::vector<MetricValue> vs;
      for (const auto& p : per)
        for (const auto& m : p)
          if (m.metric_id == id) vs.push_back(m);
      return aggregate_group(vs);
    };
    if (agg("fixation_count").value != static_cast<double>(pooled.size())) v.fail("count differs");
    if (std::abs(agg("total_duration").value - total) > 1e-12 * std::max(1.0, total)) v.fail("total differs");
    if (std::abs(agg("mean_duration").value - mean) > 1e-12 * std::max(1.0, mean)) v.fail("mean differs");
    if (agg("median_duration").value != median(pooled)) v.fail("median differs");
  }
  return v;
}

Verdict api_determinism() {
  Verdict v;
  const auto dir = fs::temp_directory_path() / ("gazekit-acceptance-" + std::to_string(::getpid()));
  ServerOptions o;
  o.port = 0;
  o.data_dir = dir.string();
  Server server(o);
  const int port = server.bind();
  std::thread runner([&] { server.run(); });
  server.wait_until_ready();

  auto client = [&] {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(60, 0);
    return c;
  };
  auto c = client();
  std::vector<std::string> ids;
  std::mt19937_64 rng(11);
  for (int k = 0; k < 2; ++k) {
    const auto created = nlohmann::json::parse(c.Post("/api/sessions")->body);
    const std::string id = created["session_id"];
    ids.push_back(id);
    const std::string sample = k == 0 ? "Alpha" : "Beta";
    const auto gaze = format_gaze_tsv(synth::sample(sample, synth::random_plan(rng, 40 + 20 * k, 600, 400)));
    c.Post(("/api/sessions/" + id + "/samples?sample_id=" + sample).c_str(), gaze, "text/plain");
    c.Put(("/api/sessions/" + id + "/aois").c_str(),
          R"([{"id":"L","shape":{"type":"rect","x":0,"y":0,"w":300,"h":400},"gid":1},
              {"id":"R","shape":{"type":"rect","x":300,"y":0,"w":300,"h":400},"precedence":1,"gid":2}])",
          "application/json");
  }
  const std::vector<std::string> queries = {"",
                                            "/fixations",
                                            "/saccades",
                                            "/labels",
                                            "/timeline",
                                            "/metrics",
                                            "/matrix?rows=aoi&cols=aoi&metric=transitions_direct",
                                            "/matrix?rows=sample&cols=aoi&metric=pct_time&reorder=global",
                                            "/density?bandwidth=20&grid_width=32",
                                            "/bundles?iterations=3",
                                            "/focus-context?aoi=L"};
  // reference bodies, each fetched twice
  std::map<std::string, std::string> reference;
  for (const auto& id : ids) {
    for (const auto& q : queries) {
      const auto path = "/api/sessions/" + id + q;
      auto a = c.Get(path.c_str());
      auto b = c.Get(path.c_str());
      if (!a || !b || a->status != 200) {
        v.fail("GET " + path + " failed");
        continue;
      }
      if (a->body != b->body) v.fail("replay differs for " + path);
      reference[path] = a->body;
    }
  }

  std::atomic<int> sent{0};
  std::mutex mu;
  auto worker = [&](int seed) {
    auto cl = client();
    std::mt19937_64 r(static_cast<std::uint64_t>(seed));
    for (int i = 0; i < 25; ++i) {
      const auto& id = ids[r() % 2];
      const auto& q = queries[r() % queries.size()];
      const auto path = "/api/sessions/" + id + q;
      auto res = cl.Get(path.c_str());
      ++sent;
      std::lock_guard lock(mu);
      if (!res || res->status != 200) {
        v.fail("soak GET " + path + " failed");
        continue;
      }
      if (res->body != reference[path]) v.fail("soak body differs for " + path);
      const std::string other = id == ids[0] ? "Beta" : "Alpha";
      if (res->body.find(other) != std::string::npos) v.fail("foreign sample leaked into " + path);
    }
  };
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) threads.emplace_back(worker, 100 + t);
  for (auto& t : threads) t.join();

  // Edits to one session leave the other's answers untouched.
  c.Put(("/api/sessions/" + ids[1] + "/aois/L").c_str(), R"({"shape":{"type":"rect","x":0,"y":0,"w":10,"h":10}})",
        "application/json");
  for (const auto& q : queries) {
    const auto path = "/api/sessions/" + ids[0] + q;
    auto res = c.Get(path.c_str());
    if (!res || res->body != reference[path]) v.fail("edit on one session changed " + path);
  }
  server.stop();
  runner.join();
  fs::remove_all(dir);
  if (v.ok) v.detail = std::to_string(sent.load()) + " concurrent requests";
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<Verdict()> run;
    double limit_seconds = 0;  // 0: no time budget
  };
  const std::vector<Criterion> criteria = {
      {1, "I-DT correctness", idt_correctness, 5},
      {2, "NW oracle equivalence", nw_oracle, 30},
      {3, "transition/visit oracle equivalence", transition_oracle, 60},
      {4, "HAAR arc reproduction", haar_arc},
      {5, "similarity properties", similarity_properties},
      {6, "seriation block recovery", seriation_recovery, 5},
      {7, "KDE normalization and symmetry", kde_properties},
      {8, "scope algebra", scope_algebra},
      {9, "bundle round trip", bundle_round_trip},
      {10, "group aggregation", group_aggregation},
      {11, "API determinism", api_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) v.fail("over the time budget");
    failures += !v.ok;
    std::cout << (v.ok ? "PASS" : "FAIL") << " " << c.number << " " << c.name << " (" << std::fixed
              << std::setprecision(2) << secs << "s" << (v.detail.empty() ? "" : "; " + v.detail) << ")"
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
