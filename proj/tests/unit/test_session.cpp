#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "gazekit/error.hpp"
#include "gazekit/ingest.hpp"
#include "gazekit/session.hpp"
#include "support/synth.hpp"

using namespace gazekit;

namespace {

std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(GAZEKIT_SOURCE_DIR) + "/" + rel, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::set<std::pair<std::string, double>> events(const ScopedView& v) {
  std::set<std::pair<std::string, double>> out;
  for (const auto& s : v.samples)
    for (const auto& lf : s.labels) out.insert({s.sample_id, lf.fixation.t_start});
  return out;
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoError;
}

// Four samples in two groups; shared windows in two TWI groups plus one per-sample window.
Session four_samples() {
  Dataset ds;
  std::mt19937_64 rng(9);
  for (int i = 0; i < 4; ++i)
    ds.samples.push_back(synth::sample("P" + std::to_string(21 + i), synth::random_plan(rng, 30, 300, 300), i < 2 ? 4 : 5));
  ds.aois = {{"A", "A", Rect{0, 0, 150, 300}, 0, 1}};
  ds.twis = {{"w1", "w1", std::nullopt, 0, 1000, 2},
             {"w2", "w2", std::nullopt, 2500, 4000, 2},
             {"w3", "w3", std::nullopt, 1000, 2000, 3},
             {"w4", "w4", std::string("P21"), 5000, 6000, 3}};
  return Session(ds, {});
}

}  // namespace

TEST_CASE("all/all is the identity") {
  const auto s = four_samples();
  auto v = resolve_scope(s, Scope{});
  REQUIRE(v.samples.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(v.samples[i].full_span);
    CHECK(v.samples[i].labels.size() == s.analysis().samples[i].labels.size());
    CHECK(v.samples[i].saccades.size() == s.analysis().samples[i].saccades.size());
    const auto& pts = s.dataset().samples[i].points;
    CHECK(v.samples[i].duration == pts.back().t - pts.front().t);
  }
}

TEST_CASE("group and window scopes") {
  const auto s = four_samples();
  auto v = resolve_scope(s, Scope{Selection::group(4), Selection::group(2)});
  REQUIRE(v.samples.size() == 2);
  for (const auto& sc : v.samples) {
    CHECK(s.dataset().samples[sc.sample_index].group_id == 4);
    CHECK(sc.duration == 2500);
    CHECK(sc.windows == std::vector<Window>{{0, 1000}, {2500, 4000}});
    for (const auto& lf : sc.labels) {
      const double t = lf.fixation.t_start;
      CHECK(((t >= 0 && t < 1000) || (t >= 2500 && t < 4000)));
    }
    std::size_t want = 0;
    for (const auto& lf : s.analysis().samples[sc.sample_index].labels) {
      const double t = lf.fixation.t_start;
      want += (t >= 0 && t < 1000) || (t >= 2500 && t < 4000);
    }
    CHECK(sc.labels.size() == want);
    std::set<std::size_t> kept;
    for (const auto& lf : sc.labels) kept.insert(lf.fixation.index);
    for (const auto& sac : sc.saccades) {
      CHECK(kept.contains(sac.from_fixation));
      CHECK(kept.contains(sac.to_fixation));
    }
  }
  auto one = resolve_scope(s, Scope{Selection::one("P21"), Selection::all()});
  REQUIRE(one.samples.size() == 1);
  CHECK(one.samples[0].sample_id == "P21");

  auto own = resolve_scope(s, Scope{Selection::all(), Selection::one("w4")});
  CHECK(own.samples[0].duration == 1000);
  CHECK(own.samples[1].windows.empty());
  CHECK(own.samples[1].labels.empty());
}

TEST_CASE("unknown scope targets") {
  const auto s = four_samples();
  CHECK(code_of([&] { resolve_scope(s, Scope{Selection::one("nobody"), Selection::all()}); }) ==
        ErrorCode::UnknownScopeTarget);
  CHECK(code_of([&] { resolve_scope(s, Scope{Selection::group(77), Selection::all()}); }) ==
        ErrorCode::UnknownScopeTarget);
  CHECK(code_of([&] { resolve_scope(s, Scope{Selection::all(), Selection::one("w9")}); }) ==
        ErrorCode::UnknownScopeTarget);
}

TEST_CASE("time fraction") {
  GazeSample g;
  g.id = "P";
  for (double base : {0.0, 400.0, 600.0}) {
    for (double d = 0; d <= 100; d += 20) g.points.push_back({base + d, 50, 50 + base});
    g.points.push_back({base + 120, -1000, -1000});
  }
  g.points.push_back({1000, 900, 900});
  Dataset ds;
  ds.samples = {g};
  const Session s(ds, {});
  REQUIRE(s.analysis().samples[0].fixations.size() == 3);
  auto v = resolve_scope(s);
  CHECK(time_fraction_filter(v, 0.5).samples[0].labels.size() == 2);
  CHECK(time_fraction_filter(v, 0.5).samples[0].saccades.size() == 1);
  CHECK(time_fraction_filter(v, 0.0).samples[0].labels.empty());
  CHECK(time_fraction_filter(v, 0.0).samples[0].saccades.empty());
  CHECK(time_fraction_filter(v, 1.0).samples[0].labels.size() == 3);
  CHECK_THROWS_AS(time_fraction_filter(v, 1.5), Error);
}

TEST_CASE("fraction filter keeps a prefix in time") {
  const auto s = four_samples();
  auto v = resolve_scope(s);
  for (double f = 0; f <= 1.0; f += 0.05) {
    auto cut = time_fraction_filter(v, f);
    for (std::size_t i = 0; i < v.samples.size(); ++i) {
      const auto& all = v.samples[i];
      const double limit = all.span_start + f * (all.span_end - all.span_start);
      std::size_t want = 0;
      for (const auto& lf : all.labels) want += lf.fixation.t_start < limit || f == 1.0;
      CHECK(cut.samples[i].labels.size() == want);
    }
  }
}

TEST_CASE("scope algebra over random TWI partitions") {
  std::mt19937_64 rng(500);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 500; ++trial) {
    Dataset ds;
    const int nsamples = 1 + trial % 4;
    for (int i = 0; i < nsamples; ++i)
      ds.samples.push_back(synth::sample("S" + std::to_string(i), synth::random_plan(rng, 5 + trial % 25, 400, 400)));
    // Disjoint windows cut from [0, 8000), dealt into 1..3 groups.
    const int ngroups = 1 + trial % 3;
    double t = 0;
    int k = 0;
    while (t < 8000) {
      const double gap = std::round(u(rng) * 400), len = 20 + std::round(u(rng) * 900);
      if (t + gap + len > 8000) break;
      Twi w;
      w.id = "t" + std::to_string(k++);
      w.label = w.id;
      w.t_start = t + gap;
      w.t_end = t + gap + len;
      w.group_id = 1 + static_cast<Gid>(u(rng) * ngroups);
      if (u(rng) < 0.2) w.sample_id = ds.samples[static_cast<std::size_t>(u(rng) * nsamples)].id;
      ds.twis.push_back(w);
      t = w.t_end;
    }
    const Session s(ds, {});
    const auto everything = events(resolve_scope(s, Scope{}));
    std::size_t total = 0;
    for (const auto& sa : s.analysis().samples) total += sa.fixations.size();
    REQUIRE(everything.size() == total);

    std::set<std::pair<std::string, double>> in_window;
    for (std::size_t i = 0; i < ds.samples.size(); ++i)
      for (const auto& f : s.analysis().samples[i].fixations)
        for (const auto& w : ds.twis)
          if (w.applies_to(ds.samples[i].id) && w.contains(f.t_start)) in_window.insert({ds.samples[i].id, f.t_start});

    std::set<std::pair<std::string, double>> joined;
    std::size_t sizes = 0;
    std::set<Gid> present;
    for (const auto& w : ds.twis) present.insert(w.group_id);
    for (Gid g : present) {
      const auto part = events(resolve_scope(s, Scope{Selection::all(), Selection::group(g)}));
      sizes += part.size();
      joined.insert(part.begin(), part.end());
    }
    CHECK(sizes == joined.size());  // pairwise disjoint
    CHECK(joined == in_window);
  }
}

TEST_CASE("editing groups") {
  const auto s = four_samples();
  auto moved = edit_groups(s, EntityKind::Sample, {{"P21", 0}});
  CHECK(moved.version() == s.version() + 1);
  auto v = resolve_scope(moved, Scope{Selection::group(4), Selection::all()});
  REQUIRE(v.samples.size() == 1);
  CHECK(v.samples[0].sample_id == "P22");

  auto same = edit_groups(s, EntityKind::Sample, {{"P21", 4}});
  CHECK(same.version() == s.version() + 1);
  CHECK(events(resolve_scope(same, Scope{Selection::group(4), Selection::all()})) ==
        events(resolve_scope(s, Scope{Selection::group(4), Selection::all()})));

  CHECK(code_of([&] { edit_groups(s, EntityKind::Twi, {{"nope", 1}}); }) == ErrorCode::UnknownId);
  CHECK(edit_groups(s, EntityKind::Aoi, {{"A", 9}}).dataset().aois[0].group_id == 9);
  CHECK(s.dataset().aois[0].group_id == 1);  // the old snapshot is untouched
}

TEST_CASE("HAAR refinement arc through geometry edits") {
  auto gaze = parse_gaze_tsv(slurp("data/haar_demo/P01.tsv"), "P01");
  Dataset ds;
  ds.samples = {gaze.sample};
  ds.aois = parse_aois_json(slurp("data/haar_demo/aois_stage1.json"));
  Session s(ds, {});
  REQUIRE(s.analysis().samples[0].fixations.size() == 100);
  CHECK(haar(s.analysis().samples[0].labels) == 0.77);

  auto unchanged = edit_aoi_geometry(s, "content", Rect{0, 0, 510, 355});
  CHECK(haar(unchanged.analysis().samples[0].labels) == 0.77);

  const double want[] = {0.88, 0.93};
  Session current = s;
  for (int stage = 2; stage <= 3; ++stage) {
    const auto aois = parse_aois_json(slurp("data/haar_demo/aois_stage" + std::to_string(stage) + ".json"));
    const auto next = edit_aoi_geometry(current, "refine", aois[1].shape);
    CHECK(next.version() == current.version() + 1);
    CHECK(haar(next.analysis().samples[0].labels) == want[stage - 2]);
    current = next;
  }
  CHECK(haar(s.analysis().samples[0].labels) == 0.77);

  CHECK(code_of([&] { edit_aoi_geometry(s, "refine", Polygon{{{0, 0}, {1, 1}}}); }) == ErrorCode::DegenerateShape);
  CHECK(code_of([&] { edit_aoi_geometry(s, "ghost", Rect{0, 0, 1, 1}); }) == ErrorCode::UnknownId);
}

TEST_CASE("versions and shared lazy analysis") {
  const auto s = four_samples();
  auto cfg = s.config();
  cfg.detection.dispersion_threshold = 40;
  auto t = s.with_config(cfg);
  CHECK(t.version() == s.version() + 1);
  CHECK(t.with_dataset(t.dataset()).version() == t.version() + 1);
  cfg.time_fraction = 2;
  CHECK_THROWS_AS(s.with_config(cfg), Error);

  // concurrent first use sees one result
  const Session fresh = four_samples();
  std::vector<const Analysis*> seen(8);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < seen.size(); ++i) threads.emplace_back([&, i] { seen[i] = &fresh.analysis(); });
  for (auto& th : threads) th.join();
  for (auto* a : seen) CHECK(a == seen[0]);
  const Session copy = fresh;
  CHECK(&copy.analysis() == seen[0]);
}
