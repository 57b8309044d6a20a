#include "gazekit/relationship.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "gazekit/error.hpp"
#include "gazekit/matrix.hpp"
#include "gazekit/text.hpp"

namespace gazekit {

namespace {

// A matrix axis entry: the scoped event sets it stands for.
struct Entity {
  std::string id;
  std::vector<std::size_t> members;  // sample indices
  std::vector<ScopedSample> parts;
};

bool is_sample_dim(Dimension d) { return d == Dimension::Sample || d == Dimension::SampleGroup; }
bool is_twi_dim(Dimension d) { return d == Dimension::Twi || d == Dimension::TwiGroup; }
bool is_aoi_dim(Dimension d) { return d == Dimension::Aoi || d == Dimension::AoiGroup; }

[[noreturn]] void unsupported(Dimension rows, Dimension cols, const std::string& metric) {
  throw Error(ErrorCode::UnsupportedCombination, std::string(to_string(rows)) + " x " + std::string(to_string(cols)) +
                                                     " with metric '" + metric + "'");
}

std::vector<Gid> nonzero_gids(const std::vector<Gid>& gids) {
  std::set<Gid> set(gids.begin(), gids.end());
  set.erase(kUngrouped);
  return {set.begin(), set.end()};
}

std::vector<Entity> sample_entities(const Session& session, const Scope& scope, bool grouped,
                                    const std::optional<std::vector<const Twi*>>& twis) {
  const auto& ds = session.dataset();
  const auto indices = select_samples(ds, scope.samples);
  std::vector<Entity> out;
  if (!grouped) {
    for (auto i : indices) out.push_back({ds.samples[i].id, {i}, {scope_sample(session, i, twis)}});
    return out;
  }
  std::vector<Gid> gids;
  for (auto i : indices) gids.push_back(ds.samples[i].group_id);
  for (Gid g : nonzero_gids(gids)) {
    Entity e{std::to_string(g), {}, {}};
    for (auto i : indices) {
      if (ds.samples[i].group_id != g) continue;
      e.members.push_back(i);
      e.parts.push_back(scope_sample(session, i, twis));
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<const Twi*> scoped_twi_list(const Dataset& ds, const Selection& selection) {
  auto selected = select_twis(ds, selection);
  if (selected) return *selected;
  std::vector<const Twi*> all;
  for (const auto& t : ds.twis) all.push_back(&t);
  return all;
}

// TWI (group) entities over the scoped samples, each part restricted to the entity's windows.
std::vector<Entity> twi_entities(const Session& session, const Scope& scope, bool grouped) {
  const auto& ds = session.dataset();
  const auto indices = select_samples(ds, scope.samples);
  const auto twis = scoped_twi_list(ds, scope.twis);

  std::vector<std::pair<std::string, std::vector<const Twi*>>> axis;
  if (!grouped) {
    for (const Twi* t : twis) axis.push_back({t->id, {t}});
  } else {
    std::vector<Gid> gids;
    for (const Twi* t : twis) gids.push_back(t->group_id);
    for (Gid g : nonzero_gids(gids)) {
      std::vector<const Twi*> members;
      for (const Twi* t : twis)
        if (t->group_id == g) members.push_back(t);
      axis.push_back({std::to_string(g), members});
    }
  }

  std::vector<Entity> out;
  for (auto& [id, windows] : axis) {
    Entity e{id, {}, {}};
    for (auto i : indices) {
      const bool applies = std::any_of(windows.begin(), windows.end(),
                                       [&](const Twi* t) { return t->applies_to(ds.samples[i].id); });
      if (!applies) continue;
      e.members.push_back(i);
      e.parts.push_back(scope_sample(session, i, windows));
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Entity> row_entities(const Session& session, Dimension dim, const Scope& scope) {
  if (is_sample_dim(dim))
    return sample_entities(session, scope, dim == Dimension::SampleGroup, select_twis(session.dataset(), scope.twis));
  return twi_entities(session, scope, dim == Dimension::TwiGroup);
}

struct AoiTarget {
  std::string id;
  std::set<std::string> aoi_ids;
};

std::vector<AoiTarget> aoi_targets(const Dataset& ds, bool grouped) {
  std::vector<AoiTarget> out;
  if (!grouped) {
    for (const auto& a : ds.aois) out.push_back({a.id, {a.id}});
    return out;
  }
  std::vector<Gid> gids;
  for (const auto& a : ds.aois) gids.push_back(a.group_id);
  for (Gid g : nonzero_gids(gids)) {
    AoiTarget t{std::to_string(g), {}};
    for (const auto& a : ds.aois)
      if (a.group_id == g) t.aoi_ids.insert(a.id);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::string> alphabet(const Dataset& ds, bool grouped) {
  std::vector<std::string> out;
  for (const auto& t : aoi_targets(ds, grouped)) out.push_back(t.id);
  return out;
}

// Labels of one part with an unlabelled marker between windows, so visits never
// span two windows. The marker has zero duration and matches no target.
std::vector<LabeledFixation> with_window_breaks(const ScopedSample& part) {
  std::vector<LabeledFixation> out;
  for (std::size_t s = 0; s < part.segments.size(); ++s) {
    if (s > 0) {
      Fixation marker;
      marker.index = std::numeric_limits<std::size_t>::max();
      out.push_back({marker, std::nullopt});
    }
    const auto& seg = part.segments[s];
    out.insert(out.end(), part.labels.begin() + static_cast<std::ptrdiff_t>(seg.begin),
               part.labels.begin() + static_cast<std::ptrdiff_t>(seg.end));
  }
  return out;
}

std::span<const LabeledFixation> segment_span(const ScopedSample& part, const IndexRange& seg) {
  return std::span<const LabeledFixation>(part.labels).subspan(seg.begin, seg.size());
}

const std::set<std::string> kAoiMetrics = {"fixation_count", "total_duration", "mean_duration", "median_duration",
                                           "pct_time",       "visit_count",    "mean_visit_duration", "haar"};
const std::set<std::string> kSimilarityMetrics = {"nw", "nw_group", "transition_cosine", "transition_cosine_group",
                                                  "density_overlap"};
const std::set<std::string> kWindowMetrics = {"fixation_count",      "total_duration",      "mean_duration",
                                              "median_duration",     "saccade_count",       "mean_saccade_length",
                                              "median_saccade_length", "mean_saccade_duration"};

MetricValue pick(const std::vector<MetricValue>& values, const std::string& id) {
  for (const auto& v : values)
    if (v.metric_id == id) return v;
  throw Error(ErrorCode::UnsupportedCombination, "metric '" + id + "'");
}

double combine(const std::vector<MetricValue>& per_part) {
  if (per_part.empty()) return 0.0;
  return aggregate_group(per_part).value;
}

MetricValue haar_value(const ScopedSample& part) {
  MetricValue v{"haar", 0.0, Unit::Fraction, Aggregation::Fraction, part.labels.size(), {}};
  if (!part.labels.empty()) v.value = haar(part.labels);
  return v;
}

double denominator(const ScopedSample& part, PctDenominator kind) {
  if (kind == PctDenominator::ScopedSpan) return part.duration;
  double total = 0.0;
  for (const auto& lf : part.labels) total += lf.fixation.duration;
  return total;
}

MetricMatrix aoi_metric_matrix(const Session& session, Dimension row_dim, Dimension col_dim, const std::string& metric,
                               const Scope& scope) {
  const auto rows = row_entities(session, row_dim, scope);
  const auto cols = aoi_targets(session.dataset(), col_dim == Dimension::AoiGroup);
  std::vector<std::string> row_ids, col_ids;
  for (const auto& r : rows) row_ids.push_back(r.id);
  for (const auto& c : cols) col_ids.push_back(c.id);
  auto m = make_matrix(row_dim, col_dim, metric, row_ids, col_ids, false);

  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (metric == "haar") {
      std::vector<MetricValue> parts;
      for (const auto& part : rows[r].parts) parts.push_back(haar_value(part));
      const double value = combine(parts);
      for (std::size_t c = 0; c < cols.size(); ++c) m.at(r, c) = value;
      continue;
    }
    std::vector<std::vector<LabeledFixation>> broken;
    for (const auto& part : rows[r].parts) broken.push_back(with_window_breaks(part));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      std::vector<MetricValue> parts;
      for (std::size_t p = 0; p < rows[r].parts.size(); ++p) {
        const auto& part = rows[r].parts[p];
        auto stats =
            fixation_aoi_stats(broken[p], cols[c].aoi_ids, denominator(part, session.config().pct_denominator));
        parts.push_back(pick(stats.values(), metric));
      }
      m.at(r, c) = combine(parts);
    }
  }
  return m;
}

MetricMatrix transition_matrix(const Session& session, Dimension dim, const std::string& metric, const Scope& scope) {
  const auto& ds = session.dataset();
  const bool grouped = dim == Dimension::AoiGroup;
  TransitionKind kind;
  std::optional<std::string> focus;
  if (metric == "transitions_direct") {
    kind = TransitionKind::Direct;
  } else if (metric == "transitions_indirect") {
    kind = TransitionKind::Indirect;
  } else if (metric == "transitions_glance") {
    kind = TransitionKind::Glance;
  } else if (metric.starts_with("transitions_through:")) {
    kind = TransitionKind::Through;
    focus = metric.substr(std::string("transitions_through:").size());
  } else {
    unsupported(dim, dim, metric);
  }

  const auto symbols = alphabet(ds, grouped);
  const auto view = resolve_scope(session, scope);
  TransitionCounts total;
  total.counts.assign(symbols.size() * symbols.size(), 0);
  if (kind == TransitionKind::Through && std::find(symbols.begin(), symbols.end(), *focus) == symbols.end())
    throw Error(ErrorCode::UnknownFocusAoi, "'" + *focus + "'");
  for (const auto& part : view.samples) {
    for (const auto& seg : part.segments) {
      auto span = segment_span(part, seg);
      std::vector<LabeledFixation> mapped =
          grouped ? map_to_groups(span, ds.aois) : std::vector<LabeledFixation>(span.begin(), span.end());
      auto counts = transition_counts(mapped, kind, symbols, focus);
      for (std::size_t i = 0; i < total.counts.size(); ++i) total.counts[i] += counts.counts[i];
    }
  }
  auto m = make_matrix(dim, dim, metric, symbols, symbols, false);
  for (std::size_t i = 0; i < total.counts.size(); ++i) m.values[i] = static_cast<double>(total.counts[i]);
  return m;
}

// Per-entity inputs for the three similarity measures.
struct Features {
  std::vector<std::string> sequence;
  TransitionCounts transitions;
  std::optional<DensityGrid> density;
};

Features features_of(const Session& session, const Entity& entity, const std::string& metric, const Rect& bounds) {
  const auto& ds = session.dataset();
  const bool grouped = metric == "nw_group" || metric == "transition_cosine_group";
  Features f;
  if (metric == "density_overlap") {
    std::vector<Fixation> pooled;
    for (const auto& part : entity.parts)
      for (const auto& lf : part.labels) pooled.push_back(lf.fixation);
    if (!pooled.empty()) f.density = density_grid(pooled, bounds, session.config().kde);
    return f;
  }
  const auto symbols = alphabet(ds, grouped);
  f.transitions.kind = TransitionKind::Direct;
  f.transitions.symbols = symbols;
  f.transitions.counts.assign(symbols.size() * symbols.size(), 0);
  for (const auto& part : entity.parts) {
    for (const auto& seg : part.segments) {
      auto span = segment_span(part, seg);
      std::vector<LabeledFixation> mapped =
          grouped ? map_to_groups(span, ds.aois) : std::vector<LabeledFixation>(span.begin(), span.end());
      if (metric.starts_with("nw")) {
        auto seq = aoi_sequence(mapped, Collapse::PerVisit);
        f.sequence.insert(f.sequence.end(), seq.begin(), seq.end());
      } else {
        auto counts = transition_counts(mapped, TransitionKind::Direct, symbols);
        for (std::size_t i = 0; i < counts.counts.size(); ++i) f.transitions.counts[i] += counts.counts[i];
      }
    }
  }
  return f;
}

double measure(const Session& session, const std::string& metric, const Features& a, const Features& b) {
  if (metric.starts_with("nw")) return nw_score(a.sequence, b.sequence, session.config().nw).normalized;
  if (metric.starts_with("transition_cosine")) return transition_cosine(a.transitions, b.transitions);
  if (!a.density && !b.density) return 1.0;
  if (!a.density || !b.density) return 0.0;
  return density_overlap(*a.density, *b.density);
}

MetricMatrix similarity_metric_matrix(const Session& session, Dimension row_dim, Dimension col_dim,
                                      const std::string& metric, const Scope& scope) {
  Rect bounds{0.0, 0.0, 1.0, 1.0};
  if (metric == "density_overlap") {
    std::vector<Fixation> all;
    for (const auto& sa : session.analysis().samples) all.insert(all.end(), sa.fixations.begin(), sa.fixations.end());
    bounds = fixation_bounds(all, 4.0 * session.config().kde.bandwidth);
  }
  const auto rows = row_entities(session, row_dim, scope);
  std::vector<Features> row_features;
  std::vector<std::string> row_ids;
  for (const auto& e : rows) {
    row_features.push_back(features_of(session, e, metric, bounds));
    row_ids.push_back(e.id);
  }

  if (row_dim == col_dim) {
    if (rows.empty()) return make_matrix(row_dim, col_dim, metric, {}, {}, true);
    return similarity_matrix(row_ids, row_dim, metric, [&](std::size_t i, std::size_t j) {
      return measure(session, metric, row_features[i], row_features[j]);
    });
  }

  const auto cols = row_entities(session, col_dim, scope);
  std::vector<Features> col_features;
  std::vector<std::string> col_ids;
  for (const auto& e : cols) {
    col_features.push_back(features_of(session, e, metric, bounds));
    col_ids.push_back(e.id);
  }
  auto m = make_matrix(row_dim, col_dim, metric, row_ids, col_ids, false);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) m.at(r, c) = measure(session, metric, row_features[r], col_features[c]);
  return m;
}

std::vector<MetricValue> fixation_values(const ScopedSample& part) {
  std::vector<double> durations;
  for (const auto& lf : part.labels) durations.push_back(lf.fixation.duration);
  const std::size_t n = durations.size();
  double total = 0.0;
  for (double d : durations) total += d;
  return {
      {"fixation_count", static_cast<double>(n), Unit::Count, Aggregation::Sum, n, {}},
      {"total_duration", total, Unit::Ms, Aggregation::Sum, n, {}},
      {"mean_duration", n ? total / static_cast<double>(n) : 0.0, Unit::Ms, Aggregation::Mean, n, {}},
      {"median_duration", median(durations), Unit::Ms, Aggregation::Median, n, durations},
  };
}

MetricMatrix window_metric_matrix(const Session& session, Dimension row_dim, Dimension col_dim,
                                  const std::string& metric, const Scope& scope) {
  const auto& ds = session.dataset();
  // rows: samples or sample groups (members only); columns supply the windows
  Scope all_time = scope;
  all_time.twis = Selection::all();
  const auto rows = sample_entities(session, all_time, row_dim == Dimension::SampleGroup, std::nullopt);
  const auto twis = scoped_twi_list(ds, scope.twis);
  std::vector<std::pair<std::string, std::vector<const Twi*>>> cols;
  if (col_dim == Dimension::Twi) {
    for (const Twi* t : twis) cols.push_back({t->id, {t}});
  } else {
    std::vector<Gid> gids;
    for (const Twi* t : twis) gids.push_back(t->group_id);
    for (Gid g : nonzero_gids(gids)) {
      std::vector<const Twi*> members;
      for (const Twi* t : twis)
        if (t->group_id == g) members.push_back(t);
      cols.push_back({std::to_string(g), members});
    }
  }

  std::vector<std::string> row_ids, col_ids;
  for (const auto& r : rows) row_ids.push_back(r.id);
  for (const auto& c : cols) col_ids.push_back(c.first);
  auto m = make_matrix(row_dim, col_dim, metric, row_ids, col_ids, false);
  const bool saccade_metric = metric.find("saccade") != std::string::npos;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      std::vector<MetricValue> parts;
      for (auto i : rows[r].members) {
        const bool applies = std::any_of(cols[c].second.begin(), cols[c].second.end(),
                                         [&](const Twi* t) { return t->applies_to(ds.samples[i].id); });
        if (!applies) continue;
        const auto part = scope_sample(session, i, cols[c].second);
        parts.push_back(pick(saccade_metric ? saccade_stats(part.saccades).values() : fixation_values(part), metric));
      }
      m.at(r, c) = combine(parts);
    }
  }
  return m;
}

}  // namespace

MetricMatrix relationship_matrix(const Session& session, Dimension row_dim, Dimension col_dim,
                                 const std::string& metric_id, const Scope& scope) {
  if ((is_sample_dim(row_dim) || is_twi_dim(row_dim)) && is_aoi_dim(col_dim) && kAoiMetrics.contains(metric_id))
    return aoi_metric_matrix(session, row_dim, col_dim, metric_id, scope);
  if (is_aoi_dim(row_dim) && row_dim == col_dim && metric_id.starts_with("transitions_"))
    return transition_matrix(session, row_dim, metric_id, scope);
  const bool same_family =
      (is_sample_dim(row_dim) && is_sample_dim(col_dim)) || (is_twi_dim(row_dim) && is_twi_dim(col_dim));
  if (same_family && kSimilarityMetrics.contains(metric_id))
    return similarity_metric_matrix(session, row_dim, col_dim, metric_id, scope);
  if (is_sample_dim(row_dim) && is_twi_dim(col_dim) && kWindowMetrics.contains(metric_id))
    return window_metric_matrix(session, row_dim, col_dim, metric_id, scope);
  unsupported(row_dim, col_dim, metric_id);
}

namespace {

std::optional<std::vector<std::size_t>> order_from_ids(const std::vector<std::string>& ids,
                                                       const std::vector<std::string>& order) {
  if (order.size() != ids.size()) return std::nullopt;
  std::vector<std::size_t> perm;
  for (const auto& id : order) {
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) return std::nullopt;
    perm.push_back(static_cast<std::size_t>(it - ids.begin()));
  }
  if (!is_permutation_of(perm, ids.size())) return std::nullopt;
  return perm;
}

}  // namespace

MetricMatrix compute_view(const Session& session, const MatrixView& view) {
  auto m = relationship_matrix(session, view.rows, view.cols, view.metric, session.config().scope);
  if (m.rows() == 0 || m.cols() == 0) return m;
  if (view.reorder_global) {
    apply(m, reorder_global(m));
    return m;
  }
  // stored orders that no longer match the entities fall back to canonical order
  if (auto rows = order_from_ids(m.row_ids, view.row_order)) m.row_order = *rows;
  if (auto cols = order_from_ids(m.col_ids, view.col_order)) m.col_order = *cols;
  return m;
}

std::string format_scope(const Scope& scope) {
  return "samples=" + format_selection(scope.samples) + ";twis=" + format_selection(scope.twis);
}

Scope parse_scope(std::string_view text) {
  Scope scope;
  if (text.empty() || text == "all") return scope;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find_first_of(";,", start);
    if (end == std::string_view::npos) end = text.size();
    auto part = text.substr(start, end - start);
    auto eq = part.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::InvalidArgument, "bad scope part '" + std::string(part) + "'");
    auto key = part.substr(0, eq);
    auto value = part.substr(eq + 1);
    if (key == "samples")
      scope.samples = parse_selection(value);
    else if (key == "twis")
      scope.twis = parse_selection(value);
    else
      throw Error(ErrorCode::InvalidArgument, "bad scope key '" + std::string(key) + "'");
    start = end + 1;
  }
  return scope;
}

std::vector<MetricRow> metric_catalogue(const Session& session) {
  const auto& ds = session.dataset();
  const auto view = resolve_scope(session);
  const std::string scope = format_scope(view.scope);
  std::vector<MetricRow> rows;

  // per sample, keyed for group aggregation: entity suffix -> metric values of members
  std::map<Gid, std::map<std::string, std::vector<MetricValue>>> by_group;
  std::vector<std::string> suffix_order;
  auto emit = [&](const ScopedSample& part, const std::string& suffix, const std::vector<MetricValue>& values) {
    for (const auto& v : values) {
      rows.push_back({scope, part.sample_id + suffix, v});
      if (part.gid != kUngrouped) by_group[part.gid][suffix + "\x1f" + v.metric_id].push_back(v);
    }
    if (std::find(suffix_order.begin(), suffix_order.end(), suffix) == suffix_order.end()) suffix_order.push_back(suffix);
  };

  for (const auto& part : view.samples) {
    const auto broken = with_window_breaks(part);
    const double denom = denominator(part, session.config().pct_denominator);
    for (const auto& aoi : ds.aois) emit(part, "/" + aoi.id, fixation_aoi_stats(broken, {aoi.id}, denom).values());
    auto sample_values = saccade_stats(part.saccades).values();
    sample_values.insert(sample_values.begin(), haar_value(part));
    emit(part, "", sample_values);
  }

  for (const auto& [gid, metrics] : by_group) {
    for (const auto& suffix : suffix_order) {
      for (const auto& [key, values] : metrics) {
        const auto sep = key.find('\x1f');
        if (key.substr(0, sep) != suffix) continue;
        rows.push_back({scope, "group:" + std::to_string(gid) + suffix, aggregate_group(values)});
      }
    }
  }
  return rows;
}

std::string format_matrix_tsv(const MetricMatrix& matrix) {
  std::string out = "row_id\tcol_id\tvalue\n";
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      out += matrix.row_ids[matrix.row_order[r]] + '\t' + matrix.col_ids[matrix.col_order[c]] + '\t' +
             format_number(matrix.display_at(r, c)) + '\n';
    }
  }
  return out;
}

}  // namespace gazekit
