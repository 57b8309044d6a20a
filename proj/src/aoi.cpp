#include "gazekit/aoi.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "gazekit/error.hpp"

namespace gazekit {

std::string_view to_string(TransitionKind kind) {
  switch (kind) {
    case TransitionKind::Direct: return "direct";
    case TransitionKind::Indirect: return "indirect";
    case TransitionKind::Through: return "through";
    case TransitionKind::Glance: return "glance";
  }
  return "direct";
}

std::string_view to_string(FocusClass cls) {
  switch (cls) {
    case FocusClass::Entering: return "entering";
    case FocusClass::Leaving: return "leaving";
    case FocusClass::GlancingOut: return "glancing_out";
    case FocusClass::Inside: return "inside";
    case FocusClass::Unrelated: return "unrelated";
  }
  return "unrelated";
}

std::uint64_t TransitionCounts::at(const std::string& from, const std::string& to) const {
  auto index = [&](const std::string& s) {
    auto it = std::find(symbols.begin(), symbols.end(), s);
    if (it == symbols.end()) throw Error(ErrorCode::UnknownId, "symbol '" + s + "' not in alphabet");
    return static_cast<std::size_t>(it - symbols.begin());
  };
  return at(index(from), index(to));
}

std::uint64_t TransitionCounts::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

namespace {

bool on_edge(Point2 p, Point2 a, Point2 b) {
  const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  if (cross != 0.0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool polygon_contains(const Polygon& polygon, Point2 p) {
  const auto& v = polygon.vertices;
  const std::size_t n = v.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (on_edge(p, v[j], v[i])) return true;
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double x_cross = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

// A run of consecutive fixations sharing one label (unlabelled runs included).
struct Run {
  Label label;
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::vector<Run> runs_of(std::span<const LabeledFixation> labels) {
  std::vector<Run> runs;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (runs.empty() || runs.back().label != labels[i].aoi_id) runs.push_back({labels[i].aoi_id, i, i});
    runs.back().end = i + 1;
  }
  return runs;
}

}  // namespace

bool contains(const Shape& shape, Point2 p) {
  if (const auto* r = std::get_if<Rect>(&shape))
    return p.x >= r->x && p.x <= r->x + r->w && p.y >= r->y && p.y <= r->y + r->h;
  return polygon_contains(std::get<Polygon>(shape), p);
}

Label hit_test(double x, double y, std::span<const Aoi> aois) {
  const Aoi* best = nullptr;
  for (const auto& aoi : aois) {
    if (best && aoi.precedence >= best->precedence) continue;
    if (contains(aoi.shape, {x, y})) best = &aoi;
  }
  return best ? Label{best->id} : std::nullopt;
}

std::vector<LabeledFixation> label_fixations(std::span<const Fixation> fixations, std::span<const Aoi> aois) {
  std::vector<LabeledFixation> out;
  out.reserve(fixations.size());
  for (const auto& f : fixations) out.push_back({f, hit_test(f.cx, f.cy, aois)});
  return out;
}

std::vector<LabeledFixation> map_to_groups(std::span<const LabeledFixation> labels, std::span<const Aoi> aois) {
  std::unordered_map<std::string, Gid> gid_of;
  for (const auto& aoi : aois) gid_of[aoi.id] = aoi.group_id;
  std::vector<LabeledFixation> out(labels.begin(), labels.end());
  for (auto& lf : out) {
    if (!lf.aoi_id) continue;
    auto it = gid_of.find(*lf.aoi_id);
    if (it == gid_of.end() || it->second == kUngrouped)
      lf.aoi_id.reset();
    else
      lf.aoi_id = std::to_string(it->second);
  }
  return out;
}

double haar(std::span<const LabeledFixation> labels) {
  if (labels.empty()) throw Error(ErrorCode::EmptyInput, "HAAR of an empty fixation list");
  const auto hits = std::count_if(labels.begin(), labels.end(), [](const auto& lf) { return lf.aoi_id.has_value(); });
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

std::vector<Visit> visits(std::span<const LabeledFixation> labels) {
  std::vector<Visit> out;
  for (const auto& run : runs_of(labels)) {
    if (!run.label) continue;
    Visit v;
    v.aoi_id = *run.label;
    v.first_fixation = labels[run.begin].fixation.index;
    v.last_fixation = labels[run.end - 1].fixation.index;
    v.fixation_count = run.end - run.begin;
    for (std::size_t i = run.begin; i < run.end; ++i) v.duration += labels[i].fixation.duration;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::string> aoi_sequence(std::span<const LabeledFixation> labels, Collapse collapse) {
  std::vector<std::string> out;
  if (collapse == Collapse::PerFixation) {
    for (const auto& lf : labels)
      if (lf.aoi_id) out.push_back(*lf.aoi_id);
    return out;
  }
  for (const auto& v : visits(labels)) out.push_back(v.aoi_id);
  return out;
}

TransitionCounts transition_counts(std::span<const LabeledFixation> labels, TransitionKind kind,
                                   const std::vector<std::string>& symbols, const std::optional<std::string>& focus) {
  std::unordered_map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < symbols.size(); ++i) index_of.emplace(symbols[i], i);

  TransitionCounts out;
  out.kind = kind;
  out.symbols = symbols;
  out.counts.assign(symbols.size() * symbols.size(), 0);

  std::optional<std::size_t> focus_index;
  if (kind == TransitionKind::Through) {
    if (!focus || !index_of.contains(*focus))
      throw Error(ErrorCode::UnknownFocusAoi, focus ? "'" + *focus + "' is not in the alphabet" : "no focus given");
    out.focus = focus;
    focus_index = index_of.at(*focus);
  }

  // Visit tokens; nullopt marks a run of unlabelled fixations.
  std::vector<std::optional<std::size_t>> tokens;
  for (const auto& run : runs_of(labels)) {
    if (!run.label) {
      tokens.emplace_back();
      continue;
    }
    auto it = index_of.find(*run.label);
    if (it == index_of.end()) throw Error(ErrorCode::InvalidArgument, "label '" + *run.label + "' not in alphabet");
    tokens.emplace_back(it->second);
  }

  const std::size_t k = symbols.size();
  auto bump = [&](std::size_t from, std::size_t to) { ++out.counts[from * k + to]; };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& a = tokens[i];
    if (!a) continue;
    switch (kind) {
      case TransitionKind::Direct:
        if (i + 1 < tokens.size() && tokens[i + 1]) bump(*a, *tokens[i + 1]);
        break;
      case TransitionKind::Indirect:
        if (i + 2 < tokens.size() && !tokens[i + 1] && tokens[i + 2] && *tokens[i + 2] != *a) bump(*a, *tokens[i + 2]);
        break;
      case TransitionKind::Through:
        if (i + 2 < tokens.size() && tokens[i + 1] && tokens[i + 2] && *tokens[i + 1] == *focus_index)
          bump(*a, *tokens[i + 2]);
        break;
      case TransitionKind::Glance:
        if (i + 2 < tokens.size() && tokens[i + 1] && tokens[i + 2] && *tokens[i + 2] == *a) bump(*a, *tokens[i + 1]);
        break;
    }
  }
  return out;
}

std::vector<FocusClass> focus_context(std::span<const LabeledFixation> labels, const std::string& focus,
                                      std::span<const Aoi> known_aois) {
  if (std::none_of(known_aois.begin(), known_aois.end(), [&](const Aoi& a) { return a.id == focus; }))
    throw Error(ErrorCode::UnknownFocusAoi, "'" + focus + "'");

  std::vector<FocusClass> out(labels.size(), FocusClass::Unrelated);
  const auto runs = runs_of(labels);
  auto is_focus = [&](const Run& run) { return run.label && *run.label == focus; };
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& run = runs[r];
    if (is_focus(run)) {
      for (std::size_t i = run.begin; i < run.end; ++i) out[i] = FocusClass::Inside;
      if (r > 0) out[run.begin] = FocusClass::Entering;
    } else if (r > 0 && is_focus(runs[r - 1])) {
      const bool returns = r + 1 < runs.size() && is_focus(runs[r + 1]);
      out[run.begin] = returns ? FocusClass::GlancingOut : FocusClass::Leaving;
    }
  }
  return out;
}

}  // namespace gazekit
