#include "gazekit/session.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <unordered_set>

#include "gazekit/error.hpp"

namespace gazekit {

struct Session::Lazy {
  std::once_flag once;
  std::shared_ptr<const Analysis> value;
};

void check(const SessionConfig& config) {
  check(config.detection);
  check(config.kde);
  check(config.bundle);
  check(config.nw);
  if (!(config.time_fraction >= 0.0 && config.time_fraction <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "time_fraction must lie in [0, 1]");
  std::set<std::string> ids;
  for (const auto& m : config.matrices)
    if (!ids.insert(m.id).second) throw Error(ErrorCode::InvalidArgument, "duplicate matrix view id '" + m.id + "'");
}

namespace {

void validate_dataset(const Dataset& dataset) {
  auto report = dataset_validate(dataset.samples, dataset.aois, dataset.twis, group_table_of(dataset));
  if (report.accepted()) return;
  std::string joined;
  for (const auto& issue : report.issues) joined += (joined.empty() ? "" : "; ") + issue;
  throw Error(ErrorCode::InvalidArgument, "invalid dataset: " + joined);
}

bool same_samples(const Dataset& a, const Dataset& b) {
  if (a.samples.size() != b.samples.size()) return false;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    if (a.samples[i].id != b.samples[i].id || a.samples[i].points != b.samples[i].points) return false;
  }
  return true;
}

}  // namespace

Session::Session() : Session(Dataset{}, SessionConfig{}, 0) {}

Session::Session(Dataset dataset, SessionConfig config, std::uint64_t version)
    : Session(std::make_shared<const Dataset>(std::move(dataset)), std::move(config), version, nullptr) {}

Session::Session(std::shared_ptr<const Dataset> dataset, SessionConfig config, std::uint64_t version,
                 std::shared_ptr<Lazy> detection)
    : dataset_(std::move(dataset)),
      config_(std::move(config)),
      version_(version),
      detection_(detection ? std::move(detection) : std::make_shared<Lazy>()),
      labels_(std::make_shared<Lazy>()) {
  validate_dataset(*dataset_);
  check(config_);
}

const Analysis& Session::analysis() const {
  std::call_once(detection_->once, [&] {
    auto result = std::make_shared<Analysis>();
    for (const auto& sample : dataset_->samples) {
      SampleAnalysis sa;
      sa.fixations = detect_fixations(sample.points, config_.detection);
      sa.saccades = derive_saccades(sa.fixations);
      result->samples.push_back(std::move(sa));
    }
    detection_->value = std::move(result);
  });
  std::call_once(labels_->once, [&] {
    auto result = std::make_shared<Analysis>(*detection_->value);
    for (auto& sa : result->samples) sa.labels = label_fixations(sa.fixations, dataset_->aois);
    labels_->value = std::move(result);
  });
  return *labels_->value;
}

Session Session::with_dataset(Dataset dataset) const {
  auto detection = same_samples(*dataset_, dataset) ? detection_ : nullptr;
  return Session(std::make_shared<const Dataset>(std::move(dataset)), config_, version_ + 1, std::move(detection));
}

Session Session::with_config(SessionConfig config) const {
  auto detection = config.detection == config_.detection ? detection_ : nullptr;
  return Session(dataset_, std::move(config), version_ + 1, std::move(detection));
}

std::vector<Fixation> ScopedSample::fixations() const {
  std::vector<Fixation> out;
  out.reserve(labels.size());
  for (const auto& lf : labels) out.push_back(lf.fixation);
  return out;
}

std::vector<std::size_t> select_samples(const Dataset& dataset, const Selection& selection) {
  std::vector<std::size_t> out;
  switch (selection.kind) {
    case Selection::Kind::All:
      for (std::size_t i = 0; i < dataset.samples.size(); ++i) out.push_back(i);
      break;
    case Selection::Kind::Group: {
      bool known = selection.gid == kUngrouped;
      for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
        if (dataset.samples[i].group_id != selection.gid) continue;
        known = true;
        out.push_back(i);
      }
      if (!known) throw Error(ErrorCode::UnknownScopeTarget, "sample group " + std::to_string(selection.gid));
      break;
    }
    case Selection::Kind::One: {
      for (std::size_t i = 0; i < dataset.samples.size(); ++i)
        if (dataset.samples[i].id == selection.id) out.push_back(i);
      if (out.empty()) throw Error(ErrorCode::UnknownScopeTarget, "sample '" + selection.id + "'");
      break;
    }
  }
  return out;
}

std::optional<std::vector<const Twi*>> select_twis(const Dataset& dataset, const Selection& selection) {
  std::vector<const Twi*> out;
  switch (selection.kind) {
    case Selection::Kind::All:
      return std::nullopt;
    case Selection::Kind::Group: {
      bool known = selection.gid == kUngrouped;
      for (const auto& twi : dataset.twis) {
        if (twi.group_id != selection.gid) continue;
        known = true;
        out.push_back(&twi);
      }
      if (!known) throw Error(ErrorCode::UnknownScopeTarget, "twi group " + std::to_string(selection.gid));
      break;
    }
    case Selection::Kind::One: {
      const Twi* twi = dataset.find_twi(selection.id);
      if (!twi) throw Error(ErrorCode::UnknownScopeTarget, "twi '" + selection.id + "'");
      out.push_back(twi);
      break;
    }
  }
  return out;
}

ScopedSample scope_sample(const Session& session, std::size_t sample_index,
                          const std::optional<std::vector<const Twi*>>& twis) {
  const auto& sample = session.dataset().samples.at(sample_index);
  const auto& analysis = session.analysis().samples.at(sample_index);

  ScopedSample out;
  out.sample_index = sample_index;
  out.sample_id = sample.id;
  out.gid = sample.group_id;

  if (!twis) {
    out.full_span = true;
    out.labels = analysis.labels;
    out.saccades = analysis.saccades;
    if (!out.labels.empty()) out.segments.push_back({0, out.labels.size()});
    if (!sample.points.empty()) {
      out.span_start = sample.points.front().t;
      out.span_end = sample.points.back().t;
      out.duration = out.span_end - out.span_start;
    }
    return out;
  }

  out.full_span = false;
  std::vector<Window> raw;
  for (const Twi* twi : *twis)
    if (twi->applies_to(sample.id)) raw.push_back({twi->t_start, twi->t_end});
  std::sort(raw.begin(), raw.end(), [](const Window& a, const Window& b) {
    return a.start < b.start || (a.start == b.start && a.end < b.end);
  });
  for (const auto& w : raw) {
    if (!out.windows.empty() && w.start <= out.windows.back().end)
      out.windows.back().end = std::max(out.windows.back().end, w.end);
    else
      out.windows.push_back(w);
  }
  if (out.windows.empty()) return out;
  out.span_start = out.windows.front().start;
  out.span_end = out.windows.back().end;
  for (const auto& w : out.windows) out.duration += w.end - w.start;

  std::size_t window = 0;
  std::optional<std::size_t> current_segment_window;
  std::unordered_set<std::size_t> kept;
  for (const auto& lf : analysis.labels) {
    const double t = lf.fixation.t_start;
    while (window < out.windows.size() && t >= out.windows[window].end) ++window;
    if (window == out.windows.size()) break;
    if (t < out.windows[window].start) continue;
    if (current_segment_window != window) {
      out.segments.push_back({out.labels.size(), out.labels.size()});
      current_segment_window = window;
    }
    out.labels.push_back(lf);
    out.segments.back().end = out.labels.size();
    kept.insert(lf.fixation.index);
  }
  for (const auto& s : analysis.saccades)
    if (kept.contains(s.from_fixation) && kept.contains(s.to_fixation)) out.saccades.push_back(s);
  return out;
}

ScopedView resolve_scope(const Session& session) { return resolve_scope(session, session.config().scope); }

ScopedView resolve_scope(const Session& session, const Scope& scope) {
  ScopedView view;
  view.scope = scope;
  const auto samples = select_samples(session.dataset(), scope.samples);
  const auto twis = select_twis(session.dataset(), scope.twis);
  for (auto index : samples) view.samples.push_back(scope_sample(session, index, twis));
  return view;
}

ScopedView time_fraction_filter(const ScopedView& view, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw Error(ErrorCode::InvalidArgument, "fraction must lie in [0, 1]");
  if (fraction == 1.0) return view;
  ScopedView out = view;
  for (auto& s : out.samples) {
    const double cutoff = s.span_start + fraction * (s.span_end - s.span_start);
    // labels are time ordered, so the kept set is a prefix
    std::size_t keep = 0;
    while (keep < s.labels.size() && s.labels[keep].fixation.t_start < cutoff) ++keep;
    std::unordered_set<std::size_t> kept;
    for (std::size_t i = 0; i < keep; ++i) kept.insert(s.labels[i].fixation.index);
    s.labels.resize(keep);
    std::vector<IndexRange> segments;
    for (auto seg : s.segments) {
      seg.end = std::min(seg.end, keep);
      if (seg.begin < seg.end) segments.push_back(seg);
    }
    s.segments = std::move(segments);
    std::erase_if(s.saccades, [&](const Saccade& sc) {
      return !kept.contains(sc.from_fixation) || !kept.contains(sc.to_fixation);
    });
  }
  return out;
}

Session edit_groups(const Session& session, EntityKind kind, const std::map<std::string, Gid>& assignments) {
  Dataset dataset = session.dataset();
  auto assign = [&](auto& items, const char* what) {
    for (const auto& [id, gid] : assignments) {
      auto it = std::find_if(items.begin(), items.end(), [&](const auto& item) { return item.id == id; });
      if (it == items.end()) throw Error(ErrorCode::UnknownId, std::string(what) + " '" + id + "'");
      it->group_id = gid;
    }
  };
  switch (kind) {
    case EntityKind::Sample: assign(dataset.samples, "sample"); break;
    case EntityKind::Aoi: assign(dataset.aois, "aoi"); break;
    case EntityKind::Twi: assign(dataset.twis, "twi"); break;
  }
  return session.with_dataset(std::move(dataset));
}

Session edit_aoi_geometry(const Session& session, const std::string& aoi_id, const Shape& shape) {
  if (auto problem = shape_problem(shape)) throw Error(ErrorCode::DegenerateShape, *problem);
  Dataset dataset = session.dataset();
  auto it = std::find_if(dataset.aois.begin(), dataset.aois.end(), [&](const Aoi& a) { return a.id == aoi_id; });
  if (it == dataset.aois.end()) throw Error(ErrorCode::UnknownId, "aoi '" + aoi_id + "'");
  it->shape = shape;
  return session.with_dataset(std::move(dataset));
}

}  // namespace gazekit
