#include "gazekit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gazekit/error.hpp"
#include "gazekit/text.hpp"

namespace gazekit {

std::string_view to_string(Unit unit) {
  switch (unit) {
    case Unit::Ms: return "ms";
    case Unit::Count: return "count";
    case Unit::Fraction: return "fraction";
    case Unit::StimulusUnits: return "stimulus-units";
  }
  return "count";
}

Unit parse_unit(std::string_view text) {
  for (auto unit : {Unit::Ms, Unit::Count, Unit::Fraction, Unit::StimulusUnits})
    if (to_string(unit) == text) return unit;
  throw Error(ErrorCode::InvalidArgument, "unknown unit '" + std::string(text) + "'");
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

namespace {

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

MetricValue make_value(std::string id, double value, Unit unit, Aggregation agg, std::size_t support,
                       std::vector<double> raw = {}) {
  return {std::move(id), value, unit, agg, support, std::move(raw)};
}

}  // namespace

std::vector<MetricValue> FixationAoiStats::values() const {
  return {
      make_value("fixation_count", static_cast<double>(count), Unit::Count, Aggregation::Sum, count),
      make_value("total_duration", total_duration, Unit::Ms, Aggregation::Sum, count),
      make_value("mean_duration", mean_duration, Unit::Ms, Aggregation::Mean, count),
      make_value("median_duration", median_duration, Unit::Ms, Aggregation::Median, count, durations),
      make_value("pct_time", pct_time, Unit::Fraction, Aggregation::Fraction, count),
      make_value("visit_count", static_cast<double>(visit_count), Unit::Count, Aggregation::Sum, visit_count),
      make_value("mean_visit_duration", mean_visit_duration, Unit::Ms, Aggregation::Mean, visit_count),
  };
}

FixationAoiStats fixation_aoi_stats(std::span<const LabeledFixation> labels, const std::set<std::string>& targets,
                                    double denominator_ms) {
  FixationAoiStats stats;
  // Collapse the selection onto one marker so a group's AOIs form shared visits.
  std::vector<LabeledFixation> marked;
  marked.reserve(labels.size());
  for (const auto& lf : labels) {
    const bool hit = lf.aoi_id && targets.contains(*lf.aoi_id);
    marked.push_back({lf.fixation, hit ? Label{"*"} : std::nullopt});
    if (hit) stats.durations.push_back(lf.fixation.duration);
  }
  stats.count = stats.durations.size();
  if (stats.count == 0) return stats;

  stats.total_duration = std::accumulate(stats.durations.begin(), stats.durations.end(), 0.0);
  stats.mean_duration = stats.total_duration / static_cast<double>(stats.count);
  stats.median_duration = median(stats.durations);
  if (denominator_ms > 0.0) stats.pct_time = std::min(1.0, stats.total_duration / denominator_ms);

  const auto vs = visits(marked);
  stats.visit_count = vs.size();
  double visit_total = 0.0;
  for (const auto& v : vs) visit_total += v.duration;
  stats.mean_visit_duration = visit_total / static_cast<double>(vs.size());
  return stats;
}

std::vector<MetricValue> SaccadeStats::values() const {
  return {
      make_value("saccade_count", static_cast<double>(count), Unit::Count, Aggregation::Sum, count),
      make_value("mean_saccade_length", mean_length, Unit::StimulusUnits, Aggregation::Mean, count),
      make_value("median_saccade_length", median_length, Unit::StimulusUnits, Aggregation::Median, count, lengths),
      make_value("mean_saccade_duration", mean_duration, Unit::Ms, Aggregation::Mean, count),
  };
}

SaccadeStats saccade_stats(std::span<const Saccade> saccades) {
  SaccadeStats stats;
  stats.count = saccades.size();
  if (saccades.empty()) return stats;
  std::vector<double> durations;
  for (const auto& s : saccades) {
    stats.lengths.push_back(s.length);
    durations.push_back(s.duration);
  }
  stats.mean_length = mean(stats.lengths);
  stats.median_length = median(stats.lengths);
  stats.mean_duration = mean(durations);
  return stats;
}

MetricValue aggregate_group(std::span<const MetricValue> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "aggregate of no values");
  const auto& first = values.front();
  for (const auto& v : values) {
    if (v.metric_id != first.metric_id || v.unit != first.unit || v.aggregation != first.aggregation)
      throw Error(ErrorCode::MixedMetric, "'" + first.metric_id + "' vs '" + v.metric_id + "'");
  }

  MetricValue out = make_value(first.metric_id, 0.0, first.unit, first.aggregation, 0);
  double weighted = 0.0;
  bool pooled = true;
  for (const auto& v : values) {
    out.support += v.support;
    weighted += v.value * static_cast<double>(v.support);
    if (v.raw.size() != v.support) pooled = false;
  }

  switch (first.aggregation) {
    case Aggregation::Sum:
      for (const auto& v : values) out.value += v.value;
      break;
    case Aggregation::Mean:
    case Aggregation::Fraction:
      out.value = out.support == 0 ? 0.0 : weighted / static_cast<double>(out.support);
      break;
    case Aggregation::Median:
      if (pooled) {
        for (const auto& v : values) out.raw.insert(out.raw.end(), v.raw.begin(), v.raw.end());
        out.value = median(out.raw);
      } else {
        out.value = out.support == 0 ? 0.0 : weighted / static_cast<double>(out.support);
      }
      break;
  }
  return out;
}

Histogram histogram(std::span<const double> values, std::size_t bin_count) {
  if (bin_count == 0) throw Error(ErrorCode::InvalidArgument, "bin_count must be >= 1");
  Histogram h;
  if (values.empty()) return h;
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it, hi = *hi_it;
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bin_count);
  h.bin_edges.resize(bin_count + 1);
  for (std::size_t i = 0; i < bin_count; ++i) h.bin_edges[i] = lo + width * static_cast<double>(i);
  h.bin_edges[bin_count] = hi;
  h.counts.assign(bin_count, 0);
  for (double v : values) {
    auto bin = static_cast<std::size_t>(std::floor((v - lo) / width));
    bin = std::min(bin, bin_count - 1);
    // floating rounding can put an edge value one bin too high
    while (bin > 0 && v < h.bin_edges[bin]) --bin;
    ++h.counts[bin];
  }
  return h;
}

std::string format_metrics_tsv(std::span<const MetricRow> rows) {
  std::string out = "scope\tentity\tmetric_id\tvalue\tunit\tsupport\n";
  for (const auto& row : rows) {
    out += row.scope + '\t' + row.entity + '\t' + row.metric.metric_id + '\t' + format_number(row.metric.value) +
           '\t' + std::string(to_string(row.metric.unit)) + '\t' + std::to_string(row.metric.support) + '\n';
  }
  return out;
}

}  // namespace gazekit
