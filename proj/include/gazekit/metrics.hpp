#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "gazekit/aoi.hpp"
#include "gazekit/model.hpp"

namespace gazekit {

enum class Unit { Ms, Count, Fraction, StimulusUnits };

/// How values of one metric combine across samples or groups.
enum class Aggregation { Sum, Mean, Median, Fraction };

std::string_view to_string(Unit unit);
Unit parse_unit(std::string_view text);

struct MetricValue {
  std::string metric_id;
  double value = 0.0;
  Unit unit = Unit::Count;
  Aggregation aggregation = Aggregation::Sum;
  std::size_t support = 0;
  /// Underlying events for Median metrics so groups can pool them; may be empty.
  std::vector<double> raw;
};

/// Even-length input takes the mean of the two middle values; empty gives 0.
double median(std::vector<double> values);

struct FixationAoiStats {
  std::size_t count = 0;
  double total_duration = 0.0;
  double mean_duration = 0.0;
  double median_duration = 0.0;
  double pct_time = 0.0;
  std::size_t visit_count = 0;
  double mean_visit_duration = 0.0;
  std::vector<double> durations;  // member fixation durations, in input order

  std::size_t support() const { return count; }
  std::vector<MetricValue> values() const;
};

/// Stats over fixations labelled with any id in `targets` (one AOI, or all AOIs
/// of a group). `denominator_ms` is the scoped span; pct_time is 0 when it is not
/// positive and is capped at 1 since fixations may straddle a window end.
FixationAoiStats fixation_aoi_stats(std::span<const LabeledFixation> labels, const std::set<std::string>& targets,
                                    double denominator_ms);

struct SaccadeStats {
  std::size_t count = 0;
  double mean_length = 0.0;
  double median_length = 0.0;
  double mean_duration = 0.0;
  std::vector<double> lengths;

  std::size_t support() const { return count; }
  std::vector<MetricValue> values() const;
};

SaccadeStats saccade_stats(std::span<const Saccade> saccades);

/// Combines one metric across entities: sums add, means and fractions are
/// support-weighted, medians are recomputed over pooled raw events when every
/// input carries them and fall back to a support-weighted mean otherwise.
/// Throws MixedMetric when ids, units or aggregation kinds differ.
MetricValue aggregate_group(std::span<const MetricValue> values);

struct Histogram {
  std::vector<double> bin_edges;
  std::vector<std::size_t> counts;
};

/// Equal-width bins over [min, max]; the max value lands in the last bin. A zero
/// range is widened to [v - 0.5, v + 0.5].
Histogram histogram(std::span<const double> values, std::size_t bin_count);

struct MetricRow {
  std::string scope;
  std::string entity;
  MetricValue metric;
};

/// "scope\tentity\tmetric_id\tvalue\tunit\tsupport" with a header line.
std::string format_metrics_tsv(std::span<const MetricRow> rows);

}  // namespace gazekit
