#pragma once

#include <span>
#include <vector>

#include "gazekit/model.hpp"

namespace gazekit {

struct DetectionParams {
  double dispersion_threshold = 25.0;  // stimulus units
  double min_duration = 100.0;         // ms
  friend bool operator==(const DetectionParams&, const DetectionParams&) = default;
};

/// Throws InvalidArgument unless both parameters are finite and > 0.
void check(const DetectionParams& params);

/// (max x - min x) + (max y - min y). Throws EmptyWindow on an empty span.
double dispersion(std::span<const GazePoint> points);

/// Dispersion-threshold identification. Starting at the first unconsumed point,
/// the window grows while its dispersion stays within the threshold. The
/// maximal window becomes a fixation when t_last - t_first >= min_duration and
/// is otherwise dropped; either way the sweep resumes after the window.
std::vector<Fixation> detect_fixations(std::span<const GazePoint> points, const DetectionParams& params);

/// One saccade per consecutive fixation pair.
std::vector<Saccade> derive_saccades(std::span<const Fixation> fixations);

}  // namespace gazekit
