#pragma once

#include <span>
#include <vector>

#include "gazekit/model.hpp"

namespace gazekit {

enum class Kernel { Gaussian, Epanechnikov };
enum class Weighting { Uniform, ByDuration };

std::string_view to_string(Kernel kernel);
std::string_view to_string(Weighting weighting);
Kernel parse_kernel(std::string_view text);
Weighting parse_weighting(std::string_view text);

struct KdeParams {
  Kernel kernel = Kernel::Gaussian;
  double bandwidth = 30.0;       // stimulus units
  std::size_t grid_width = 256;  // cells; height follows the bounds' aspect ratio
  Weighting weighting = Weighting::ByDuration;
  friend bool operator==(const KdeParams&, const KdeParams&) = default;
};

void check(const KdeParams& params);

/// Normalized fixation density over `bounds`. Mass falling outside the bounds is
/// dropped before normalization. Throws EmptySelection when there are no
/// fixations or no mass lands inside the bounds.
DensityGrid density_grid(std::span<const Fixation> fixations, const Rect& bounds, const KdeParams& params);

/// Tight box around all fixation centroids, padded by `margin` on every side.
/// Returns a unit box at the origin when there are no fixations.
Rect fixation_bounds(std::span<const Fixation> fixations, double margin);

struct BundleParams {
  std::size_t iterations = 10;
  double kernel_bandwidth = 20.0;    // stimulus units
  double smoothing = 0.5;            // Laplacian weight in [0, 1]
  double direction_split_deg = 45.0; // saccades attract only within this angle
  std::size_t subdivisions = 16;     // segments per polyline once bundling runs
  double advection = 0.5;            // fraction of the mean-shift step taken per iteration
  friend bool operator==(const BundleParams&, const BundleParams&) = default;
};

void check(const BundleParams& params);

struct SaccadeSegment {
  Point2 from;
  Point2 to;
};

/// Segments between fixation centroids for each saccade.
std::vector<SaccadeSegment> saccade_segments(std::span<const Fixation> fixations, std::span<const Saccade> saccades);

/// Kernel-density edge bundling. Each segment is subdivided; every iteration
/// moves interior control points part way toward the local kernel-weighted mean
/// of control points belonging to direction-compatible saccades (within
/// 3 bandwidths), then Laplacian-smooths them. Endpoints never move, and every
/// update is a convex combination, so points stay inside the endpoints' hull.
/// With zero iterations each polyline is the straight 2-point segment.
std::vector<std::vector<Point2>> bundle_saccades(std::span<const SaccadeSegment> segments, const BundleParams& params);

}  // namespace gazekit
