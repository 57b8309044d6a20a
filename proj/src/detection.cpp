#include "gazekit/detection.hpp"

#include <algorithm>
#include <cmath>

#include "gazekit/error.hpp"

namespace gazekit {

void check(const DetectionParams& params) {
  if (!std::isfinite(params.dispersion_threshold) || !(params.dispersion_threshold > 0.0))
    throw Error(ErrorCode::InvalidArgument, "dispersion_threshold must be finite and > 0");
  if (!std::isfinite(params.min_duration) || !(params.min_duration > 0.0))
    throw Error(ErrorCode::InvalidArgument, "min_duration must be finite and > 0");
}

double dispersion(std::span<const GazePoint> points) {
  if (points.empty()) throw Error(ErrorCode::EmptyWindow, "dispersion of an empty window");
  auto [min_x, max_x] = std::minmax_element(points.begin(), points.end(),
                                            [](const GazePoint& a, const GazePoint& b) { return a.x < b.x; });
  auto [min_y, max_y] = std::minmax_element(points.begin(), points.end(),
                                            [](const GazePoint& a, const GazePoint& b) { return a.y < b.y; });
  return (max_x->x - min_x->x) + (max_y->y - min_y->y);
}

std::vector<Fixation> detect_fixations(std::span<const GazePoint> points, const DetectionParams& params) {
  check(params);
  std::vector<Fixation> fixations;
  const std::size_t n = points.size();
  std::size_t start = 0;
  while (start < n) {
    double min_x = points[start].x, max_x = min_x;
    double min_y = points[start].y, max_y = min_y;
    std::size_t end = start + 1;
    while (end < n) {
      const auto& p = points[end];
      const double lo_x = std::min(min_x, p.x), hi_x = std::max(max_x, p.x);
      const double lo_y = std::min(min_y, p.y), hi_y = std::max(max_y, p.y);
      if ((hi_x - lo_x) + (hi_y - lo_y) > params.dispersion_threshold) break;
      min_x = lo_x, max_x = hi_x, min_y = lo_y, max_y = hi_y;
      ++end;
    }
    const double t_first = points[start].t;
    const double t_last = points[end - 1].t;
    if (t_last - t_first >= params.min_duration) {
      double sum_x = 0.0, sum_y = 0.0;
      for (std::size_t i = start; i < end; ++i) {
        sum_x += points[i].x;
        sum_y += points[i].y;
      }
      const auto count = static_cast<double>(end - start);
      Fixation f;
      f.index = fixations.size();
      f.cx = sum_x / count;
      f.cy = sum_y / count;
      f.t_start = t_first;
      f.t_end = t_last;
      f.duration = t_last - t_first;
      f.point_span = {start, end};
      fixations.push_back(f);
    }
    start = end;
  }
  return fixations;
}

std::vector<Saccade> derive_saccades(std::span<const Fixation> fixations) {
  std::vector<Saccade> saccades;
  if (fixations.size() < 2) return saccades;
  saccades.reserve(fixations.size() - 1);
  for (std::size_t i = 0; i + 1 < fixations.size(); ++i) {
    const auto& a = fixations[i];
    const auto& b = fixations[i + 1];
    const double dx = b.cx - a.cx;
    const double dy = b.cy - a.cy;
    saccades.push_back({a.index, b.index, std::hypot(dx, dy), b.t_start - a.t_end, std::atan2(dy, dx)});
  }
  return saccades;
}

}  // namespace gazekit
