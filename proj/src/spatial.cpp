#include "gazekit/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "gazekit/error.hpp"

namespace gazekit {

std::string_view to_string(Kernel kernel) {
  return kernel == Kernel::Gaussian ? "gaussian" : "epanechnikov";
}

std::string_view to_string(Weighting weighting) {
  return weighting == Weighting::Uniform ? "uniform" : "duration";
}

Kernel parse_kernel(std::string_view text) {
  if (text == "gaussian") return Kernel::Gaussian;
  if (text == "epanechnikov") return Kernel::Epanechnikov;
  throw Error(ErrorCode::InvalidArgument, "unknown kernel '" + std::string(text) + "'");
}

Weighting parse_weighting(std::string_view text) {
  if (text == "uniform") return Weighting::Uniform;
  if (text == "duration") return Weighting::ByDuration;
  throw Error(ErrorCode::InvalidArgument, "unknown weighting '" + std::string(text) + "'");
}

void check(const KdeParams& params) {
  if (!std::isfinite(params.bandwidth) || !(params.bandwidth > 0.0))
    throw Error(ErrorCode::InvalidArgument, "bandwidth must be finite and > 0");
  if (params.grid_width < 8) throw Error(ErrorCode::InvalidArgument, "grid_width must be >= 8");
}

void check(const BundleParams& params) {
  if (!std::isfinite(params.kernel_bandwidth) || !(params.kernel_bandwidth > 0.0))
    throw Error(ErrorCode::InvalidArgument, "kernel_bandwidth must be finite and > 0");
  if (!(params.smoothing >= 0.0 && params.smoothing <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "smoothing must lie in [0, 1]");
  if (!(params.advection >= 0.0 && params.advection <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "advection must lie in [0, 1]");
  if (!std::isfinite(params.direction_split_deg) || params.direction_split_deg < 0.0)
    throw Error(ErrorCode::InvalidArgument, "direction_split_deg must be >= 0");
  if (params.subdivisions < 1) throw Error(ErrorCode::InvalidArgument, "subdivisions must be >= 1");
}

DensityGrid density_grid(std::span<const Fixation> fixations, const Rect& bounds, const KdeParams& params) {
  check(params);
  if (shape_problem(Shape{bounds})) throw Error(ErrorCode::InvalidArgument, "degenerate density bounds");
  if (fixations.empty()) throw Error(ErrorCode::EmptySelection, "density of no fixations");

  DensityGrid grid;
  grid.origin = {bounds.x, bounds.y};
  grid.width = params.grid_width;
  grid.cell_size = bounds.w / static_cast<double>(params.grid_width);
  grid.height = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(bounds.h / grid.cell_size - 1e-9)));
  grid.mass.assign(grid.width * grid.height, 0.0);

  const double bw = params.bandwidth;
  const double radius = params.kernel == Kernel::Gaussian ? 8.0 * bw : bw;
  const double inv_two_bw2 = 1.0 / (2.0 * bw * bw);
  const double inv_bw2 = 1.0 / (bw * bw);
  auto cell_range = [&](double centre, double origin, std::size_t cells) {
    const double lo = std::floor((centre - radius - origin) / grid.cell_size);
    const double hi = std::floor((centre + radius - origin) / grid.cell_size);
    const auto first = static_cast<std::ptrdiff_t>(std::max(0.0, lo));
    const auto last = static_cast<std::ptrdiff_t>(std::min(static_cast<double>(cells) - 1.0, hi));
    return std::pair{first, last};
  };

  for (const auto& f : fixations) {
    const double weight = params.weighting == Weighting::ByDuration ? f.duration : 1.0;
    if (weight <= 0.0) continue;
    const auto [x0, x1] = cell_range(f.cx, grid.origin.x, grid.width);
    const auto [y0, y1] = cell_range(f.cy, grid.origin.y, grid.height);
    for (auto iy = y0; iy <= y1; ++iy) {
      for (auto ix = x0; ix <= x1; ++ix) {
        const auto c = grid.cell_center(static_cast<std::size_t>(ix), static_cast<std::size_t>(iy));
        const double d2 = (c.x - f.cx) * (c.x - f.cx) + (c.y - f.cy) * (c.y - f.cy);
        const double k = params.kernel == Kernel::Gaussian ? std::exp(-d2 * inv_two_bw2) : std::max(0.0, 1.0 - d2 * inv_bw2);
        grid.mass[static_cast<std::size_t>(iy) * grid.width + static_cast<std::size_t>(ix)] += weight * k;
      }
    }
  }

  double total = 0.0;
  for (double m : grid.mass) total += m;
  if (!(total > 0.0)) throw Error(ErrorCode::EmptySelection, "no density mass inside the bounds");
  grid.total_mass = 0.0;
  for (double& m : grid.mass) {
    m /= total;
    grid.total_mass += m;
  }
  return grid;
}

Rect fixation_bounds(std::span<const Fixation> fixations, double margin) {
  if (fixations.empty()) return {0.0, 0.0, 1.0, 1.0};
  double x0 = fixations.front().cx, x1 = x0, y0 = fixations.front().cy, y1 = y0;
  for (const auto& f : fixations) {
    x0 = std::min(x0, f.cx);
    x1 = std::max(x1, f.cx);
    y0 = std::min(y0, f.cy);
    y1 = std::max(y1, f.cy);
  }
  return {x0 - margin, y0 - margin, (x1 - x0) + 2.0 * margin, (y1 - y0) + 2.0 * margin};
}

std::vector<SaccadeSegment> saccade_segments(std::span<const Fixation> fixations, std::span<const Saccade> saccades) {
  std::unordered_map<std::size_t, const Fixation*> by_index;
  for (const auto& f : fixations) by_index[f.index] = &f;
  std::vector<SaccadeSegment> out;
  for (const auto& s : saccades) {
    auto a = by_index.find(s.from_fixation);
    auto b = by_index.find(s.to_fixation);
    if (a == by_index.end() || b == by_index.end()) continue;
    out.push_back({{a->second->cx, a->second->cy}, {b->second->cx, b->second->cy}});
  }
  return out;
}

namespace {

double angular_gap(double a, double b) {
  double d = std::fabs(a - b);
  while (d > 2.0 * std::numbers::pi) d -= 2.0 * std::numbers::pi;
  return std::min(d, 2.0 * std::numbers::pi - d);
}

struct CellKey {
  long long x;
  long long y;
  friend bool operator==(const CellKey&, const CellKey&) = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    return std::hash<long long>{}(k.x * 73856093LL ^ k.y * 19349663LL);
  }
};

}  // namespace

std::vector<std::vector<Point2>> bundle_saccades(std::span<const SaccadeSegment> segments, const BundleParams& params) {
  check(params);
  std::vector<std::vector<Point2>> lines;
  lines.reserve(segments.size());
  if (params.iterations == 0) {
    for (const auto& s : segments) lines.push_back({s.from, s.to});
    return lines;
  }

  const std::size_t parts = params.subdivisions;
  for (const auto& s : segments) {
    std::vector<Point2> line(parts + 1);
    for (std::size_t i = 0; i <= parts; ++i) {
      const double u = static_cast<double>(i) / static_cast<double>(parts);
      line[i] = {s.from.x + (s.to.x - s.from.x) * u, s.from.y + (s.to.y - s.from.y) * u};
    }
    line.front() = s.from;
    line.back() = s.to;
    lines.push_back(std::move(line));
  }

  const std::size_t n = segments.size();
  std::vector<double> angle(n);
  for (std::size_t i = 0; i < n; ++i)
    angle[i] = std::atan2(segments[i].to.y - segments[i].from.y, segments[i].to.x - segments[i].from.x);
  const double split = params.direction_split_deg * std::numbers::pi / 180.0;
  std::vector<std::vector<bool>> compatible(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) compatible[i][j] = i == j || angular_gap(angle[i], angle[j]) < split;

  const double h = params.kernel_bandwidth;
  const double cutoff = 3.0 * h;
  const double inv_two_h2 = 1.0 / (2.0 * h * h);
  auto key_of = [&](Point2 p) {
    return CellKey{static_cast<long long>(std::floor(p.x / cutoff)), static_cast<long long>(std::floor(p.y / cutoff))};
  };

  for (std::size_t iter = 0; iter < params.iterations; ++iter) {
    std::unordered_map<CellKey, std::vector<std::pair<std::size_t, std::size_t>>, CellHash> buckets;
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t i = 0; i <= parts; ++i) buckets[key_of(lines[s][i])].emplace_back(s, i);

    auto advected = lines;
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t i = 1; i < parts; ++i) {
        const Point2 p = lines[s][i];
        const auto key = key_of(p);
        double wsum = 0.0, mx = 0.0, my = 0.0;
        for (long long dy = -1; dy <= 1; ++dy) {
          for (long long dx = -1; dx <= 1; ++dx) {
            auto it = buckets.find({key.x + dx, key.y + dy});
            if (it == buckets.end()) continue;
            for (const auto& [os, oi] : it->second) {
              if (!compatible[s][os]) continue;
              const Point2 q = lines[os][oi];
              const double d2 = (q.x - p.x) * (q.x - p.x) + (q.y - p.y) * (q.y - p.y);
              if (d2 > cutoff * cutoff) continue;
              const double w = std::exp(-d2 * inv_two_h2);
              wsum += w;
              mx += w * q.x;
              my += w * q.y;
            }
          }
        }
        // wsum > 0: p itself is always in range
        advected[s][i] = {p.x + params.advection * (mx / wsum - p.x), p.y + params.advection * (my / wsum - p.y)};
      }
    }

    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t i = 1; i < parts; ++i) {
        const auto& prev = advected[s][i - 1];
        const auto& next = advected[s][i + 1];
        const auto& cur = advected[s][i];
        lines[s][i] = {(1.0 - params.smoothing) * cur.x + params.smoothing * 0.5 * (prev.x + next.x),
                       (1.0 - params.smoothing) * cur.y + params.smoothing * 0.5 * (prev.y + next.y)};
      }
    }
  }
  return lines;
}

}  // namespace gazekit
