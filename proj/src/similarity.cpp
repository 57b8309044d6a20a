#include "gazekit/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "gazekit/error.hpp"

namespace gazekit {

void check(const NwScoring& scoring) {
  if (!std::isfinite(scoring.match) || !std::isfinite(scoring.mismatch) || !std::isfinite(scoring.gap))
    throw Error(ErrorCode::InvalidArgument, "NW scores must be finite");
  if (!(scoring.match > scoring.mismatch)) throw Error(ErrorCode::InvalidArgument, "NW match must exceed mismatch");
  if (!(scoring.gap < scoring.match)) throw Error(ErrorCode::InvalidArgument, "NW gap must be below match");
}

NwResult nw_score(std::span<const std::string> a, std::span<const std::string> b, const NwScoring& scoring) {
  check(scoring);
  if (a.empty() && b.empty()) return {0.0, 1.0};
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  // Two rolling rows of the (n+1) x (m+1) score table.
  std::vector<double> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = scoring.gap * static_cast<double>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = scoring.gap * static_cast<double>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const double diag = prev[j - 1] + (a[i - 1] == b[j - 1] ? scoring.match : scoring.mismatch);
      cur[j] = std::max({diag, prev[j] + scoring.gap, cur[j - 1] + scoring.gap});
    }
    std::swap(prev, cur);
  }
  const double raw = prev[m];
  return {raw, raw / (scoring.match * static_cast<double>(std::max(n, m)))};
}

double transition_cosine(const TransitionCounts& a, const TransitionCounts& b) {
  if (a.kind != b.kind || a.focus != b.focus || a.symbols != b.symbols)
    throw Error(ErrorCode::AlphabetMismatch, "transition counts over different alphabets");
  const std::size_t k = a.symbols.size();
  double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const auto x = static_cast<double>(a.at(i, j));
      const auto y = static_cast<double>(b.at(i, j));
      dot += x * y;
      norm_a += x * x;
      norm_b += y * y;
    }
  }
  if (norm_a == 0.0 && norm_b == 0.0) return 1.0;
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(norm_a) * std::sqrt(norm_b)), 0.0, 1.0);
}

double density_overlap(const DensityGrid& a, const DensityGrid& b) {
  if (!(a.origin == b.origin) || a.cell_size != b.cell_size || a.width != b.width || a.height != b.height ||
      a.mass.size() != b.mass.size())
    throw Error(ErrorCode::GeometryMismatch, "density grids differ in geometry");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.mass.size(); ++i) sum += std::min(a.mass[i], b.mass[i]);
  return sum;
}

MetricMatrix similarity_matrix(const std::vector<std::string>& ids, Dimension dim, const std::string& metric_id,
                               const PairMeasure& measure) {
  if (ids.empty()) throw Error(ErrorCode::EmptyInput, "similarity matrix needs at least one entity");
  auto m = make_matrix(dim, dim, metric_id, ids, ids, true);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i; j < ids.size(); ++j) {
      const double v = measure(i, j);
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  }
  return m;
}

}  // namespace gazekit
