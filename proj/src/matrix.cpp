#include "gazekit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gazekit/error.hpp"

namespace gazekit {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Node {
  std::size_t left = kNone;
  std::size_t right = kNone;
  std::vector<std::size_t> leaves;
};

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sum);
}

// Average-linkage dendrogram; returns nodes with the root last.
std::vector<Node> cluster(const std::vector<std::vector<double>>& dist) {
  const std::size_t n = dist.size();
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back({kNone, kNone, {i}});

  // active clusters, kept ordered by their smallest leaf
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), std::size_t{0});
  std::vector<std::vector<double>> d = dist;  // indexed by node id, grown as nodes appear
  for (auto& row : d) row.resize(2 * n, 0.0);
  d.resize(2 * n, std::vector<double>(2 * n, 0.0));

  while (active.size() > 1) {
    std::size_t best_a = 0, best_b = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double v = d[active[a]][active[b]];
        if (v < best) {
          best = v;
          best_a = a;
          best_b = b;
        }
      }
    }
    const std::size_t left = active[best_a];
    const std::size_t right = active[best_b];
    Node merged{left, right, nodes[left].leaves};
    merged.leaves.insert(merged.leaves.end(), nodes[right].leaves.begin(), nodes[right].leaves.end());
    const std::size_t id = nodes.size();
    const double wl = static_cast<double>(nodes[left].leaves.size());
    const double wr = static_cast<double>(nodes[right].leaves.size());
    nodes.push_back(std::move(merged));
    for (std::size_t other : active) {
      if (other == left || other == right) continue;
      const double v = (wl * d[other][left] + wr * d[other][right]) / (wl + wr);
      d[id][other] = d[other][id] = v;
    }
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    active[best_a] = id;  // smallest leaf of the merge is the left one's
  }
  return nodes;
}

class LeafOrdering {
 public:
  LeafOrdering(const std::vector<Node>& nodes, const std::vector<std::vector<double>>& dist)
      : nodes_(nodes), dist_(dist), n_(dist.size()) {
    cost_.assign(n_, std::vector<double>(n_, 0.0));
    via_left_.assign(n_, std::vector<std::size_t>(n_, kNone));
    via_right_.assign(n_, std::vector<std::size_t>(n_, kNone));
  }

  std::vector<std::size_t> solve() {
    if (n_ == 1) return {0};
    for (std::size_t id = n_; id < nodes_.size(); ++id) solve_node(id);
    const Node& root = nodes_.back();
    std::size_t bi = kNone, bj = kNone;
    double best = std::numeric_limits<double>::infinity();
    const auto& right_leaves = nodes_[root.right].leaves;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (i == j || !spans_root(i, j, right_leaves)) continue;
        if (cost_[i][j] < best) {
          best = cost_[i][j];
          bi = i;
          bj = j;
        }
      }
    }
    std::vector<std::size_t> order;
    emit(bi, bj, order);
    return order;
  }

 private:
  bool spans_root(std::size_t i, std::size_t j, const std::vector<std::size_t>& right_leaves) const {
    const bool i_right = std::find(right_leaves.begin(), right_leaves.end(), i) != right_leaves.end();
    const bool j_right = std::find(right_leaves.begin(), right_leaves.end(), j) != right_leaves.end();
    return i_right != j_right;
  }

  // Leaves of `subtree` on the far side from `leaf` (the leaf itself for a singleton).
  const std::vector<std::size_t>& far_side(std::size_t subtree, std::size_t leaf) const {
    const Node& node = nodes_[subtree];
    if (node.left == kNone) return node.leaves;
    const auto& l = nodes_[node.left].leaves;
    const bool in_left = std::find(l.begin(), l.end(), leaf) != l.end();
    return in_left ? nodes_[node.right].leaves : l;
  }

  void solve_node(std::size_t id) {
    const Node& node = nodes_[id];
    const auto& left = nodes_[node.left].leaves;
    const auto& right = nodes_[node.right].leaves;
    for (std::size_t i : left) {
      // best[m]: cheapest path from i through the left subtree ending next to right leaf m
      std::vector<double> best(n_, std::numeric_limits<double>::infinity());
      std::vector<std::size_t> best_k(n_, kNone);
      for (std::size_t k : far_side(node.left, i)) {
        for (std::size_t m : right) {
          const double v = cost_[i][k] + dist_[k][m];
          if (v < best[m]) {
            best[m] = v;
            best_k[m] = k;
          }
        }
      }
      for (std::size_t j : right) {
        double c = std::numeric_limits<double>::infinity();
        std::size_t arg_m = kNone;
        for (std::size_t m : far_side(node.right, j)) {
          const double v = best[m] + cost_[m][j];
          if (v < c) {
            c = v;
            arg_m = m;
          }
        }
        cost_[i][j] = cost_[j][i] = c;
        via_left_[i][j] = best_k[arg_m];
        via_right_[i][j] = arg_m;
        via_left_[j][i] = arg_m;
        via_right_[j][i] = best_k[arg_m];
      }
    }
  }

  void emit(std::size_t i, std::size_t j, std::vector<std::size_t>& order) const {
    if (i == j) {
      order.push_back(i);
      return;
    }
    emit(i, via_left_[i][j], order);
    emit(via_right_[i][j], j, order);
  }

  const std::vector<Node>& nodes_;
  const std::vector<std::vector<double>>& dist_;
  std::size_t n_;
  std::vector<std::vector<double>> cost_;
  std::vector<std::vector<std::size_t>> via_left_;
  std::vector<std::vector<std::size_t>> via_right_;
};

}  // namespace

std::vector<std::size_t> seriate(const std::vector<std::vector<double>>& vectors) {
  const std::size_t n = vectors.size();
  if (n == 0) return {};
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dist[i][j] = dist[j][i] = euclidean(vectors[i], vectors[j]);
  const auto nodes = cluster(dist);
  return LeafOrdering(nodes, dist).solve();
}

Reordering reorder_global(const MetricMatrix& matrix) {
  const std::size_t rows = matrix.rows();
  const std::size_t cols = matrix.cols();
  if (rows == 0 || cols == 0) throw Error(ErrorCode::EmptyInput, "cannot reorder an empty matrix");
  std::vector<std::vector<double>> row_vectors(rows, std::vector<double>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) row_vectors[r][c] = matrix.at(r, c);

  Reordering out;
  out.row_perm = seriate(row_vectors);
  if (matrix.symmetric) {
    out.col_perm = out.row_perm;
    return out;
  }
  std::vector<std::vector<double>> col_vectors(cols, std::vector<double>(rows));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) col_vectors[c][r] = matrix.at(r, c);
  out.col_perm = seriate(col_vectors);
  return out;
}

std::vector<std::size_t> sort_local(const MetricMatrix& matrix, Axis axis, std::size_t key_index, Direction direction) {
  const std::size_t key_limit = axis == Axis::Row ? matrix.rows() : matrix.cols();
  if (key_index >= key_limit)
    throw Error(ErrorCode::IndexOutOfRange, "key " + std::to_string(key_index) + " >= " + std::to_string(key_limit));
  const std::size_t count = axis == Axis::Row ? matrix.cols() : matrix.rows();
  auto key = [&](std::size_t i) { return axis == Axis::Row ? matrix.at(key_index, i) : matrix.at(i, key_index); };
  std::vector<std::size_t> perm(count);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  if (direction == Direction::Asc)
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  else
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return key(a) > key(b); });
  return perm;
}

void apply(MetricMatrix& matrix, const Reordering& reordering) {
  if (!is_permutation_of(reordering.row_perm, matrix.rows()) || !is_permutation_of(reordering.col_perm, matrix.cols()))
    throw Error(ErrorCode::InvalidArgument, "ordering is not a permutation of the matrix axes");
  matrix.row_order = reordering.row_perm;
  matrix.col_order = reordering.col_perm;
}

bool is_permutation_of(const std::vector<std::size_t>& perm, std::size_t n) {
  if (perm.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (auto p : perm) {
    if (p >= n || seen[p]) return false;
    seen[p] = true;
  }
  return true;
}

}  // namespace gazekit
