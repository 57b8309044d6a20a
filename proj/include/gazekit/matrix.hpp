#pragma once

#include <cstddef>
#include <vector>

#include "gazekit/model.hpp"

namespace gazekit {

struct Reordering {
  std::vector<std::size_t> row_perm;
  std::vector<std::size_t> col_perm;
};

/// Seriation by average-linkage agglomerative clustering on Euclidean row
/// (and column) distances, followed by optimal leaf ordering. Symmetric
/// matrices get one shared permutation. Ties go to the lower original index.
Reordering reorder_global(const MetricMatrix& matrix);

/// Leaf order for the given feature vectors (all the same length).
std::vector<std::size_t> seriate(const std::vector<std::vector<double>>& vectors);

enum class Axis { Row, Col };
enum class Direction { Asc, Desc };

/// Stable sort of the opposite axis by the values in canonical row (Axis::Row)
/// or column `key_index`. Throws IndexOutOfRange.
std::vector<std::size_t> sort_local(const MetricMatrix& matrix, Axis axis, std::size_t key_index, Direction direction);

/// Stores the permutations as the matrix display order.
void apply(MetricMatrix& matrix, const Reordering& reordering);

/// True when `perm` is a bijection on [0, n).
bool is_permutation_of(const std::vector<std::size_t>& perm, std::size_t n);

}  // namespace gazekit
