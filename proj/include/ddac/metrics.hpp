#pragma once

#include <vector>

#include "ddac/matrix.hpp"

namespace ddac {

/// Best one-to-one cluster-to-class matching fraction (Hungarian assignment on
/// the contingency matrix, zero-padded to square when cluster counts differ).
double clustering_accuracy(const std::vector<int>& pred,
                           const std::vector<int>& truth);

/// Mutual information normalized by the arithmetic mean of the entropies.
/// Two single-cluster labelings score 1.
double normalized_mutual_information(const std::vector<int>& pred,
                                     const std::vector<int>& truth);

/// Pair-counting adjusted Rand index; two trivial identical partitions score 1.
double adjusted_rand_index(const std::vector<int>& pred,
                           const std::vector<int>& truth);

/// Min-cost perfect assignment on a square cost matrix; returns the column
/// assigned to each row. O(n^3).
std::vector<int> hungarian_assignment(const Matrix& cost);

}  // namespace ddac
