#pragma once

#include <cstdint>
#include <vector>

#include "ddac/matrix.hpp"

namespace ddac {

struct KMeansResult {
  Matrix centroids;         // k x d
  std::vector<int> labels;  // length n, values in [0, k)
  double inertia = 0.0;     // sum of squared distances to assigned centroids
};

/// Best-inertia result over `restarts` independent k-means++-seeded Lloyd runs.
/// Each run stops when assignments no longer change or max_iters is reached.
/// Ties between restarts go to the lowest restart index. When given,
/// `inertia_trace` receives the per-iteration inertia of every run
/// concatenated in restart order (non-increasing within a run).
KMeansResult kmeans_fit(const Matrix& points, int k, int restarts = 20,
                        int max_iters = 300, std::uint64_t seed = 0,
                        std::vector<std::vector<double>>* inertia_trace = nullptr);

}  // namespace ddac
