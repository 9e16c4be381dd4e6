#include "ddac/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddac/rng.hpp"

namespace ddac {

namespace {

double sqdist_row(const double* a, const double* b, std::size_t d) {
  double acc = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    const double diff = a[c] - b[c];
    acc += diff * diff;
  }
  return acc;
}

// k-means++ seeding: first center uniform, then proportional to squared
// distance from the nearest already-chosen center.
Matrix seed_centroids(const Matrix& points, int k, RngStream& rng) {
  const std::size_t n = points.rows(), d = points.cols();
  Matrix centroids(static_cast<std::size_t>(k), d);
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  std::size_t chosen = rng.uniform_index(n);
  for (int c = 0; c < k; ++c) {
    for (std::size_t j = 0; j < d; ++j) centroids(c, j) = points(chosen, j);
    if (c + 1 == k) break;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      min_dist[i] = std::min(min_dist[i],
                             sqdist_row(points.row(i), centroids.row(c), d));
      total += min_dist[i];
    }
    if (total == 0.0) {
      chosen = rng.uniform_index(n);  // only duplicates left
      continue;
    }
    double target = rng.uniform() * total;
    chosen = n - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += min_dist[i];
      if (acc > target) {
        chosen = i;
        break;
      }
    }
  }
  return centroids;
}

struct LloydRun {
  Matrix centroids;
  std::vector<int> labels;
  double inertia = 0.0;
  std::vector<double> trace;  // inertia after each iteration
};

double assignment_inertia(const Matrix& points, const Matrix& centroids,
                          const std::vector<int>& labels) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i)
    inertia += sqdist_row(points.row(i), centroids.row(labels[i]), points.cols());
  return inertia;
}

LloydRun lloyd(const Matrix& points, int k, int max_iters, RngStream& rng,
               bool keep_trace) {
  const std::size_t n = points.rows(), d = points.cols();
  LloydRun run;
  run.centroids = seed_centroids(points, k, rng);
  run.labels.assign(n, -1);
  std::vector<std::size_t> counts(k);

  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_dist = sqdist_row(points.row(i), run.centroids.row(0), d);
      for (int c = 1; c < k; ++c) {
        const double dist = sqdist_row(points.row(i), run.centroids.row(c), d);
        if (dist < best_dist) {
          best_dist = dist;
          best = c;
        }
      }
      if (run.labels[i] != best) {
        run.labels[i] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    std::fill(counts.begin(), counts.end(), 0);
    Matrix sums(static_cast<std::size_t>(k), d);
    for (std::size_t i = 0; i < n; ++i) {
      const int c = run.labels[i];
      ++counts[c];
      const double* xi = points.row(i);
      double* sc = sums.row(c);
      for (std::size_t j = 0; j < d; ++j) sc[j] += xi[j];
    }
    // empty-cluster repair: move the point farthest from its centroid
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      std::size_t farthest = 0;
      double far_dist = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[run.labels[i]] <= 1) continue;
        const double dist =
            sqdist_row(points.row(i), run.centroids.row(run.labels[i]), d);
        if (dist > far_dist) {
          far_dist = dist;
          farthest = i;
        }
      }
      const int old = run.labels[farthest];
      --counts[old];
      ++counts[c];
      run.labels[farthest] = c;
      const double* xi = points.row(farthest);
      for (std::size_t j = 0; j < d; ++j) {
        sums(old, j) -= xi[j];
        sums(c, j) += xi[j];
      }
      changed = true;
    }
    for (int c = 0; c < k; ++c)
      for (std::size_t j = 0; j < d; ++j)
        run.centroids(c, j) = sums(c, j) / static_cast<double>(counts[c]);
    if (keep_trace)
      run.trace.push_back(assignment_inertia(points, run.centroids, run.labels));
    if (!changed) break;
  }

  run.inertia = assignment_inertia(points, run.centroids, run.labels);
  return run;
}

}  // namespace

KMeansResult kmeans_fit(const Matrix& points, int k, int restarts, int max_iters,
                        std::uint64_t seed,
                        std::vector<std::vector<double>>* inertia_trace) {
  if (points.rows() == 0) throw Error("kmeans_fit: empty input");
  if (k < 1) throw Error("kmeans_fit: k must be at least 1");
  if (points.rows() < static_cast<std::size_t>(k))
    throw Error("kmeans_fit: n=" + std::to_string(points.rows()) +
                " is smaller than k=" + std::to_string(k));
  if (restarts < 1) throw Error("kmeans_fit: restarts must be at least 1");

  RngStream rng(seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  if (inertia_trace) inertia_trace->clear();
  for (int r = 0; r < restarts; ++r) {
    LloydRun run = lloyd(points, k, max_iters, rng, inertia_trace != nullptr);
    if (inertia_trace) inertia_trace->push_back(std::move(run.trace));
    if (run.inertia < best.inertia) {
      best.centroids = std::move(run.centroids);
      best.labels = std::move(run.labels);
      best.inertia = run.inertia;
    }
  }
  return best;
}

}  // namespace ddac
