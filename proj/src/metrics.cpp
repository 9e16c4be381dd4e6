#include "ddac/metrics.hpp"

#include <cmath>
#include <limits>

namespace ddac {

namespace {

struct Contingency {
  std::size_t n = 0;
  std::size_t k_pred = 0, k_truth = 0;
  Matrix counts;  // k_pred x k_truth
  std::vector<double> pred_sizes, truth_sizes;
};

Contingency contingency(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size())
    throw Error("metrics: label vectors differ in length, " +
                std::to_string(pred.size()) + " vs " + std::to_string(truth.size()));
  if (pred.empty()) throw Error("metrics: empty label vectors");
  int kp = 0, kt = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] < 0 || truth[i] < 0)
      throw Error("metrics: labels must be non-negative");
    kp = std::max(kp, pred[i] + 1);
    kt = std::max(kt, truth[i] + 1);
  }
  Contingency c;
  c.n = pred.size();
  c.k_pred = static_cast<std::size_t>(kp);
  c.k_truth = static_cast<std::size_t>(kt);
  c.counts = Matrix(c.k_pred, c.k_truth);
  c.pred_sizes.assign(c.k_pred, 0.0);
  c.truth_sizes.assign(c.k_truth, 0.0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    c.counts(pred[i], truth[i]) += 1.0;
    c.pred_sizes[pred[i]] += 1.0;
    c.truth_sizes[truth[i]] += 1.0;
  }
  return c;
}

double comb2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

std::vector<int> hungarian_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols())
    throw ShapeError("hungarian_assignment: matrix must be square, got " +
                     cost.shape_str());
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1), v(n + 1), minv(n + 1);
  std::vector<int> p(n + 1), way(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n);
  for (int j = 1; j <= n; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

double clustering_accuracy(const std::vector<int>& pred,
                           const std::vector<int>& truth) {
  const Contingency c = contingency(pred, truth);
  const std::size_t s = std::max(c.k_pred, c.k_truth);
  Matrix cost(s, s);
  for (std::size_t i = 0; i < c.k_pred; ++i)
    for (std::size_t j = 0; j < c.k_truth; ++j) cost(i, j) = -c.counts(i, j);
  const std::vector<int> assign = hungarian_assignment(cost);
  double matched = 0.0;
  for (std::size_t i = 0; i < c.k_pred; ++i) {
    const std::size_t j = static_cast<std::size_t>(assign[i]);
    if (j < c.k_truth) matched += c.counts(i, j);
  }
  return matched / static_cast<double>(c.n);
}

double normalized_mutual_information(const std::vector<int>& pred,
                                     const std::vector<int>& truth) {
  const Contingency c = contingency(pred, truth);
  const double n = static_cast<double>(c.n);
  double h_pred = 0.0, h_truth = 0.0, mi = 0.0;
  for (double s : c.pred_sizes)
    if (s > 0) h_pred -= s / n * std::log(s / n);
  for (double s : c.truth_sizes)
    if (s > 0) h_truth -= s / n * std::log(s / n);
  for (std::size_t i = 0; i < c.k_pred; ++i)
    for (std::size_t j = 0; j < c.k_truth; ++j) {
      const double nij = c.counts(i, j);
      if (nij > 0)
        mi += nij / n *
              std::log(n * nij / (c.pred_sizes[i] * c.truth_sizes[j]));
    }
  const double mean_entropy = 0.5 * (h_pred + h_truth);
  if (mean_entropy == 0.0) return 1.0;  // both labelings are single-cluster
  return mi / mean_entropy;
}

double adjusted_rand_index(const std::vector<int>& pred,
                           const std::vector<int>& truth) {
  const Contingency c = contingency(pred, truth);
  if (c.n < 2) throw Error("adjusted_rand_index: need at least 2 samples");
  double sum_cells = 0.0, sum_pred = 0.0, sum_truth = 0.0;
  for (std::size_t i = 0; i < c.k_pred; ++i)
    for (std::size_t j = 0; j < c.k_truth; ++j) sum_cells += comb2(c.counts(i, j));
  for (double s : c.pred_sizes) sum_pred += comb2(s);
  for (double s : c.truth_sizes) sum_truth += comb2(s);
  const double expected = sum_pred * sum_truth / comb2(static_cast<double>(c.n));
  const double max_index = 0.5 * (sum_pred + sum_truth);
  if (max_index == expected) return 1.0;  // both partitions trivial
  return (sum_cells - expected) / (max_index - expected);
}

}  // namespace ddac
