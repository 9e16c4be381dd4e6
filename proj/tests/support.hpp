#pragma once

// Shared helpers for the test suites: synthetic datasets and small matrix
// utilities. Test-only code; not part of the library.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ddac/graph.hpp"
#include "ddac/matrix.hpp"
#include "ddac/rng.hpp"

namespace testsupport {

struct LabeledData {
  ddac::Matrix x;
  std::vector<int> labels;
};

/// k isotropic Gaussian blobs in d dimensions with centers `separation` apart
/// along random directions, unit within-blob sigma.
inline LabeledData make_blobs(std::size_t n, std::size_t d, int k,
                              double separation, std::uint64_t seed) {
  ddac::RngStream rng(seed);
  ddac::Matrix centers(static_cast<std::size_t>(k), d);
  for (double& c : centers.values()) c = rng.normal();
  // rescale so centers sit `separation` from the origin on average
  for (int c = 0; c < k; ++c) {
    double norm = 0.0;
    for (std::size_t j = 0; j < d; ++j) norm += centers(c, j) * centers(c, j);
    norm = std::sqrt(norm);
    for (std::size_t j = 0; j < d; ++j)
      centers(c, j) *= separation / (norm > 0 ? norm : 1.0);
  }
  LabeledData data;
  data.x = ddac::Matrix(n, d);
  data.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int c = static_cast<int>(i % static_cast<std::size_t>(k));
    data.labels[i] = c;
    for (std::size_t j = 0; j < d; ++j)
      data.x(i, j) = centers(c, j) + rng.normal();
  }
  return data;
}

/// Two concentric 2-d rings lifted into `ambient` dimensions by a random
/// rotation, plus isotropic noise. Label 0 = inner ring, 1 = outer ring.
inline LabeledData make_rings(std::size_t n_per_ring, double r_inner,
                              double r_outer, double ring_sigma,
                              std::size_t ambient, double ambient_sigma,
                              std::uint64_t seed) {
  ddac::RngStream rng(seed);
  // random 2 x ambient frame with orthonormal rows (Gram-Schmidt)
  std::vector<double> u(ambient), v(ambient);
  for (auto& x : u) x = rng.normal();
  for (auto& x : v) x = rng.normal();
  double nu = 0.0;
  for (double x : u) nu += x * x;
  nu = std::sqrt(nu);
  for (auto& x : u) x /= nu;
  double dot = 0.0;
  for (std::size_t j = 0; j < ambient; ++j) dot += u[j] * v[j];
  for (std::size_t j = 0; j < ambient; ++j) v[j] -= dot * u[j];
  double nv = 0.0;
  for (double x : v) nv += x * x;
  nv = std::sqrt(nv);
  for (auto& x : v) x /= nv;

  LabeledData data;
  data.x = ddac::Matrix(2 * n_per_ring, ambient);
  data.labels.resize(2 * n_per_ring);
  for (std::size_t i = 0; i < 2 * n_per_ring; ++i) {
    const bool outer = i >= n_per_ring;
    data.labels[i] = outer ? 1 : 0;
    const double radius = (outer ? r_outer : r_inner) + ring_sigma * rng.normal();
    const double theta = rng.uniform(0.0, 6.283185307179586);
    const double a = radius * std::cos(theta);
    const double b = radius * std::sin(theta);
    for (std::size_t j = 0; j < ambient; ++j)
      data.x(i, j) = a * u[j] + b * v[j] + ambient_sigma * rng.normal();
  }
  return data;
}

struct SbmData {
  ddac::Matrix x;
  std::vector<int> labels;
  ddac::SparseAdjacency adjacency;
};

/// Stochastic block model with equal-size blocks; features are one-hot block
/// indicators plus Gaussian noise.
inline SbmData make_sbm(int blocks, std::size_t block_size, double p_in,
                        double p_out, double noise_sigma, std::uint64_t seed) {
  ddac::RngStream rng(seed);
  const std::size_t n = blocks * block_size;
  SbmData data;
  data.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    data.labels[i] = static_cast<int>(i / block_size);
  data.x = ddac::Matrix(n, static_cast<std::size_t>(blocks));
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < blocks; ++j)
      data.x(i, j) = (data.labels[i] == j ? 1.0 : 0.0) + noise_sigma * rng.normal();
  }
  std::vector<ddac::EdgePair> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = data.labels[i] == data.labels[j] ? p_in : p_out;
      if (rng.uniform() < p) pairs.push_back({i, j, 1.0});
    }
  data.adjacency = ddac::adjacency_from_pairs(n, pairs);
  return data;
}

inline ddac::Matrix random_matrix(std::size_t rows, std::size_t cols, double lo,
                                  double hi, ddac::RngStream& rng) {
  ddac::Matrix m(rows, cols);
  for (double& x : m.values()) x = rng.uniform(lo, hi);
  return m;
}

/// Fresh directory under the system temp root; removed on destruction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("ddac_test_" + tag + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace testsupport
