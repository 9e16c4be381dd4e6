#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddac/matrix.hpp"
#include "ddac/tape.hpp"

namespace ddac {

struct EdgePair {
  std::size_t u = 0, v = 0;
  double w = 1.0;
};

/// Symmetric sparse matrix in CSR form with sorted, duplicate-free columns.
struct SparseCsr {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr;    // n + 1
  std::vector<std::uint32_t> col;
  std::vector<double> val;

  std::size_t nnz() const { return col.size(); }
  Matrix to_dense() const;
};

struct SparseAdjacency {
  SparseCsr csr;
  bool symmetric = true;

  std::size_t node_count() const { return csr.n; }
  /// Undirected edge list, each pair once with u < v.
  std::vector<EdgePair> edge_pairs() const;
};

/// D^{-1/2} (A + I) D^{-1/2} with D the degree matrix of A + I.
struct NormalizedAdjacency {
  SparseCsr csr;
  std::size_t node_count() const { return csr.n; }
};

/// Builds a symmetric adjacency from undirected pairs. Throws on out-of-range
/// indices, self-loops, or duplicate pairs.
SparseAdjacency adjacency_from_pairs(std::size_t n, const std::vector<EdgePair>& pairs);

/// Union-symmetrized k-nearest-neighbor graph on rows of x (Euclidean,
/// binary weights, self excluded, distance ties to the lower index).
SparseAdjacency knn_graph(const Matrix& x, int k_neighbors);

NormalizedAdjacency normalize_adjacency(const SparseAdjacency& a);

Matrix spmm(const SparseCsr& s, const Matrix& m);
inline Matrix spmm(const SparseAdjacency& s, const Matrix& m) { return spmm(s.csr, m); }
inline Matrix spmm(const NormalizedAdjacency& s, const Matrix& m) { return spmm(s.csr, m); }

/// Tape node for S * M; the gradient flows to the dense operand only.
Var spmm(Tape& tape, const NormalizedAdjacency& s, Var m);

/// Edge-list file: one `u<TAB>v` per line, 0-based ids, undirected pairs listed
/// once; blank lines and `#` comments ignored.
SparseAdjacency read_edge_list(const std::string& path, std::size_t n);
void write_edge_list(const SparseAdjacency& a, const std::string& path);

}  // namespace ddac
