#include "ddac/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace ddac {

Matrix SparseCsr::to_dense() const {
  Matrix dense(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e)
      dense(i, col[e]) = val[e];
  return dense;
}

std::vector<EdgePair> SparseAdjacency::edge_pairs() const {
  std::vector<EdgePair> pairs;
  for (std::size_t i = 0; i < csr.n; ++i)
    for (std::size_t e = csr.row_ptr[i]; e < csr.row_ptr[i + 1]; ++e)
      if (i < csr.col[e]) pairs.push_back({i, csr.col[e], csr.val[e]});
  return pairs;
}

SparseAdjacency adjacency_from_pairs(std::size_t n,
                                     const std::vector<EdgePair>& pairs) {
  // directed entries (u,v) and (v,u) per undirected pair
  std::vector<EdgePair> entries;
  entries.reserve(pairs.size() * 2);
  for (const EdgePair& p : pairs) {
    if (p.u >= n || p.v >= n)
      throw Error("adjacency: node index out of range (n=" + std::to_string(n) +
                  ", edge " + std::to_string(p.u) + "-" + std::to_string(p.v) + ")");
    if (p.u == p.v)
      throw Error("adjacency: self-loop at node " + std::to_string(p.u));
    if (!(p.w >= 0.0) || !std::isfinite(p.w))
      throw Error("adjacency: edge weight must be finite and non-negative");
    entries.push_back(p);
    entries.push_back({p.v, p.u, p.w});
  }
  std::sort(entries.begin(), entries.end(), [](const EdgePair& a, const EdgePair& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].u == entries[i - 1].u && entries[i].v == entries[i - 1].v)
      throw Error("adjacency: duplicate edge " + std::to_string(entries[i].u) + "-" +
                  std::to_string(entries[i].v));

  SparseAdjacency adj;
  adj.csr.n = n;
  adj.csr.row_ptr.assign(n + 1, 0);
  adj.csr.col.reserve(entries.size());
  adj.csr.val.reserve(entries.size());
  for (const EdgePair& e : entries) ++adj.csr.row_ptr[e.u + 1];
  for (std::size_t i = 0; i < n; ++i) adj.csr.row_ptr[i + 1] += adj.csr.row_ptr[i];
  for (const EdgePair& e : entries) {
    adj.csr.col.push_back(static_cast<std::uint32_t>(e.v));
    adj.csr.val.push_back(e.w);
  }
  return adj;
}

SparseAdjacency knn_graph(const Matrix& x, int k_neighbors) {
  const std::size_t n = x.rows(), d = x.cols();
  if (k_neighbors < 1) throw Error("knn_graph: k_neighbors must be at least 1");
  if (n <= static_cast<std::size_t>(k_neighbors))
    throw Error("knn_graph: need more than k_neighbors=" +
                std::to_string(k_neighbors) + " rows, got " + std::to_string(n));

  std::set<std::pair<std::size_t, std::size_t>> selected;
  std::vector<std::pair<double, std::size_t>> cand(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t m = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double acc = 0.0;
      const double* xi = x.row(i);
      const double* xj = x.row(j);
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = xi[c] - xj[c];
        acc += diff * diff;
      }
      cand[m++] = {acc, j};
    }
    std::partial_sort(cand.begin(), cand.begin() + k_neighbors, cand.end());
    for (int c = 0; c < k_neighbors; ++c) {
      const std::size_t j = cand[c].second;
      selected.insert({std::min(i, j), std::max(i, j)});
    }
  }
  std::vector<EdgePair> pairs;
  pairs.reserve(selected.size());
  for (const auto& [u, v] : selected) pairs.push_back({u, v, 1.0});
  return adjacency_from_pairs(n, pairs);
}

NormalizedAdjacency normalize_adjacency(const SparseAdjacency& a) {
  if (!a.symmetric) throw Error("normalize_adjacency: adjacency must be symmetric");
  const std::size_t n = a.csr.n;
  std::vector<double> inv_sqrt_deg(n);
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 1.0;  // self-loop
    for (std::size_t e = a.csr.row_ptr[i]; e < a.csr.row_ptr[i + 1]; ++e)
      deg += a.csr.val[e];
    inv_sqrt_deg[i] = 1.0 / std::sqrt(deg);
  }
  NormalizedAdjacency norm;
  norm.csr.n = n;
  norm.csr.row_ptr.assign(n + 1, 0);
  norm.csr.col.reserve(a.csr.nnz() + n);
  norm.csr.val.reserve(a.csr.nnz() + n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t e = a.csr.row_ptr[i];
    const std::size_t end = a.csr.row_ptr[i + 1];
    bool self_written = false;
    auto push = [&](std::uint32_t j, double w) {
      norm.csr.col.push_back(j);
      norm.csr.val.push_back(w);
    };
    for (; e < end; ++e) {
      const std::uint32_t j = a.csr.col[e];
      if (!self_written && j > i) {
        push(static_cast<std::uint32_t>(i), inv_sqrt_deg[i] * inv_sqrt_deg[i]);
        self_written = true;
      }
      push(j, a.csr.val[e] * inv_sqrt_deg[i] * inv_sqrt_deg[j]);
    }
    if (!self_written)
      push(static_cast<std::uint32_t>(i), inv_sqrt_deg[i] * inv_sqrt_deg[i]);
    norm.csr.row_ptr[i + 1] = norm.csr.col.size();
  }
  return norm;
}

Matrix spmm(const SparseCsr& s, const Matrix& m) {
  if (s.n != m.rows())
    throw ShapeError("spmm: sparse " + std::to_string(s.n) + "x" +
                     std::to_string(s.n) + " vs dense " + m.shape_str());
  Matrix out(s.n, m.cols());
  for (std::size_t i = 0; i < s.n; ++i) {
    double* oi = out.row(i);
    for (std::size_t e = s.row_ptr[i]; e < s.row_ptr[i + 1]; ++e) {
      const double w = s.val[e];
      const double* mj = m.row(s.col[e]);
      for (std::size_t c = 0; c < m.cols(); ++c) oi[c] += w * mj[c];
    }
  }
  return out;
}

Var spmm(Tape& tape, const NormalizedAdjacency& s, Var m) {
  Matrix out = spmm(s.csr, m.value());
  const std::size_t im = tape.index_of(m, "spmm");
  const SparseCsr* csr = &s.csr;  // adjacency outlives the tape by contract
  return tape.emplace(
      std::move(out), {im},
      [im, csr](Tape& t, std::size_t self) {
        const Matrix& g = t.grad_of(self);
        Matrix& gm = t.grad_of(im);
        // dM += S^T g, iterated as scatter over the CSR rows
        for (std::size_t i = 0; i < csr->n; ++i) {
          const double* gi = g.row(i);
          for (std::size_t e = csr->row_ptr[i]; e < csr->row_ptr[i + 1]; ++e) {
            const double w = csr->val[e];
            double* gj = gm.row(csr->col[e]);
            for (std::size_t c = 0; c < g.cols(); ++c) gj[c] += w * gi[c];
          }
        }
      },
      "spmm");
}

SparseAdjacency read_edge_list(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw Error("read_edge_list: cannot open " + path);
  std::vector<EdgePair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::size_t u = 0, v = 0;
    char extra = 0;
    if (std::sscanf(line.c_str(), "%zu %zu %c", &u, &v, &extra) != 2)
      throw ParseError("edge list line " + std::to_string(line_no) +
                       ": expected `u<TAB>v`, got: " + line);
    pairs.push_back({u, v, 1.0});
  }
  try {
    return adjacency_from_pairs(n, pairs);
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_edge_list(const SparseAdjacency& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("write_edge_list: cannot open " + path);
  for (const EdgePair& e : a.edge_pairs())
    out << e.u << '\t' << e.v << '\n';
  if (!out) throw Error("write_edge_list: write failed for " + path);
}

}  // namespace ddac
