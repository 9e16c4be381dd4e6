#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddac/matrix.hpp"

namespace ddac {

struct DatasetBundle {
  Matrix features;
  std::optional<std::vector<int>> labels;

  std::size_t sample_count() const { return features.rows(); }
};

/// CSV with one sample per row and numeric columns. A header row is optional;
/// when present, a final column named `label` is split off as ground truth.
/// Parse failures carry the 1-based line number.
DatasetBundle load_features(const std::string& path);

/// Writes x0..x{d-1}[,label] with 17-significant-digit values (exact
/// double round-trip).
void write_features(const std::string& path, const Matrix& features,
                    const std::vector<int>* labels = nullptr);

/// Label CSV with header `index,cluster`, one row per sample in index order.
void write_labels(const std::string& path, const std::vector<int>& labels);

/// Reads labels from an `index,cluster` file or from a dataset CSV whose
/// final column is `label`.
std::vector<int> load_labels(const std::string& path);

}  // namespace ddac
