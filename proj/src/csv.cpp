#include "ddac/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace ddac {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string cell = line.substr(start, comma == std::string::npos
                                              ? std::string::npos
                                              : comma - start);
    const std::size_t from = cell.find_first_not_of(" \t\r");
    if (from == std::string::npos) {
      cell.clear();
    } else {
      const std::size_t to = cell.find_last_not_of(" \t\r");
      cell = cell.substr(from, to - from + 1);
    }
    cells.push_back(std::move(cell));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_double(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = first + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

int parse_label(const std::string& cell, std::size_t line_no) {
  double value = 0.0;
  if (!parse_double(cell, value) || value < 0.0 ||
      value != std::floor(value) || value > 1e9)
    throw ParseError("line " + std::to_string(line_no) +
                     ": label must be a non-negative integer, got '" + cell + "'");
  return static_cast<int>(value);
}

struct CsvTable {
  std::vector<std::string> header;  // empty when headerless
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

CsvTable read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (first) {
      first = false;
      // header iff some cell is not numeric
      bool all_numeric = true;
      double ignored;
      for (const std::string& c : cells)
        if (!parse_double(c, ignored)) all_numeric = false;
      if (!all_numeric) {
        table.header = std::move(cells);
        continue;
      }
    }
    table.rows.push_back(std::move(cells));
    table.line_numbers.push_back(line_no);
  }
  return table;
}

}  // namespace

DatasetBundle load_features(const std::string& path) {
  const CsvTable table = read_table(path);
  if (table.rows.empty()) throw ParseError(path + ": empty dataset");
  const std::size_t width = table.header.empty() ? table.rows.front().size()
                                                 : table.header.size();
  const bool has_label = !table.header.empty() && table.header.back() == "label";
  const std::size_t feature_width = has_label ? width - 1 : width;
  if (feature_width == 0) throw ParseError(path + ": no feature columns");

  DatasetBundle bundle;
  bundle.features = Matrix(table.rows.size(), feature_width);
  if (has_label) bundle.labels.emplace();

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& cells = table.rows[r];
    const std::size_t line_no = table.line_numbers[r];
    if (cells.size() != width)
      throw ParseError(path + " line " + std::to_string(line_no) + ": expected " +
                       std::to_string(width) + " columns, got " +
                       std::to_string(cells.size()));
    for (std::size_t c = 0; c < feature_width; ++c) {
      double value = 0.0;
      if (!parse_double(cells[c], value))
        throw ParseError(path + " line " + std::to_string(line_no) +
                         ": non-numeric field '" + cells[c] + "'");
      bundle.features(r, c) = value;
    }
    if (has_label) bundle.labels->push_back(parse_label(cells.back(), line_no));
  }
  return bundle;
}

void write_features(const std::string& path, const Matrix& features,
                    const std::vector<int>* labels) {
  if (labels && labels->size() != features.rows())
    throw Error("write_features: label count does not match row count");
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  for (std::size_t c = 0; c < features.cols(); ++c)
    out << (c ? ",x" : "x") << c;
  if (labels) out << ",label";
  out << '\n';
  char buf[64];
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (std::size_t c = 0; c < features.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", features(r, c));
      if (c) out << ',';
      out << buf;
    }
    if (labels) out << ',' << (*labels)[r];
    out << '\n';
  }
  if (!out) throw Error("write failed for " + path);
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << "index,cluster\n";
  for (std::size_t i = 0; i < labels.size(); ++i)
    out << i << ',' << labels[i] << '\n';
  if (!out) throw Error("write failed for " + path);
}

std::vector<int> load_labels(const std::string& path) {
  const CsvTable table = read_table(path);
  if (table.rows.empty()) throw ParseError(path + ": empty label file");
  if (table.header.size() == 2 && table.header[0] == "index" &&
      table.header[1] == "cluster") {
    std::vector<int> labels;
    labels.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      if (table.rows[r].size() != 2)
        throw ParseError(path + " line " + std::to_string(table.line_numbers[r]) +
                         ": expected 2 columns");
      labels.push_back(parse_label(table.rows[r][1], table.line_numbers[r]));
    }
    return labels;
  }
  const DatasetBundle bundle = load_features(path);
  if (!bundle.labels)
    throw ParseError(path +
                     ": expected an `index,cluster` file or a dataset with a "
                     "`label` column");
  return *bundle.labels;
}

}  // namespace ddac
