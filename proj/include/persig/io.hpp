#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "persig/barcode.hpp"
#include "persig/common.hpp"
#include "persig/kernel.hpp"
#include "persig/path.hpp"

namespace persig {

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

/// Point cloud CSV: one point per row, comma-separated decimal columns,
/// `#` comment lines allowed.
inline std::vector<std::vector<double>> read_point_cloud_csv(std::istream& in) {
  std::vector<std::vector<double>> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) {
      double v = 0.0;
      if (!detail::parse_csv_cell(cell, v))
        throw std::runtime_error("point cloud: bad number on line " + std::to_string(line_no));
      row.push_back(v);
    }
    if (row.empty())
      throw std::runtime_error("point cloud: empty row on line " + std::to_string(line_no));
    if (!points.empty() && row.size() != points.front().size())
      throw std::runtime_error("point cloud: ragged row on line " + std::to_string(line_no));
    points.push_back(std::move(row));
  }
  if (points.empty()) throw std::runtime_error("point cloud: no data rows");
  return points;
}

inline void write_point_cloud_csv(const std::vector<std::vector<double>>& points,
                                  std::ostream& out) {
  out << "# persig points v1\n";
  for (const auto& row : points) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  if (!out) throw std::runtime_error("point cloud: write failure");
}

/// Square distance-matrix CSV, same comment conventions.
inline std::vector<std::vector<double>> read_square_matrix_csv(std::istream& in) {
  const auto rows = read_point_cloud_csv(in);
  if (rows.size() != rows.front().size())
    throw std::runtime_error("distance matrix: not square");
  return rows;
}

/// Manifest: `path,label` rows relative to the manifest directory.
struct ManifestEntry {
  std::string path;
  int label = 0;
};

inline std::vector<ManifestEntry> read_manifest(const std::string& manifest_path) {
  std::ifstream in = open_input(manifest_path);
  const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find_last_of(',');
    if (comma == std::string::npos)
      throw std::runtime_error("manifest: missing label on line " + std::to_string(line_no));
    ManifestEntry entry;
    entry.path = (base / line.substr(0, comma)).string();
    try {
      entry.label = std::stoi(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw std::runtime_error("manifest: bad label on line " + std::to_string(line_no));
    }
    entries.push_back(std::move(entry));
  }
  if (entries.empty()) throw std::runtime_error("manifest: no entries in " + manifest_path);
  return entries;
}

inline void write_manifest(const std::vector<std::pair<std::string, int>>& entries,
                           std::ostream& out) {
  out << "# persig manifest v1\n";
  for (const auto& [path, label] : entries) out << path << ',' << label << "\n";
  if (!out) throw std::runtime_error("manifest: write failure");
}

inline void write_gram_csv(const GramMatrix& g, std::ostream& out) {
  out << "# persig gram v1\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) out << (j ? "," : "") << format_double(g(i, j));
    out << "\n";
  }
  if (!out) throw std::runtime_error("gram: write failure");
}

/// Plain-text key=value sidecar describing how a Gram matrix was produced.
inline void write_gram_metadata(const GramMatrix& g, std::ostream& out) {
  const GramMetadata& meta = g.metadata();
  out << "format=persig-gram-meta-v1\n";
  out << "size=" << g.size() << "\n";
  out << "embedding=" << meta.embedding << "\n";
  out << "dim=" << meta.dim << "\n";
  out << "M=" << meta.M << "\n";
  out << "tau=" << meta.tau << "\n";
  out << "lags=";
  for (std::size_t i = 0; i < meta.lags.size(); ++i)
    out << (i ? ";" : "") << format_double(meta.lags[i]);
  out << "\n";
  out << "kappa=" << meta.kappa << "\n";
  out << "sigma=" << format_double(meta.sigma) << "\n";
  out << "envelope_N=" << meta.envelope_N << "\n";
  if (!out) throw std::runtime_error("gram metadata: write failure");
}

}  // namespace persig
