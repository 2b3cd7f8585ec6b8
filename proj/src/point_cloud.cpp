#include "locov/point_cloud.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>

#include "locov/errors.hpp"

namespace locov {

PointCloud::PointCloud(Eigen::MatrixXd coords) : coords_(std::move(coords)) {
  if (coords_.rows() < 1 || coords_.cols() < 1)
    throw InvalidInput("point cloud must have at least one point and one coordinate");
  if (!coords_.allFinite()) throw InvalidInput("point cloud coordinates must be finite");
}

namespace {

double parse_cell(const std::string& cell, long line, long column) {
  // Trim spaces and a trailing CR; the payload itself must be one float.
  std::size_t b = cell.find_first_not_of(" \t\r");
  std::size_t e = cell.find_last_not_of(" \t\r");
  if (b == std::string::npos)
    throw ParseError(line, column, "empty cell");
  const char* first = cell.data() + b;
  const char* last = cell.data() + e + 1;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ParseError(line, column, "not a number: '" + cell.substr(b, e - b + 1) + "'");
  return value;
}

}  // namespace

PointCloud load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  Eigen::Index width = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (in.peek() == EOF) break;  // tolerate one trailing newline
      throw FormatError(lineno, "blank row");
    }
    std::vector<double> row;
    std::size_t start = 0;
    long column = 0;
    while (true) {
      ++column;
      std::size_t comma = line.find(',', start);
      std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                       : comma - start);
      row.push_back(parse_cell(cell, lineno, column));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (width < 0) width = static_cast<Eigen::Index>(row.size());
    if (static_cast<Eigen::Index>(row.size()) != width)
      throw FormatError(lineno, "expected " + std::to_string(width) + " columns, found " +
                                    std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError(0, "empty file");

  Eigen::MatrixXd coords(static_cast<Eigen::Index>(rows.size()), width);
  for (Eigen::Index i = 0; i < coords.rows(); ++i)
    for (Eigen::Index j = 0; j < width; ++j) coords(i, j) = rows[i][j];
  return PointCloud(std::move(coords));
}

void save_csv(const Eigen::MatrixXd& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  char buf[64];
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", rows(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

NeighborSet radius_neighbors(const PointCloud& cloud, Eigen::Index center, double h) {
  if (center < 0 || center >= cloud.size()) throw IndexError("center index out of range");
  if (!(h > 0.0)) throw InvalidInput("radius must be positive");
  NeighborSet out;
  out.center = center;
  out.mode = NeighborMode::radius;
  out.radius = h;
  const auto& coords = cloud.coords();
  const double h2 = h * h;
  for (Eigen::Index j = 0; j < cloud.size(); ++j) {
    if (j == center) continue;
    if ((coords.row(j) - coords.row(center)).squaredNorm() <= h2) out.indices.push_back(j);
  }
  return out;
}

NeighborSet knn_neighbors(const PointCloud& cloud, Eigen::Index center, int k) {
  if (center < 0 || center >= cloud.size()) throw IndexError("center index out of range");
  if (k < 1) throw InvalidInput("k must be at least 1");
  if (k >= cloud.size()) throw InvalidInput("k must be smaller than the point count");

  const auto& coords = cloud.coords();
  std::vector<std::pair<double, Eigen::Index>> dist;
  dist.reserve(cloud.size() - 1);
  for (Eigen::Index j = 0; j < cloud.size(); ++j) {
    if (j == center) continue;
    dist.emplace_back((coords.row(j) - coords.row(center)).squaredNorm(), j);
  }
  std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
  std::sort(dist.begin(), dist.begin() + k);

  NeighborSet out;
  out.center = center;
  out.mode = NeighborMode::knn;
  out.k = k;
  out.indices.reserve(k);
  for (int i = 0; i < k; ++i) out.indices.push_back(dist[i].second);
  std::sort(out.indices.begin(), out.indices.end());
  return out;
}

}  // namespace locov
