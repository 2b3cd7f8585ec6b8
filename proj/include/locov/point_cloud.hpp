#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <vector>

namespace locov {

// Immutable n x p point set; row i is point i.
class PointCloud {
 public:
  explicit PointCloud(Eigen::MatrixXd coords);

  Eigen::Index size() const { return coords_.rows(); }
  Eigen::Index dim() const { return coords_.cols(); }
  const Eigen::MatrixXd& coords() const { return coords_; }
  Eigen::RowVectorXd point(Eigen::Index i) const { return coords_.row(i); }

 private:
  Eigen::MatrixXd coords_;
};

enum class NeighborMode { radius, knn };

struct NeighborSet {
  Eigen::Index center = 0;
  std::vector<Eigen::Index> indices;  // ascending, never contains center
  NeighborMode mode = NeighborMode::radius;
  double radius = 0.0;  // radius mode
  int k = 0;            // knn mode
};

// Strict CSV ingestion: comma separated, no header, one point per row,
// LF or CRLF newlines. Ragged rows raise FormatError(line), non-numeric
// cells raise ParseError(line, column); both are 1-based.
PointCloud load_csv(const std::filesystem::path& path);
void save_csv(const Eigen::MatrixXd& rows, const std::filesystem::path& path);

// All points with ||x_j - x_center|| <= h, j != center (closed ball).
NeighborSet radius_neighbors(const PointCloud& cloud, Eigen::Index center, double h);

// The k nearest points; ties at the k-th distance break toward the smaller
// index.
NeighborSet knn_neighbors(const PointCloud& cloud, Eigen::Index center, int k);

}  // namespace locov
