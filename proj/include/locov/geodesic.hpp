#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "locov/local_covariance.hpp"
#include "locov/point_cloud.hpp"

namespace locov {

// Local geodesic estimate between two points: the raw chord length h and the
// curvature-corrected value h + ||P_perp(x_j - x_i)||^2 / (6h).
struct GeodesicEstimate {
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  double euclidean = 0.0;
  double corrected = 0.0;
  double frame_scale = 0.0;
};

enum class EdgeEstimator { euclidean, corrected };

EdgeEstimator edge_estimator_from_string(const std::string& name);

// Undirected positive-weight graph on the cloud's indices.
class DistanceGraph {
 public:
  explicit DistanceGraph(Eigen::Index n);

  Eigen::Index size() const { return static_cast<Eigen::Index>(adjacency_.size()); }
  void add_edge(Eigen::Index i, Eigen::Index j, double w);
  const std::vector<std::pair<Eigen::Index, double>>& neighbors(Eigen::Index i) const {
    return adjacency_[i];
  }
  Eigen::Index edge_count() const { return edges_; }

 private:
  std::vector<std::vector<std::pair<Eigen::Index, double>>> adjacency_;
  Eigen::Index edges_ = 0;
};

// One-sided corrected estimate using the frame at i; requires j inside the
// frame's scale.
GeodesicEstimate corrected_distance(const PointCloud& cloud, Eigen::Index i, Eigen::Index j,
                                    const TangentFrame& frame);

// Edges for every pair within `scale`. Corrected mode computes one frame per
// point at radius `scale` and averages the two one-sided estimates per edge.
DistanceGraph build_local_graph(const PointCloud& cloud, double scale, EdgeEstimator estimator,
                                int d);

// Dijkstra from `source`; unreachable nodes map to +infinity.
std::vector<double> shortest_paths(const DistanceGraph& graph, Eigen::Index source);

}  // namespace locov
