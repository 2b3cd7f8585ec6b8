#include "locov/geodesic.hpp"

#include <cmath>
#include <limits>
#include <queue>

#include "locov/errors.hpp"

namespace locov {

EdgeEstimator edge_estimator_from_string(const std::string& name) {
  if (name == "euclidean") return EdgeEstimator::euclidean;
  if (name == "corrected") return EdgeEstimator::corrected;
  throw ConfigError("estimator", "unknown estimator '" + name + "'");
}

DistanceGraph::DistanceGraph(Eigen::Index n) : adjacency_(static_cast<std::size_t>(n)) {
  if (n < 1) throw InvalidInput("graph needs at least one node");
}

void DistanceGraph::add_edge(Eigen::Index i, Eigen::Index j, double w) {
  if (i < 0 || j < 0 || i >= size() || j >= size()) throw IndexError("edge endpoint out of range");
  if (i == j) throw InvalidInput("self-loops are not allowed");
  if (!(w > 0.0) || !std::isfinite(w)) throw InvalidInput("edge weights must be positive and finite");
  adjacency_[i].emplace_back(j, w);
  adjacency_[j].emplace_back(i, w);
  ++edges_;
}

GeodesicEstimate corrected_distance(const PointCloud& cloud, Eigen::Index i, Eigen::Index j,
                                    const TangentFrame& frame) {
  if (i == j) throw InvalidInput("endpoints must differ");
  if (i < 0 || j < 0 || i >= cloud.size() || j >= cloud.size())
    throw IndexError("point index out of range");
  if (frame.center != i) throw InvalidInput("frame is not centered at the first endpoint");

  const Eigen::VectorXd delta = (cloud.point(j) - cloud.point(i)).transpose();
  const double h = delta.norm();
  if (h < 1e-12) throw DegenerateDistance("duplicate points have no direction");
  if (frame.scale > 0.0 && h > frame.scale * (1.0 + 1e-9))
    throw InvalidInput("pair lies outside the frame's scale");

  GeodesicEstimate out;
  out.i = i;
  out.j = j;
  out.euclidean = h;
  out.corrected = h + project_normal(frame, delta).squaredNorm() / (6.0 * h);
  out.frame_scale = frame.scale;
  return out;
}

DistanceGraph build_local_graph(const PointCloud& cloud, double scale, EdgeEstimator estimator,
                                int d) {
  if (!(scale > 0.0)) throw InvalidInput("scale must be positive");
  const Eigen::Index n = cloud.size();
  DistanceGraph graph(n);

  std::vector<TangentFrame> frames;
  if (estimator == EdgeEstimator::corrected) {
    if (d < 1) throw InvalidInput("corrected mode needs the intrinsic dimension");
    frames.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      NeighborSet nbrs = radius_neighbors(cloud, i, scale);
      if (nbrs.indices.empty()) continue;  // isolated: no incident edges anyway
      frames[i] = tangent_frame(sample_covariance(local_data_matrix(cloud, nbrs)), d);
      frames[i].center = i;
    }
  }

  const double scale2 = scale * scale;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double h2 = (cloud.point(i) - cloud.point(j)).squaredNorm();
      if (h2 > scale2) continue;
      if (h2 < 1e-24) continue;  // duplicates carry no usable direction
      if (estimator == EdgeEstimator::euclidean) {
        graph.add_edge(i, j, std::sqrt(h2));
      } else {
        double wij = corrected_distance(cloud, i, j, frames[i]).corrected;
        double wji = corrected_distance(cloud, j, i, frames[j]).corrected;
        graph.add_edge(i, j, 0.5 * (wij + wji));
      }
    }
  }
  return graph;
}

std::vector<double> shortest_paths(const DistanceGraph& graph, Eigen::Index source) {
  const Eigen::Index n = graph.size();
  if (source < 0 || source >= n) throw IndexError("source out of range");
  for (Eigen::Index i = 0; i < n; ++i)
    for (const auto& [j, w] : graph.neighbors(i))
      if (w < 0.0) throw InvalidInput("negative edge weight");

  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<bool> done(n, false);
  using Item = std::pair<double, Eigen::Index>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    auto [du, u] = queue.top();
    queue.pop();
    if (done[u]) continue;
    done[u] = true;
    for (const auto& [v, w] : graph.neighbors(u)) {
      double cand = du + w;
      if (cand < dist[v]) {
        dist[v] = cand;
        queue.emplace(cand, v);
      }
    }
  }
  return dist;
}

}  // namespace locov
