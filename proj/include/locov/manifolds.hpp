#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>

#include "locov/point_cloud.hpp"

namespace locov {

enum class ManifoldId { spiral, circle_uniform, circle_nonuniform, sphere, segment };

std::string to_string(ManifoldId id);
ManifoldId manifold_from_string(const std::string& name);

// A synthetic sample: the embedded cloud, the latent parameters that generated
// each point, and a closed-form geodesic distance between any two samples.
class ManifoldSample {
 public:
  ManifoldSample(PointCloud cloud, Eigen::MatrixXd latent, ManifoldId id, int intrinsic_dim,
                 std::uint64_t seed);

  const PointCloud& cloud() const { return cloud_; }
  const Eigen::MatrixXd& latent() const { return latent_; }
  ManifoldId id() const { return id_; }
  int intrinsic_dim() const { return dim_; }
  std::uint64_t seed() const { return seed_; }
  Eigen::Index size() const { return cloud_.size(); }

  double geodesic(Eigen::Index i, Eigen::Index j) const;

 private:
  PointCloud cloud_;
  Eigen::MatrixXd latent_;
  ManifoldId id_;
  int dim_;
  std::uint64_t seed_;
};

// Unit-speed logarithmic spiral x(s) = (u cos log u, u sin log u), u = s/sqrt(2) + 1,
// with s uniform on [s_min, s_max]; geodesic distance is |s_i - s_j|.
ManifoldSample sample_spiral(Eigen::Index n, double s_min, double s_max, std::uint64_t seed);

// Uniform angles on the unit circle.
ManifoldSample sample_circle_uniform(Eigen::Index n, std::uint64_t seed);

// theta uniform on [0,1], angle 2*pi*(theta + 0.3 sin theta): the standard
// non-uniform density on S^1.
ManifoldSample sample_circle_nonuniform(Eigen::Index n, std::uint64_t seed);

// Uniform on S^d in R^{d+1} via normalized Gaussians; geodesic arccos<x, y>.
ManifoldSample sample_sphere(Eigen::Index n, int d, std::uint64_t seed);

// Uniform on [lo, hi] x {0} in R^2; geodesic equals |s_i - s_j|.
ManifoldSample sample_segment(Eigen::Index n, double lo, double hi, std::uint64_t seed);

// Latent parameters as a sidecar CSV, one row per point.
void save_latent_csv(const ManifoldSample& sample, const std::filesystem::path& path);

}  // namespace locov
