#include "locov/manifolds.hpp"

#include <cmath>
#include <numbers>

#include "locov/errors.hpp"
#include "locov/rng.hpp"

namespace locov {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}
}  // namespace

std::string to_string(ManifoldId id) {
  switch (id) {
    case ManifoldId::spiral: return "spiral";
    case ManifoldId::circle_uniform: return "circle_uniform";
    case ManifoldId::circle_nonuniform: return "circle_nonuniform";
    case ManifoldId::sphere: return "sphere";
    case ManifoldId::segment: return "segment";
  }
  return "unknown";
}

ManifoldId manifold_from_string(const std::string& name) {
  if (name == "spiral") return ManifoldId::spiral;
  if (name == "circle_uniform") return ManifoldId::circle_uniform;
  if (name == "circle_nonuniform") return ManifoldId::circle_nonuniform;
  if (name == "sphere") return ManifoldId::sphere;
  if (name == "segment") return ManifoldId::segment;
  throw ConfigError("manifold", "unknown manifold '" + name + "'");
}

ManifoldSample::ManifoldSample(PointCloud cloud, Eigen::MatrixXd latent, ManifoldId id,
                               int intrinsic_dim, std::uint64_t seed)
    : cloud_(std::move(cloud)),
      latent_(std::move(latent)),
      id_(id),
      dim_(intrinsic_dim),
      seed_(seed) {
  if (latent_.rows() != cloud_.size())
    throw InvalidInput("latent rows must match the point count");
}

double ManifoldSample::geodesic(Eigen::Index i, Eigen::Index j) const {
  if (i < 0 || i >= size() || j < 0 || j >= size()) throw IndexError("point index out of range");
  switch (id_) {
    case ManifoldId::spiral:
    case ManifoldId::segment:
      return std::abs(latent_(i, 0) - latent_(j, 0));
    case ManifoldId::circle_uniform:
    case ManifoldId::circle_nonuniform:
      return wrap_angle_distance(latent_(i, 0), latent_(j, 0));
    case ManifoldId::sphere: {
      double dot = latent_.row(i).dot(latent_.row(j));
      return std::acos(std::clamp(dot, -1.0, 1.0));
    }
  }
  throw InvalidInput("unknown manifold id");
}

ManifoldSample sample_spiral(Eigen::Index n, double s_min, double s_max, std::uint64_t seed) {
  if (n < 2) throw InvalidInput("need at least two points");
  if (!(s_max > s_min)) throw InvalidInput("empty parameter range");
  SplitMix64 rng(seed);
  Eigen::MatrixXd coords(n, 2), latent(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = rng.next_uniform(s_min, s_max);
    double u = s / std::numbers::sqrt2 + 1.0;
    double phi = std::log(u);
    latent(i, 0) = s;
    coords(i, 0) = u * std::cos(phi);
    coords(i, 1) = u * std::sin(phi);
  }
  return ManifoldSample(PointCloud(std::move(coords)), std::move(latent), ManifoldId::spiral, 1,
                        seed);
}

ManifoldSample sample_circle_uniform(Eigen::Index n, std::uint64_t seed) {
  if (n < 2) throw InvalidInput("need at least two points");
  SplitMix64 rng(seed);
  Eigen::MatrixXd coords(n, 2), latent(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    double phi = rng.next_uniform(0.0, kTwoPi);
    latent(i, 0) = phi;
    coords(i, 0) = std::cos(phi);
    coords(i, 1) = std::sin(phi);
  }
  return ManifoldSample(PointCloud(std::move(coords)), std::move(latent),
                        ManifoldId::circle_uniform, 1, seed);
}

ManifoldSample sample_circle_nonuniform(Eigen::Index n, std::uint64_t seed) {
  if (n < 2) throw InvalidInput("need at least two points");
  SplitMix64 rng(seed);
  Eigen::MatrixXd coords(n, 2), latent(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    double theta = rng.next_double();
    double phi = kTwoPi * (theta + 0.3 * std::sin(theta));
    latent(i, 0) = phi;
    coords(i, 0) = std::cos(phi);
    coords(i, 1) = std::sin(phi);
  }
  return ManifoldSample(PointCloud(std::move(coords)), std::move(latent),
                        ManifoldId::circle_nonuniform, 1, seed);
}

ManifoldSample sample_sphere(Eigen::Index n, int d, std::uint64_t seed) {
  if (d < 1) throw InvalidInput("sphere dimension must be at least 1");
  if (n < d + 2) throw InvalidInput("need at least d + 2 points");
  SplitMix64 rng(seed);
  Eigen::MatrixXd coords(n, d + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    double norm = 0.0;
    do {
      for (int j = 0; j <= d; ++j) coords(i, j) = rng.next_gaussian();
      norm = coords.row(i).norm();
    } while (norm < 1e-12);
    coords.row(i) /= norm;
  }
  Eigen::MatrixXd latent = coords;
  return ManifoldSample(PointCloud(std::move(coords)), std::move(latent), ManifoldId::sphere, d,
                        seed);
}

ManifoldSample sample_segment(Eigen::Index n, double lo, double hi, std::uint64_t seed) {
  if (n < 2) throw InvalidInput("need at least two points");
  if (!(hi > lo)) throw InvalidInput("empty segment");
  SplitMix64 rng(seed);
  Eigen::MatrixXd coords(n, 2), latent(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = rng.next_uniform(lo, hi);
    latent(i, 0) = s;
    coords(i, 0) = s;
    coords(i, 1) = 0.0;
  }
  return ManifoldSample(PointCloud(std::move(coords)), std::move(latent), ManifoldId::segment, 1,
                        seed);
}

void save_latent_csv(const ManifoldSample& sample, const std::filesystem::path& path) {
  save_csv(sample.latent(), path);
}

}  // namespace locov
