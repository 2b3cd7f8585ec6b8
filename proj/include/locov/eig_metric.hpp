#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "locov/manifolds.hpp"
#include "locov/point_cloud.hpp"

namespace locov {

// Observation maps applied to latent samples. `linear` multiplies by a fixed
// matrix; `sine_warp` is the coordinatewise diffeomorphism x -> x + amp *
// sin(freq x) (requires |amp * freq| < 1); `sphere_bend` lifts S^2 into R^4
// with the quadratic height amp * (x^2 - y^2) + amp2 * x y.
struct Deformation {
  enum class Kind { identity, linear, sine_warp, sphere_bend } kind = Kind::identity;
  Eigen::MatrixXd linear_map;  // linear kind
  double amp = 0.0;
  double freq = 0.0;
  double amp2 = 0.0;

  static Deformation identity();
  static Deformation linear(Eigen::MatrixXd map);
  static Deformation sine_warp(double amp, double freq);
  static Deformation sphere_bend(double amp, double amp2);

  Eigen::RowVectorXd apply(const Eigen::RowVectorXd& x) const;
  std::string describe() const;
};

Deformation deformation_from_config(const std::string& name, const std::vector<double>& scales,
                                    double amp, double freq, double amp2, Eigen::Index latent_dim);

// Latent sample paired with its observed image; row i of the observed cloud
// is the deformation image of latent point i.
struct DeformedDataset {
  ManifoldSample latent;
  PointCloud observed;
};

DeformedDataset deform(ManifoldSample latent, const Deformation& map);

struct EigParams {
  int alpha = 1;
  double eps = 0.1;
  // observed_ball swaps the latent-oracle ellipsoid for a Euclidean ball in
  // observation space (ablation; breaks the known-ellipsoid assumption).
  enum class Neighbors { latent_oracle, observed_ball } neighbors = Neighbors::latent_oracle;
};

// Neighbors by latent geodesic ball: the simulation stand-in for a known
// ellipsoid around each observed point.
NeighborSet ellipsoid_neighbors(const DeformedDataset& data, Eigen::Index i, double eps);

// Ablation only: a Euclidean ball in observation space. This violates the
// known-ellipsoid assumption and is provided for comparison runs.
NeighborSet observed_ball_neighbors(const DeformedDataset& data, Eigen::Index i, double eps);

double eig_distance(const DeformedDataset& data, Eigen::Index i, Eigen::Index j,
                    const EigParams& params);

struct PairResult {
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  double distance = 0.0;
  bool ok = false;
  std::string error;
};

// Batch evaluation; covariances are computed once per point, and per-pair
// failures are collected instead of aborting the batch.
std::vector<PairResult> eig_distance_matrix(const DeformedDataset& data,
                                            const std::vector<std::pair<Eigen::Index, Eigen::Index>>& pairs,
                                            const EigParams& params);

struct AlphaScanRow {
  int alpha = 0;
  double t = 0.0;
  double bias = 0.0;         // |mean of (EIG/(sqrt(d+2) t) - 1)| over the bucket
  double mean_abs = 0.0;     // mean |EIG/(sqrt(d+2) t) - 1|
  long pairs = 0;
  long skipped = 0;          // rank-deficient points at this alpha
  bool empty = true;
};

// Relative-error scan over (alpha, t) buckets. Pairs are drawn at latent
// geodesic distance within +-10% of each t; buckets with no pairs are marked
// empty rather than filled in.
std::vector<AlphaScanRow> alpha_sensitivity_scan(const DeformedDataset& data,
                                                 const std::vector<int>& alphas,
                                                 const EigParams& params,
                                                 const std::vector<double>& t_values,
                                                 long pairs_per_bucket, std::uint64_t seed);

}  // namespace locov
