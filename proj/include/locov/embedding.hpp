#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "locov/local_covariance.hpp"
#include "locov/point_cloud.hpp"

namespace locov {

using SparseMat = Eigen::SparseMatrix<double>;

// Barycentric reconstruction weights of a center from its neighbors; entries
// may be negative but always sum to 1.
struct WeightRow {
  Eigen::Index center = 0;
  std::vector<Eigen::Index> neighbors;
  Eigen::VectorXd weights;
};

// Neighborhood rule for assembling the weight matrix.
struct NeighborScale {
  NeighborMode mode = NeighborMode::radius;
  double h = 0.0;
  int k = 0;
  static NeighborScale radius(double h) { return {NeighborMode::radius, h, 0}; }
  static NeighborScale knn(int k) { return {NeighborMode::knn, 0.0, k}; }
};

// Weight recipe: classic regularized weights with constant c (c <= 0 selects
// the scale-aware default 1e-3 * trace(G G^T) / N per neighborhood), or the
// d-truncated variant.
struct WeightVariant {
  enum class Kind { regularized, truncated } kind = Kind::regularized;
  double c = 0.0;
  int d = 0;
  static WeightVariant regularized(double c) { return {Kind::regularized, c, 0}; }
  static WeightVariant truncated(int d) { return {Kind::truncated, 0.0, d}; }
};

struct EmbeddingResult {
  Eigen::MatrixXd coordinates;      // n x ell, eigenvector columns
  Eigen::VectorXd spectrum;         // the ell smallest eigenvalues, ascending
  std::vector<int> trivial_columns; // columns that are the near-constant mode
};

// Regularized barycentric weights computed through the covariance form of the
// normal equations (the p x p eigendecomposition), not the N x N Gram solve.
WeightRow lle_weights(const LocalDataMatrix& g, double c);

// Truncated variant: the regularized inverse is replaced by the d-truncated
// inverse of the local covariance.
WeightRow ldr_lle_weights(const LocalDataMatrix& g, int d);

// Row k holds the weights of point k over its neighborhood; rows sum to 1.
SparseMat assemble_lle_matrix(const PointCloud& cloud, const NeighborScale& scale,
                              const WeightVariant& variant);

// Spectral embedding from the ell smallest eigenvectors of (I-W)^T (I-W).
// Dense below dense_threshold, sparse shift-invert iteration above.
EmbeddingResult embed(const SparseMat& w, int ell, std::uint64_t seed,
                      Eigen::Index dense_threshold = 3000);

// k smallest eigenvalues of (2(d+2)/h^2) (I - W), real parts, ascending.
// For truncated-variant W this estimates the Laplace-Beltrami spectrum.
Eigen::VectorXd laplacian_eigenvalues(const SparseMat& w, double h, int d, int k,
                                      std::uint64_t seed, Eigen::Index dense_threshold = 3000);

// Diffusion-maps baseline: Gaussian kernel exp(-r^2/h^2), density
// normalization with exponent `normalization_alpha`, Markov eigenvalues mu
// mapped to Laplacian estimates (1 - mu) * 4 / h^2, ascending.
Eigen::VectorXd diffusion_maps_eigenvalues(const PointCloud& cloud, double h,
                                           double normalization_alpha, int k, std::uint64_t seed,
                                           Eigen::Index dense_threshold = 3000);

}  // namespace locov
