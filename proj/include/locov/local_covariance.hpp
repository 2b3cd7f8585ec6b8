#pragma once

#include <Eigen/Dense>

#include "locov/linalg.hpp"
#include "locov/point_cloud.hpp"

namespace locov {

// Offsets of a neighborhood from its center point: column j is
// x_{k,j} - x_k, ordered by ascending neighbor index.
struct LocalDataMatrix {
  Eigen::Index center = 0;
  Eigen::MatrixXd columns;  // p x N
  NeighborSet neighborhood;
};

struct LocalCovariance {
  SymMatrix matrix;        // p x p, PSD
  Eigen::Index center = 0;
  double scale = 0.0;      // the h or eps that selected the neighborhood
  Eigen::Index count = 0;  // neighbors used
  bool normalized = false;
};

// Eigenstructure split of a local covariance into tangent and normal parts.
struct TangentFrame {
  Eigen::Index center = 0;
  int intrinsic_dim = 0;
  Eigen::MatrixXd tangent_basis;  // p x d
  Eigen::MatrixXd normal_basis;   // p x (p - d)
  Eigen::VectorXd eigenvalues;    // descending
  double scale = 0.0;             // neighborhood scale the covariance used
  double spectral_gap = 0.0;      // lambda_d / lambda_{d+1} diagnostic
  bool degenerate = false;        // rank < d: tangent estimate unreliable
};

LocalDataMatrix local_data_matrix(const PointCloud& cloud, const NeighborSet& nbrs);

// Unnormalized second-moment sum G G^T (no division by the count).
LocalCovariance sample_covariance(const LocalDataMatrix& g);

// G G^T / (eps^2 N): the density-normalized variant.
LocalCovariance normalized_covariance(const LocalDataMatrix& g, double eps);

TangentFrame tangent_frame(const LocalCovariance& cov, int d);

// Projection of v onto the normal subspace of the frame.
Eigen::VectorXd project_normal(const TangentFrame& frame, const Eigen::VectorXd& v);

}  // namespace locov
