#include "locov/local_covariance.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "locov/errors.hpp"

namespace locov {

LocalDataMatrix local_data_matrix(const PointCloud& cloud, const NeighborSet& nbrs) {
  if (nbrs.indices.empty())
    throw EmptyNeighborhood("point " + std::to_string(nbrs.center) + " has no neighbors");
  if (nbrs.center < 0 || nbrs.center >= cloud.size())
    throw IndexError("neighborhood center out of range");

  LocalDataMatrix out;
  out.center = nbrs.center;
  out.neighborhood = nbrs;
  out.columns.resize(cloud.dim(), static_cast<Eigen::Index>(nbrs.indices.size()));
  const Eigen::RowVectorXd center = cloud.point(nbrs.center);
  for (std::size_t j = 0; j < nbrs.indices.size(); ++j) {
    Eigen::Index idx = nbrs.indices[j];
    if (idx < 0 || idx >= cloud.size()) throw IndexError("neighbor index out of range");
    out.columns.col(static_cast<Eigen::Index>(j)) = (cloud.point(idx) - center).transpose();
  }
  return out;
}

LocalCovariance sample_covariance(const LocalDataMatrix& g) {
  return LocalCovariance{SymMatrix(g.columns * g.columns.transpose()), g.center,
                         g.neighborhood.mode == NeighborMode::radius ? g.neighborhood.radius : 0.0,
                         g.columns.cols(), false};
}

LocalCovariance normalized_covariance(const LocalDataMatrix& g, double eps) {
  if (!(eps > 0.0)) throw InvalidInput("eps must be positive");
  const Eigen::Index n = g.columns.cols();
  if (n < 1) throw EmptyNeighborhood("normalized covariance needs at least one neighbor");
  Eigen::MatrixXd m = (g.columns * g.columns.transpose()) / (eps * eps * static_cast<double>(n));
  return LocalCovariance{SymMatrix(std::move(m)), g.center, eps, n, true};
}

TangentFrame tangent_frame(const LocalCovariance& cov, int d) {
  const Eigen::Index p = cov.matrix.dim();
  if (d < 1 || d > p) throw InvalidInput("intrinsic dimension must lie in [1, p]");

  SymEig eig = sym_eig(cov.matrix);
  TangentFrame out;
  out.center = cov.center;
  out.intrinsic_dim = d;
  out.scale = cov.scale;
  out.eigenvalues = eig.eigenvalues;
  out.tangent_basis = eig.eigenvectors.leftCols(d);
  out.normal_basis = eig.eigenvectors.rightCols(p - d);
  out.degenerate = eig.rank < d;
  if (d < p) {
    double next = eig.eigenvalues(d);
    out.spectral_gap = next > 0.0 ? eig.eigenvalues(d - 1) / next
                                  : std::numeric_limits<double>::infinity();
  } else {
    out.spectral_gap = std::numeric_limits<double>::infinity();
  }
  return out;
}

Eigen::VectorXd project_normal(const TangentFrame& frame, const Eigen::VectorXd& v) {
  if (v.size() != frame.tangent_basis.rows())
    throw InvalidInput("vector dimension does not match the frame");
  return frame.normal_basis * (frame.normal_basis.transpose() * v);
}

}  // namespace locov
