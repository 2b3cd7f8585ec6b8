#include "locov/embedding.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "locov/errors.hpp"
#include "locov/linalg.hpp"

namespace locov {

namespace {

// A single neighbor leaves no freedom: the sum-to-one constraint forces the
// weight vector (1). The truncated formula would hit 0/0 there.
WeightRow forced_single_weight(const LocalDataMatrix& g) {
  WeightRow out;
  out.center = g.center;
  out.neighbors = g.neighborhood.indices;
  out.weights = Eigen::VectorXd::Ones(1);
  return out;
}

// Shared core of both weight formulas: given the vector t = Inv[C] G 1 (the
// kernel direction), the weights are (1 - t^T g_j) / (N - t^T G 1).
WeightRow weights_from_kernel_vector(const LocalDataMatrix& g, const Eigen::VectorXd& t) {
  const Eigen::Index n = g.columns.cols();
  Eigen::VectorXd kernel = Eigen::VectorXd::Ones(n) - g.columns.transpose() * t;
  const double denom = kernel.sum();
  if (std::abs(denom) < 1e-12 * static_cast<double>(n))
    throw SingularWeights("weight denominator vanished at point " + std::to_string(g.center));
  WeightRow out;
  out.center = g.center;
  out.neighbors = g.neighborhood.indices;
  out.weights = kernel / denom;
  return out;
}

double default_regularizer(const LocalDataMatrix& g) {
  const double trace = g.columns.squaredNorm();
  return 1e-3 * trace / static_cast<double>(g.columns.cols());
}

Eigen::VectorXd ones_image(const LocalDataMatrix& g) { return g.columns.rowwise().sum(); }

SparseMat identity_minus(const SparseMat& w) {
  SparseMat id(w.rows(), w.cols());
  id.setIdentity();
  return id - w;
}

bool near_constant(const Eigen::VectorXd& v) {
  const double n = static_cast<double>(v.size());
  double mean = v.mean();
  return (v.array() - mean).matrix().norm() <= 1e-2 * std::max(v.norm(), 1e-300) ||
         std::abs(v.sum()) / std::sqrt(n) >= 0.99 * v.norm();
}

}  // namespace

WeightRow lle_weights(const LocalDataMatrix& g, double c) {
  if (g.columns.cols() < 1) throw EmptyNeighborhood("no neighbors to reconstruct from");
  if (g.columns.cols() == 1) return forced_single_weight(g);
  if (c <= 0.0) c = default_regularizer(g);
  if (!(c > 0.0)) c = 1e-12;  // all-zero offsets: fall back to a tiny ridge
  SymMatrix cov(g.columns * g.columns.transpose());
  Eigen::VectorXd t = regularized_inverse(cov, c).mat() * ones_image(g);
  return weights_from_kernel_vector(g, t);
}

WeightRow ldr_lle_weights(const LocalDataMatrix& g, int d) {
  if (g.columns.cols() < 1) throw EmptyNeighborhood("no neighbors to reconstruct from");
  SymMatrix cov(g.columns * g.columns.transpose());
  if (sym_eig(cov).rank < d)
    throw RankExceeded("truncation order " + std::to_string(d) + " exceeds the local rank at point " +
                       std::to_string(g.center));
  if (g.columns.cols() == 1) return forced_single_weight(g);
  Eigen::VectorXd t = truncated_inverse(cov, d).mat() * ones_image(g);
  return weights_from_kernel_vector(g, t);
}

SparseMat assemble_lle_matrix(const PointCloud& cloud, const NeighborScale& scale,
                              const WeightVariant& variant) {
  const Eigen::Index n = cloud.size();
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index i = 0; i < n; ++i) {
    NeighborSet nbrs = scale.mode == NeighborMode::radius ? radius_neighbors(cloud, i, scale.h)
                                                          : knn_neighbors(cloud, i, scale.k);
    if (nbrs.indices.empty()) throw IsolatedPoint(i);
    LocalDataMatrix g = local_data_matrix(cloud, nbrs);
    WeightRow row = variant.kind == WeightVariant::Kind::regularized
                        ? lle_weights(g, variant.c)
                        : ldr_lle_weights(g, variant.d);
    for (std::size_t j = 0; j < row.neighbors.size(); ++j)
      triplets.emplace_back(i, row.neighbors[j], row.weights(static_cast<Eigen::Index>(j)));
  }
  SparseMat w(n, n);
  w.setFromTriplets(triplets.begin(), triplets.end());
  w.makeCompressed();
  return w;
}

EmbeddingResult embed(const SparseMat& w, int ell, std::uint64_t seed,
                      Eigen::Index dense_threshold) {
  const Eigen::Index n = w.rows();
  if (w.cols() != n) throw InvalidInput("weight matrix must be square");
  if (ell < 1 || ell >= n) throw InvalidInput("embedding dimension must lie in [1, n)");

  SparseMat e = identity_minus(w);
  EmbeddingResult out;
  if (n <= dense_threshold) {
    Eigen::MatrixXd ed = Eigen::MatrixXd(e);
    Eigen::MatrixXd sym = ed.transpose() * ed;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success)
      throw NoConvergence("dense eigensolve failed", std::numeric_limits<double>::quiet_NaN());
    out.spectrum = solver.eigenvalues().head(ell);
    out.coordinates = solver.eigenvectors().leftCols(ell);
    for (Eigen::Index j = 0; j < out.coordinates.cols(); ++j) {
      Eigen::Index arg = 0;
      out.coordinates.col(j).cwiseAbs().maxCoeff(&arg);
      if (out.coordinates(arg, j) < 0.0) out.coordinates.col(j) *= -1.0;
    }
  } else {
    // The normal matrix is kept sparse; residuals below are still checked
    // through the two-product operator (I-W)^T ((I-W) x).
    SparseMat sym = SparseMat(e.transpose()) * e;
    sym.makeCompressed();
    EigPairs pairs = smallest_eigenpairs(sym, ell, seed);
    out.spectrum = pairs.values;
    out.coordinates = pairs.vectors;
  }

  for (int j = 0; j < ell; ++j) {
    Eigen::VectorXd v = out.coordinates.col(j);
    double residual = (e.transpose() * (e * v) - out.spectrum(j) * v).norm();
    if (residual > 1e-7 * std::max(1.0, std::abs(out.spectrum(j))))
      throw NoConvergence("embedding eigenvector residual too large", residual);
    if (near_constant(v)) out.trivial_columns.push_back(j);
  }
  return out;
}

Eigen::VectorXd laplacian_eigenvalues(const SparseMat& w, double h, int d, int k,
                                      std::uint64_t seed, Eigen::Index dense_threshold) {
  const Eigen::Index n = w.rows();
  if (w.cols() != n) throw InvalidInput("weight matrix must be square");
  if (!(h > 0.0)) throw InvalidInput("bandwidth must be positive");
  if (d < 1) throw InvalidInput("intrinsic dimension must be positive");
  if (k < 1 || k > n) throw InvalidInput("eigenvalue count must lie in [1, n]");

  SparseMat e = identity_minus(w);
  const double rescale = 2.0 * (d + 2) / (h * h);
  std::vector<std::complex<double>> lams;
  if (n <= dense_threshold) {
    Eigen::VectorXcd all = dense_eigenvalues(Eigen::MatrixXd(e));
    lams.assign(all.data(), all.data() + all.size());
  } else {
    const double delta = std::max(1e-8, 0.05 * h * h / (2.0 * (d + 2)));
    Eigen::VectorXcd some = smallest_eigenvalues_sparse(e, k, seed, delta);
    lams.assign(some.data(), some.data() + some.size());
  }
  std::sort(lams.begin(), lams.end(), [](const std::complex<double>& a, const std::complex<double>& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  Eigen::VectorXd out(k);
  for (int i = 0; i < k; ++i) {
    // The spectrum of I - W is real up to discretization noise on manifold
    // data; a large imaginary part means the weights are unusable.
    if (std::abs(lams[i].imag()) > 1e-6)
      throw NoConvergence("eigenvalue " + std::to_string(i) + " has imaginary part " +
                              std::to_string(lams[i].imag()),
                          std::abs(lams[i].imag()));
    out(i) = rescale * lams[i].real();
  }
  return out;
}

Eigen::VectorXd diffusion_maps_eigenvalues(const PointCloud& cloud, double h,
                                           double normalization_alpha, int k, std::uint64_t seed,
                                           Eigen::Index dense_threshold) {
  const Eigen::Index n = cloud.size();
  if (!(h > 0.0)) throw InvalidInput("bandwidth must be positive");
  if (normalization_alpha < 0.0 || normalization_alpha > 1.0)
    throw InvalidInput("normalization exponent must lie in [0, 1]");
  if (k < 1 || k > n) throw InvalidInput("eigenvalue count must lie in [1, n]");

  // Kernel support is cut at 6h where exp(-r^2/h^2) ~ 2e-16.
  const double cutoff2 = 36.0 * h * h;
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index i = 0; i < n; ++i) {
    triplets.emplace_back(i, i, 1.0);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double r2 = (cloud.point(i) - cloud.point(j)).squaredNorm();
      if (r2 > cutoff2) continue;
      double v = std::exp(-r2 / (h * h));
      triplets.emplace_back(i, j, v);
      triplets.emplace_back(j, i, v);
    }
  }
  SparseMat kernel(n, n);
  kernel.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::VectorXd q = kernel * Eigen::VectorXd::Ones(n);
  Eigen::VectorXd qpow = q.array().pow(-normalization_alpha);
  SparseMat knorm = qpow.asDiagonal() * kernel * qpow.asDiagonal();
  Eigen::VectorXd deg = knorm * Eigen::VectorXd::Ones(n);
  if ((deg.array() <= 0.0).any()) throw InvalidInput("kernel degree vanished");
  Eigen::VectorXd dinv_sqrt = deg.array().rsqrt();
  // Symmetric conjugate of the Markov matrix: same spectrum, real arithmetic.
  SparseMat sym = dinv_sqrt.asDiagonal() * knorm * dinv_sqrt.asDiagonal();

  Eigen::VectorXd mu(k);
  if (n <= dense_threshold) {
    Eigen::MatrixXd sym_dense(sym);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym_dense);
    if (solver.info() != Eigen::Success)
      throw NoConvergence("dense eigensolve failed", std::numeric_limits<double>::quiet_NaN());
    mu = solver.eigenvalues().tail(k).reverse();
  } else {
    SparseMat neg = -sym;
    EigPairs pairs = smallest_eigenpairs(neg, k, seed);
    for (int i = 0; i < k; ++i) mu(i) = -pairs.values(i);
  }

  Eigen::VectorXd out(k);
  const double rescale = 4.0 / (h * h);
  for (int i = 0; i < k; ++i) out(i) = (1.0 - mu(i)) * rescale;
  std::sort(out.data(), out.data() + out.size());
  return out;
}

}  // namespace locov
