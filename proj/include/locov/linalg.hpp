#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <functional>

namespace locov {

// Real symmetric matrix. Construction symmetrizes (A + A^T)/2 and rejects
// non-finite entries, so downstream eigensolvers can assume exact symmetry.
class SymMatrix {
 public:
  explicit SymMatrix(Eigen::MatrixXd a);

  Eigen::Index dim() const { return mat_.rows(); }
  const Eigen::MatrixXd& mat() const { return mat_; }

 private:
  Eigen::MatrixXd mat_;
};

// Sorted eigendecomposition: eigenvalues descending, eigenvector signs fixed
// (largest-magnitude entry positive), rank = count of eigenvalues above the
// relative tolerance.
struct SymEig {
  Eigen::VectorXd eigenvalues;   // descending
  Eigen::MatrixXd eigenvectors;  // orthogonal, column i pairs with eigenvalue i
  Eigen::Index rank = 0;
};

// rank_tol < 0 selects the default dim * machine epsilon; the effective
// threshold is rank_tol * max(1, lambda_1).
SymEig sym_eig(const SymMatrix& a, double rank_tol = -1.0);

// Sum_{i<=alpha} lambda_i^{-1} u_i u_i^T over the top-alpha eigenpairs.
SymMatrix truncated_inverse(const SymMatrix& a, int alpha);

// Sum_{i<=rank} (lambda_i + c)^{-1} u_i u_i^T; zero modes are annihilated.
SymMatrix regularized_inverse(const SymMatrix& a, double c);

struct EigPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns
};

using LinOp = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// k smallest eigenpairs of a symmetric operator on R^n: Lanczos with full
// reorthogonalization, deflation of converged pairs, and a seeded start
// vector. Throws NoConvergence (carrying the best residual) if the iteration
// budget runs out.
EigPairs smallest_eigenpairs(const LinOp& op, Eigen::Index n, int k, std::uint64_t seed);

// Sparse symmetric specialization: shift-invert Lanczos backed by a sparse
// Cholesky factorization. Far more robust than the plain operator iteration
// when the smallest eigenvalues cluster near zero.
EigPairs smallest_eigenpairs(const Eigen::SparseMatrix<double>& a, int k, std::uint64_t seed);

// All eigenvalues of a dense real (generally nonsymmetric) matrix.
Eigen::VectorXcd dense_eigenvalues(const Eigen::MatrixXd& a);

// k eigenvalues of smallest real part of a sparse real matrix whose spectrum
// lies near [0, inf): shift-invert Arnoldi at shift -delta with a sparse LU.
Eigen::VectorXcd smallest_eigenvalues_sparse(const Eigen::SparseMatrix<double>& a, int k,
                                             std::uint64_t seed, double delta);

}  // namespace locov
