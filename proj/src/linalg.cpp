#include "locov/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <lapacke.h>

#include "locov/errors.hpp"
#include "locov/rng.hpp"

namespace locov {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Sign convention: make the largest-magnitude entry of each eigenvector
// positive (ties broken by lowest index) so decompositions are reproducible.
void fix_column_signs(Eigen::MatrixXd& u) {
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      double a = std::abs(u(i, j));
      if (a > best + 1e-15) {
        best = a;
        arg = i;
      }
    }
    if (u(arg, j) < 0.0) u.col(j) = -u.col(j);
  }
}

Eigen::VectorXd random_unit_vector(Eigen::Index n, SplitMix64& rng) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.next_gaussian();
  double norm = v.norm();
  if (norm < 1e-12) v.setConstant(1.0), norm = v.norm();
  return v / norm;
}

void orthogonalize_against(Eigen::VectorXd& w, const std::vector<Eigen::VectorXd>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : basis) w -= q.dot(w) * q;
}

}  // namespace

SymMatrix::SymMatrix(Eigen::MatrixXd a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw InvalidInput("SymMatrix requires a square matrix");
  if (!a.allFinite()) throw InvalidInput("SymMatrix entries must be finite");
  mat_ = 0.5 * (a + a.transpose());
}

SymEig sym_eig(const SymMatrix& a, double rank_tol) {
  const Eigen::Index p = a.dim();
  if (rank_tol < 0.0)
    rank_tol = static_cast<double>(p) * kEps;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.mat());
  if (solver.info() != Eigen::Success)
    throw NoConvergence("symmetric eigendecomposition failed", std::numeric_limits<double>::quiet_NaN());

  SymEig out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  fix_column_signs(out.eigenvectors);

  const double lambda1 = out.eigenvalues.size() ? out.eigenvalues(0) : 0.0;
  const double threshold = rank_tol * std::max(1.0, lambda1);
  out.rank = 0;
  for (Eigen::Index i = 0; i < p; ++i)
    if (out.eigenvalues(i) > threshold) ++out.rank;
  return out;
}

SymMatrix truncated_inverse(const SymMatrix& a, int alpha) {
  if (alpha < 1) throw InvalidInput("truncation order must be at least 1");
  SymEig eig = sym_eig(a);
  if (alpha > eig.rank)
    throw RankExceeded("truncation order " + std::to_string(alpha) + " exceeds rank " +
                       std::to_string(eig.rank));
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.dim(), a.dim());
  for (int i = 0; i < alpha; ++i)
    out += (1.0 / eig.eigenvalues(i)) * eig.eigenvectors.col(i) * eig.eigenvectors.col(i).transpose();
  return SymMatrix(std::move(out));
}

SymMatrix regularized_inverse(const SymMatrix& a, double c) {
  if (!(c > 0.0)) throw InvalidInput("regularization constant must be positive");
  SymEig eig = sym_eig(a);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.dim(), a.dim());
  for (Eigen::Index i = 0; i < eig.rank; ++i)
    out += (1.0 / (eig.eigenvalues(i) + c)) * eig.eigenvectors.col(i) *
           eig.eigenvectors.col(i).transpose();
  return SymMatrix(std::move(out));
}

namespace {

struct LockedPair {
  double value;
  Eigen::VectorXd vector;
};

// Lanczos with full reorthogonalization and deflation against converged
// pairs. A single Krylov space carries at most one copy of a repeated
// eigenvalue, so after k pairs are locked the driver keeps restarting in the
// deflated complement until the complement's smallest eigenvalue provably
// sits at or above the k-th locked value. The Krylov size escalates
// geometrically, so late rounds degenerate into an exact tridiagonalization
// and termination is guaranteed.
class LanczosDriver {
 public:
  LanczosDriver(const LinOp& op, Eigen::Index n, std::uint64_t seed)
      : op_(op), n_(n), rng_(seed) {}

  // One restarted pass; locks at most `max_new` pairs, smallest first.
  // Returns true if the smallest Ritz value of the pass converged (whether or
  // not it was locked).
  bool run_pass(Eigen::Index m, int max_new) {
    std::vector<Eigen::VectorXd> locked_vecs;
    locked_vecs.reserve(locked.size());
    for (const auto& l : locked) locked_vecs.push_back(l.vector);

    Eigen::VectorXd v = random_unit_vector(n_, rng_);
    orthogonalize_against(v, locked_vecs);
    if (v.norm() < 1e-8) return false;
    v.normalize();

    Eigen::MatrixXd basis(n_, m);
    Eigen::VectorXd alpha_diag(m), beta_off(m);
    basis.col(0) = v;
    Eigen::Index steps = 0;
    double last_beta = 0.0;
    bool breakdown = false;
    for (Eigen::Index j = 0; j < m; ++j) {
      Eigen::VectorXd w = op_(basis.col(j));
      if (w.size() != n_) throw InvalidInput("operator changed vector dimension");
      orthogonalize_against(w, locked_vecs);
      alpha_diag(j) = basis.col(j).dot(w);
      w -= alpha_diag(j) * basis.col(j);
      if (j > 0) w -= beta_off(j - 1) * basis.col(j - 1);
      for (int pass = 0; pass < 2; ++pass)
        w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
      double beta = w.norm();
      steps = j + 1;
      if (j + 1 == m || beta < 1e-13 * std::max(1.0, norm_est)) {
        last_beta = (j + 1 == m) ? beta : 0.0;
        breakdown = j + 1 < m;
        break;
      }
      beta_off(j) = beta;
      basis.col(j + 1) = w / beta;
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(steps, steps);
    for (Eigen::Index j = 0; j < steps; ++j) {
      tri(j, j) = alpha_diag(j);
      if (j + 1 < steps) tri(j, j + 1) = tri(j + 1, j) = beta_off(j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tsolver(tri);
    const Eigen::VectorXd& theta = tsolver.eigenvalues();
    const Eigen::MatrixXd& s = tsolver.eigenvectors();
    norm_est = std::max(norm_est, theta.cwiseAbs().maxCoeff());
    const double tol = tolerance();

    bool smallest_converged = false;
    for (Eigen::Index i = 0; i < steps && max_new > 0; ++i) {
      double bound = breakdown ? 0.0 : std::abs(last_beta * s(steps - 1, i));
      best_residual = std::min(best_residual, bound);
      if (bound > tol) break;
      Eigen::VectorXd x = basis.leftCols(steps) * s.col(i);
      orthogonalize_against(x, locked_vecs);
      double nx = x.norm();
      if (nx < 0.5) break;
      x /= nx;
      double lambda = x.dot(op_(x));
      double residual = (op_(x) - lambda * x).norm();
      best_residual = std::min(best_residual, residual);
      if (residual > 10.0 * tol) break;
      if (i == 0) smallest_converged = true;
      locked.push_back({lambda, std::move(x)});
      locked_vecs.push_back(locked.back().vector);
      --max_new;
    }
    return smallest_converged;
  }

  double tolerance() const { return 1e-8 * std::max(norm_est, 1e-300); }

  std::vector<LockedPair> locked;
  double norm_est = 0.0;
  double best_residual = std::numeric_limits<double>::infinity();

 private:
  const LinOp& op_;
  Eigen::Index n_;
  SplitMix64 rng_;
};

EigPairs lanczos_smallest(const LinOp& op, Eigen::Index n, int k, std::uint64_t seed) {
  if (k < 1) throw InvalidInput("eigenpair count must be positive");
  if (k > n) throw InvalidInput("cannot request more eigenpairs than the dimension");

  LanczosDriver driver(op, n, seed);
  const int base_m = std::max(2 * k + 24, 48);
  bool confirmed = false;
  for (int round = 0; round < 40 && !confirmed; ++round) {
    const Eigen::Index remaining = n - static_cast<Eigen::Index>(driver.locked.size());
    if (remaining <= 0) break;
    const Eigen::Index m =
        std::min<Eigen::Index>(remaining, static_cast<Eigen::Index>(base_m) << std::min(round, 12));
    if (static_cast<int>(driver.locked.size()) < k) {
      driver.run_pass(m, k - static_cast<int>(driver.locked.size()));
      continue;
    }
    // k pairs are locked; a repeated eigenvalue could still hide a copy in
    // the complement. Confirm by converging the complement's smallest value:
    // if it lands at or above the current k-th value we are done, otherwise
    // it was a missing copy and the loop continues.
    std::sort(driver.locked.begin(), driver.locked.end(),
              [](const LockedPair& a, const LockedPair& b) { return a.value < b.value; });
    double kth = driver.locked[static_cast<std::size_t>(k - 1)].value;
    if (!driver.run_pass(m, 1)) continue;
    confirmed = driver.locked.back().value >= kth - 4.0 * driver.tolerance();
  }

  if (static_cast<int>(driver.locked.size()) < k)
    throw NoConvergence("Lanczos failed to converge " + std::to_string(k) + " eigenpairs",
                        driver.best_residual);

  std::sort(driver.locked.begin(), driver.locked.end(),
            [](const LockedPair& a, const LockedPair& b) { return a.value < b.value; });
  EigPairs out;
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (int i = 0; i < k; ++i) {
    out.values(i) = driver.locked[i].value;
    out.vectors.col(i) = driver.locked[i].vector;
  }
  fix_column_signs(out.vectors);
  return out;
}

}  // namespace

EigPairs smallest_eigenpairs(const LinOp& op, Eigen::Index n, int k, std::uint64_t seed) {
  return lanczos_smallest(op, n, k, seed);
}

EigPairs smallest_eigenpairs(const Eigen::SparseMatrix<double>& a, int k, std::uint64_t seed) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw InvalidInput("matrix must be square");
  double scale = 0.0;
  for (int j = 0; j < a.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, j); it; ++it)
      scale = std::max(scale, std::abs(it.value()));
  if (scale == 0.0) scale = 1.0;

  Eigen::SparseMatrix<double> id(n, n);
  id.setIdentity();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol;

  // Shift-invert needs A - sigma I positive definite. Try sigma just below
  // zero first (the PSD case, which keeps clustered smallest eigenvalues well
  // separated under inversion); if the pivots expose indefiniteness, restart
  // from the Gershgorin lower bound of the spectrum.
  const double delta = std::max(1e-9 * scale, 1e-14);
  bool factored = false;
  chol.compute(Eigen::SparseMatrix<double>(a + delta * id));
  if (chol.info() == Eigen::Success && chol.vectorD().minCoeff() >= 0.0) factored = true;
  if (!factored) {
    double gersh = std::numeric_limits<double>::infinity();
    for (int j = 0; j < a.outerSize(); ++j) {
      double diag = 0.0, off = 0.0;
      for (Eigen::SparseMatrix<double>::InnerIterator it(a, j); it; ++it) {
        if (it.row() == it.col())
          diag = it.value();
        else
          off += std::abs(it.value());
      }
      gersh = std::min(gersh, diag - off);
    }
    double margin = std::max(1e-8 * scale, 1e-12);
    for (int attempt = 0; attempt < 4 && !factored; ++attempt, margin *= 1e3) {
      chol.compute(Eigen::SparseMatrix<double>(a + (margin - gersh) * id));
      factored = chol.info() == Eigen::Success && chol.vectorD().minCoeff() >= 0.0;
    }
  }
  if (!factored)
    throw NoConvergence("sparse factorization failed", std::numeric_limits<double>::quiet_NaN());

  // Largest eigenvalues of (A - sigma I)^-1 are the smallest of A; run the
  // Lanczos driver on the negated solve operator.
  LinOp inv_neg = [&chol](const Eigen::VectorXd& x) -> Eigen::VectorXd { return -chol.solve(x); };
  EigPairs inner = lanczos_smallest(inv_neg, n, k, seed);

  EigPairs out;
  out.values.resize(k);
  out.vectors = inner.vectors;
  for (int i = 0; i < k; ++i) {
    const Eigen::VectorXd x = inner.vectors.col(k - 1 - i);
    out.vectors.col(i) = x;
    out.values(i) = x.dot(a * x);
  }
  // Re-sort by the Rayleigh quotients in case delta perturbed the order.
  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return out.values(i) < out.values(j); });
  EigPairs sorted;
  sorted.values.resize(k);
  sorted.vectors.resize(n, k);
  for (int i = 0; i < k; ++i) {
    sorted.values(i) = out.values(order[i]);
    sorted.vectors.col(i) = out.vectors.col(order[i]);
  }
  return sorted;
}

Eigen::VectorXcd dense_eigenvalues(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw InvalidInput("matrix must be square");
  if (!a.allFinite()) throw InvalidInput("matrix entries must be finite");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXd work = a;  // dgeev overwrites its input
  Eigen::VectorXd wr(n), wi(n);
  lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, wr.data(),
                                  wi.data(), nullptr, 1, nullptr, 1);
  if (info != 0)
    throw NoConvergence("dgeev failed with info " + std::to_string(info),
                        std::numeric_limits<double>::quiet_NaN());
  Eigen::VectorXcd out(n);
  for (lapack_int i = 0; i < n; ++i) out(i) = std::complex<double>(wr(i), wi(i));
  return out;
}

Eigen::VectorXcd smallest_eigenvalues_sparse(const Eigen::SparseMatrix<double>& a, int k,
                                             std::uint64_t seed, double delta) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw InvalidInput("matrix must be square");
  if (k < 1 || k > n) throw InvalidInput("invalid eigenvalue count");
  if (!(delta > 0.0)) throw InvalidInput("shift must be positive");

  Eigen::SparseMatrix<double> id(n, n);
  id.setIdentity();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  for (int attempt = 0; attempt < 4; ++attempt) {
    Eigen::SparseMatrix<double> shifted = a + delta * id;
    shifted.makeCompressed();
    lu.compute(shifted);
    if (lu.info() == Eigen::Success) break;
    delta *= 10.0;
  }
  if (lu.info() != Eigen::Success)
    throw NoConvergence("sparse LU factorization failed", std::numeric_limits<double>::quiet_NaN());

  SplitMix64 rng(seed);
  double best_residual = std::numeric_limits<double>::infinity();
  Eigen::Index m = std::min<Eigen::Index>(n, std::max(3 * k + 30, 60));
  for (int round = 0; round < 4; ++round, m = std::min<Eigen::Index>(n, 2 * m)) {
    Eigen::MatrixXd basis(n, m + 1);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(m + 1, m);
    basis.col(0) = random_unit_vector(n, rng);
    Eigen::Index steps = m;
    bool invariant = false;
    for (Eigen::Index j = 0; j < m; ++j) {
      Eigen::VectorXd w = lu.solve(basis.col(j));
      for (int pass = 0; pass < 2; ++pass) {
        Eigen::VectorXd coeffs = basis.leftCols(j + 1).transpose() * w;
        w -= basis.leftCols(j + 1) * coeffs;
        hess.col(j).head(j + 1) += coeffs;
      }
      double beta = w.norm();
      if (beta < 1e-13) {
        steps = j + 1;
        invariant = true;
        break;
      }
      hess(j + 1, j) = beta;
      basis.col(j + 1) = w / beta;
    }

    Eigen::MatrixXd hm = hess.topLeftCorner(steps, steps);
    Eigen::EigenSolver<Eigen::MatrixXd> hsolver(hm);
    if (hsolver.info() != Eigen::Success) continue;
    const Eigen::VectorXcd mu = hsolver.eigenvalues();
    const Eigen::MatrixXcd s = hsolver.eigenvectors();
    const double tail = invariant ? 0.0 : hess(steps, steps - 1);

    struct Candidate {
      std::complex<double> lambda;
      double residual;
    };
    std::vector<Candidate> converged;
    for (Eigen::Index i = 0; i < steps; ++i) {
      if (std::abs(mu(i)) < 1e-300) continue;
      double residual = std::abs(tail) * std::abs(s(steps - 1, i)) / std::abs(mu(i));
      best_residual = std::min(best_residual, residual);
      if (residual <= 1e-8)
        converged.push_back({1.0 / mu(i) - delta, residual});
    }
    std::sort(converged.begin(), converged.end(), [](const Candidate& x, const Candidate& y) {
      if (x.lambda.real() != y.lambda.real()) return x.lambda.real() < y.lambda.real();
      return x.lambda.imag() < y.lambda.imag();
    });
    if (static_cast<int>(converged.size()) >= k) {
      Eigen::VectorXcd out(k);
      for (int i = 0; i < k; ++i) out(i) = converged[i].lambda;
      return out;
    }
    if (invariant || m >= n) break;
  }
  throw NoConvergence("Arnoldi failed to converge the requested eigenvalues", best_residual);
}

}  // namespace locov
