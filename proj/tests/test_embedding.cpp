#include "locov/embedding.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "locov/errors.hpp"
#include "locov/manifolds.hpp"
#include "locov/rng.hpp"

using namespace locov;

namespace {

PointCloud make_cloud(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return PointCloud(std::move(m));
}

LocalDataMatrix data_matrix_from_offsets(const Eigen::MatrixXd& offsets) {
  LocalDataMatrix g;
  g.center = 0;
  g.columns = offsets;
  g.neighborhood.center = 0;
  for (Eigen::Index j = 0; j < offsets.cols(); ++j) g.neighborhood.indices.push_back(j + 1);
  return g;
}

// Direct Gram-matrix route: solve (G^T G + c I) y = 1 and normalize. This is
// the oracle the covariance-form implementation must reproduce.
Eigen::VectorXd gram_weights_oracle(const Eigen::MatrixXd& g, double c) {
  const Eigen::Index n = g.cols();
  Eigen::MatrixXd gram = g.transpose() * g + c * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd y = gram.ldlt().solve(Eigen::VectorXd::Ones(n));
  return y / y.sum();
}

// Equality-constrained least squares via the KKT system:
// minimize ||G w||^2 subject to w^T 1 = 1.
Eigen::VectorXd kkt_weights_oracle(const Eigen::MatrixXd& g) {
  const Eigen::Index n = g.cols();
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 1, n + 1);
  kkt.topLeftCorner(n, n) = 2.0 * g.transpose() * g;
  kkt.topRightCorner(n, 1).setOnes();
  kkt.bottomLeftCorner(1, n).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs(n) = 1.0;
  Eigen::VectorXd sol = Eigen::FullPivLU<Eigen::MatrixXd>(kkt).solve(rhs);
  return sol.head(n);
}

Eigen::MatrixXd circle_grid_coords(Eigen::Index n) {
  Eigen::MatrixXd m(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    double phi = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    m(i, 0) = std::cos(phi);
    m(i, 1) = std::sin(phi);
  }
  return m;
}

}  // namespace

TEST_SUITE("lle_weights") {
  TEST_CASE("symmetric neighbors force equal weights for any c") {
    Eigen::MatrixXd offsets(1, 2);
    offsets << -1, 1;
    for (double c : {1e-8, 0.1, 5.0}) {
      WeightRow row = lle_weights(data_matrix_from_offsets(offsets), c);
      CHECK(row.weights(0) == doctest::Approx(0.5));
      CHECK(row.weights(1) == doctest::Approx(0.5));
    }
  }

  TEST_CASE("one-sided neighbors 1 and 2 at c to 0 give (2, -1)") {
    Eigen::MatrixXd offsets(1, 2);
    offsets << 1, 2;
    WeightRow row = lle_weights(data_matrix_from_offsets(offsets), 1e-12);
    CHECK(row.weights(0) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(row.weights(1) == doctest::Approx(-1.0).epsilon(1e-8));
  }

  TEST_CASE("worked c = 5 case equals (7/11, 4/11)") {
    Eigen::MatrixXd offsets(1, 2);
    offsets << 1, 2;
    WeightRow row = lle_weights(data_matrix_from_offsets(offsets), 5.0);
    CHECK(row.weights(0) == doctest::Approx(7.0 / 11.0));
    CHECK(row.weights(1) == doctest::Approx(4.0 / 11.0));
  }

  TEST_CASE("covariance form equals the direct Gram solve on 200 random neighborhoods") {
    SplitMix64 rng(61);
    for (int trial = 0; trial < 200; ++trial) {
      Eigen::Index p = 1 + static_cast<Eigen::Index>(rng.next_below(5));
      Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.next_below(8));
      Eigen::MatrixXd offsets(p, n);
      for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < n; ++j) offsets(i, j) = rng.next_gaussian();
      double c = 1e-4 + rng.next_double();
      WeightRow row = lle_weights(data_matrix_from_offsets(offsets), c);
      Eigen::VectorXd oracle = gram_weights_oracle(offsets, c);
      CHECK((row.weights - oracle).cwiseAbs().maxCoeff() <= 1e-8);
      CHECK(std::abs(row.weights.sum() - 1.0) <= 1e-10);
    }
  }

  TEST_CASE("c to 0 limit matches the KKT constrained least-squares oracle") {
    // With a full-rank Gram matrix the denominator of the covariance-form
    // weights shrinks like c, so the working precision floor sits near
    // eps_machine / c. c = 1e-8 keeps both the O(c) gap and that floor below
    // the tolerance on well-conditioned neighborhoods.
    SplitMix64 rng(67);
    int accepted = 0;
    while (accepted < 30) {
      Eigen::Index p = 2 + static_cast<Eigen::Index>(rng.next_below(4));
      Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.next_below(p));
      Eigen::MatrixXd offsets(p, n);
      for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < n; ++j) offsets(i, j) = rng.next_gaussian();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram(offsets.transpose() * offsets);
      if (gram.eigenvalues()(0) < 0.1) continue;
      ++accepted;
      WeightRow row = lle_weights(data_matrix_from_offsets(offsets), 1e-8);
      Eigen::VectorXd oracle = kkt_weights_oracle(offsets);
      CHECK((row.weights - oracle).cwiseAbs().maxCoeff() <= 1e-5);
    }
  }
}

TEST_SUITE("ldr_lle_weights") {
  TEST_CASE("1-d neighbors reproduce the regularization-free limits") {
    Eigen::MatrixXd one_sided(1, 2);
    one_sided << 1, 2;
    WeightRow row = ldr_lle_weights(data_matrix_from_offsets(one_sided), 1);
    CHECK(row.weights(0) == doctest::Approx(2.0));
    CHECK(row.weights(1) == doctest::Approx(-1.0));

    Eigen::MatrixXd symmetric(1, 2);
    symmetric << -1, 1;
    WeightRow row2 = ldr_lle_weights(data_matrix_from_offsets(symmetric), 1);
    CHECK(row2.weights(0) == doctest::Approx(0.5));
    CHECK(row2.weights(1) == doctest::Approx(0.5));
  }

  TEST_CASE("small transverse perturbation is truncated away") {
    const double delta = 0.01;
    Eigen::MatrixXd offsets(2, 2);
    offsets << 1, 2, delta, -delta;
    WeightRow row = ldr_lle_weights(data_matrix_from_offsets(offsets), 1);
    CHECK(std::abs(row.weights(0) - 2.0) <= 1e-3);
    CHECK(std::abs(row.weights(1) + 1.0) <= 1e-3);
  }

  TEST_CASE("rank below d is a rank error") {
    Eigen::MatrixXd offsets(2, 2);
    offsets << 1, 2, 0, 0;
    CHECK_THROWS_AS(ldr_lle_weights(data_matrix_from_offsets(offsets), 2), RankExceeded);
  }

  TEST_CASE("equals the c to 0 regularized weights when rank is exactly d") {
    SplitMix64 rng(71);
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::Index p = 3 + static_cast<Eigen::Index>(rng.next_below(3));
      int d = 1 + static_cast<int>(rng.next_below(2));
      Eigen::Index n = static_cast<Eigen::Index>(d) + 1 + static_cast<Eigen::Index>(rng.next_below(4));
      Eigen::MatrixXd u(p, d), v(d, n);
      for (Eigen::Index i = 0; i < p; ++i)
        for (int j = 0; j < d; ++j) u(i, j) = rng.next_gaussian();
      for (int i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < n; ++j) v(i, j) = rng.next_gaussian();
      Eigen::MatrixXd offsets = u * v;  // rank exactly d
      WeightRow truncated = ldr_lle_weights(data_matrix_from_offsets(offsets), d);
      WeightRow limit = lle_weights(data_matrix_from_offsets(offsets), 1e-12);
      CHECK((truncated.weights - limit.weights).cwiseAbs().maxCoeff() <= 1e-7);
    }
  }

  TEST_CASE("weights are invariant under rigid motions") {
    SplitMix64 rng(73);
    Eigen::MatrixXd m(15, 3);
    for (Eigen::Index i = 0; i < 15; ++i)
      for (Eigen::Index j = 0; j < 3; ++j) m(i, j) = rng.next_gaussian();
    // Fixed rotation about two axes plus a translation.
    Eigen::Matrix3d rot =
        (Eigen::AngleAxisd(0.7, Eigen::Vector3d::UnitZ()) *
         Eigen::AngleAxisd(-0.3, Eigen::Vector3d::UnitX()))
            .toRotationMatrix();
    Eigen::RowVector3d shift(2.0, -1.0, 0.5);
    Eigen::MatrixXd moved = (m * rot.transpose()).rowwise() + shift;

    PointCloud original(m), transformed(moved);
    for (Eigen::Index center = 0; center < 5; ++center) {
      NeighborSet nbrs = knn_neighbors(original, center, 5);
      WeightRow a = ldr_lle_weights(local_data_matrix(original, nbrs), 2);
      WeightRow b = ldr_lle_weights(local_data_matrix(transformed, nbrs), 2);
      CHECK((a.weights - b.weights).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_SUITE("assemble_lle_matrix") {
  TEST_CASE("three equally spaced points with knn 2") {
    PointCloud cloud = make_cloud({{0, 0}, {1, 0}, {2, 0}});
    SparseMat w = assemble_lle_matrix(cloud, NeighborScale::knn(2), WeightVariant::regularized(1e-9));
    Eigen::MatrixXd dense(w);
    for (Eigen::Index i = 0; i < 3; ++i) {
      CHECK(dense(i, i) == 0.0);
      CHECK(dense.row(i).sum() == doctest::Approx(1.0).epsilon(1e-10));
    }
    // Interior row matches the per-row computation.
    WeightRow row = lle_weights(local_data_matrix(cloud, knn_neighbors(cloud, 1, 2)), 1e-9);
    CHECK(dense(1, 0) == doctest::Approx(row.weights(0)));
    CHECK(dense(1, 2) == doctest::Approx(row.weights(1)));
  }

  TEST_CASE("two mutual neighbors give the swap matrix") {
    PointCloud cloud = make_cloud({{0, 0}, {1, 0}});
    SparseMat w = assemble_lle_matrix(cloud, NeighborScale::radius(1.5), WeightVariant::regularized(0.0));
    Eigen::MatrixXd dense(w);
    CHECK(dense(0, 1) == doctest::Approx(1.0));
    CHECK(dense(1, 0) == doctest::Approx(1.0));
    CHECK(dense(0, 0) == 0.0);
    CHECK(dense(1, 1) == 0.0);
  }

  TEST_CASE("label permutation conjugates the matrix") {
    SplitMix64 rng(79);
    Eigen::MatrixXd m(12, 2);
    for (Eigen::Index i = 0; i < 12; ++i)
      for (Eigen::Index j = 0; j < 2; ++j) m(i, j) = rng.next_gaussian();
    std::vector<Eigen::Index> perm = {4, 7, 0, 2, 9, 1, 11, 3, 10, 5, 8, 6};
    Eigen::MatrixXd permuted(12, 2);
    for (Eigen::Index i = 0; i < 12; ++i) permuted.row(perm[i]) = m.row(i);

    SparseMat w = assemble_lle_matrix(PointCloud(m), NeighborScale::knn(4),
                                      WeightVariant::regularized(0.01));
    SparseMat wp = assemble_lle_matrix(PointCloud(permuted), NeighborScale::knn(4),
                                       WeightVariant::regularized(0.01));
    Eigen::MatrixXd dense(w), densep(wp);
    for (Eigen::Index i = 0; i < 12; ++i)
      for (Eigen::Index j = 0; j < 12; ++j)
        CHECK(densep(perm[i], perm[j]) == doctest::Approx(dense(i, j)).epsilon(1e-12));
  }

  TEST_CASE("isolated point raises with its index") {
    PointCloud cloud = make_cloud({{0, 0}, {1, 0}, {50, 50}});
    try {
      assemble_lle_matrix(cloud, NeighborScale::radius(2.0), WeightVariant::regularized(0.0));
      FAIL("expected IsolatedPoint");
    } catch (const IsolatedPoint& e) {
      CHECK(e.index == 2);
    }
  }

  TEST_CASE("every row sums to one across variants and scales") {
    ManifoldSample sample = sample_circle_nonuniform(300, 83);
    for (const WeightVariant& variant :
         {WeightVariant::regularized(0.0), WeightVariant::regularized(1e-3),
          WeightVariant::truncated(1)}) {
      SparseMat w = assemble_lle_matrix(sample.cloud(), NeighborScale::radius(0.15), variant);
      Eigen::VectorXd sums = w * Eigen::VectorXd::Ones(300);
      CHECK((sums.array() - 1.0).abs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_SUITE("embed") {
  TEST_CASE("row sums to one force a near-zero constant mode") {
    PointCloud cloud = make_cloud({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}});
    SparseMat w = assemble_lle_matrix(cloud, NeighborScale::knn(2), WeightVariant::regularized(1e-6));
    EmbeddingResult result = embed(w, 2, 5);
    CHECK(result.spectrum(0) <= 1e-10);
    CHECK(std::find(result.trivial_columns.begin(), result.trivial_columns.end(), 0) !=
          result.trivial_columns.end());
  }

  TEST_CASE("uniform circle embeds as a closed curve with monotone angle") {
    const Eigen::Index n = 200;
    PointCloud cloud{circle_grid_coords(n)};
    SparseMat w = assemble_lle_matrix(cloud, NeighborScale::knn(8), WeightVariant::regularized(0.0));
    EmbeddingResult result = embed(w, 3, 7);
    REQUIRE(!result.trivial_columns.empty());
    CHECK(result.trivial_columns[0] == 0);

    // Points are stored in angular order, so the two nontrivial coordinates
    // should wind around the origin exactly once, monotonically.
    std::vector<double> angles(n);
    for (Eigen::Index i = 0; i < n; ++i)
      angles[i] = std::atan2(result.coordinates(i, 2), result.coordinates(i, 1));
    double winding = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double step = angles[(i + 1) % n] - angles[i];
      if (step > std::numbers::pi) step -= 2.0 * std::numbers::pi;
      if (step < -std::numbers::pi) step += 2.0 * std::numbers::pi;
      winding += step;
    }
    CHECK(std::abs(std::abs(winding) - 2.0 * std::numbers::pi) <= 1e-6);
  }

  TEST_CASE("coordinates satisfy the eigen residual bound") {
    ManifoldSample sample = sample_circle_uniform(150, 89);
    SparseMat w = assemble_lle_matrix(sample.cloud(), NeighborScale::knn(6),
                                      WeightVariant::regularized(0.0));
    EmbeddingResult result = embed(w, 4, 11);
    SparseMat id(150, 150);
    id.setIdentity();
    SparseMat e = id - w;
    for (int j = 0; j < 4; ++j) {
      Eigen::VectorXd v = result.coordinates.col(j);
      double residual = (e.transpose() * (e * v) - result.spectrum(j) * v).norm();
      CHECK(residual <= 1e-7);
    }
  }

  TEST_CASE("ell must stay below n") {
    PointCloud cloud = make_cloud({{0, 0}, {1, 0}});
    SparseMat w = assemble_lle_matrix(cloud, NeighborScale::radius(2.0), WeightVariant::regularized(0.0));
    CHECK_THROWS_AS(embed(w, 2, 1), InvalidInput);
  }
}

TEST_SUITE("laplacian_eigenvalues") {
  TEST_CASE("10-point circle matches a dense oracle of the rescaled matrix") {
    PointCloud cloud{circle_grid_coords(10)};
    SparseMat w = assemble_lle_matrix(cloud, NeighborScale::knn(2), WeightVariant::truncated(1));
    const double h = 0.8;
    Eigen::VectorXd eigs = laplacian_eigenvalues(w, h, 1, 3, 3);

    Eigen::MatrixXd dense = Eigen::MatrixXd::Identity(10, 10) - Eigen::MatrixXd(w);
    Eigen::EigenSolver<Eigen::MatrixXd> oracle(dense);
    std::vector<double> re(10);
    for (int i = 0; i < 10; ++i) re[static_cast<std::size_t>(i)] = oracle.eigenvalues()(i).real();
    std::sort(re.begin(), re.end());
    const double rescale = 2.0 * 3.0 / (h * h);
    for (int i = 0; i < 3; ++i)
      CHECK(eigs(i) == doctest::Approx(rescale * re[static_cast<std::size_t>(i)]).epsilon(1e-9));
  }

  TEST_CASE("uniform circle recovers the classical k^2 spectrum") {
    ManifoldSample sample = sample_circle_uniform(1500, 97);
    SparseMat w = assemble_lle_matrix(sample.cloud(), NeighborScale::radius(0.06),
                                      WeightVariant::truncated(1));
    Eigen::VectorXd eigs = laplacian_eigenvalues(w, 0.06, 1, 5, 3);
    CHECK(std::abs(eigs(0)) <= 0.05);
    CHECK(eigs(1) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(eigs(2) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(eigs(3) == doctest::Approx(4.0).epsilon(0.1));
    CHECK(eigs(4) == doctest::Approx(4.0).epsilon(0.1));
  }

  TEST_CASE("sparse shift-invert path agrees with the dense path") {
    ManifoldSample sample = sample_circle_uniform(400, 101);
    SparseMat w = assemble_lle_matrix(sample.cloud(), NeighborScale::radius(0.15),
                                      WeightVariant::truncated(1));
    Eigen::VectorXd dense = laplacian_eigenvalues(w, 0.15, 1, 4, 7, 3000);
    Eigen::VectorXd sparse = laplacian_eigenvalues(w, 0.15, 1, 4, 7, 10);
    for (int i = 0; i < 4; ++i)
      CHECK(sparse(i) == doctest::Approx(dense(i)).epsilon(1e-6));
  }
}

TEST_SUITE("diffusion_maps_eigenvalues") {
  TEST_CASE("uniform circle with full density normalization") {
    ManifoldSample sample = sample_circle_uniform(2000, 103);
    Eigen::VectorXd eigs = diffusion_maps_eigenvalues(sample.cloud(), 0.05, 1.0, 5, 1);
    CHECK(std::abs(eigs(0)) <= 0.05);
    CHECK(eigs(1) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(eigs(2) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(eigs(3) == doctest::Approx(4.0).epsilon(0.1));
    CHECK(eigs(4) == doctest::Approx(4.0).epsilon(0.1));
  }

  TEST_CASE("two points give one finite nontrivial eigenvalue") {
    PointCloud cloud = make_cloud({{0, 0}, {0.1, 0}});
    Eigen::VectorXd eigs = diffusion_maps_eigenvalues(cloud, 0.3, 1.0, 2, 1);
    CHECK(std::abs(eigs(0)) <= 1e-9);
    CHECK(std::isfinite(eigs(1)));
    CHECK(eigs(1) > 0.0);
  }

  TEST_CASE("iterative path matches the dense path") {
    ManifoldSample sample = sample_circle_uniform(500, 107);
    Eigen::VectorXd dense = diffusion_maps_eigenvalues(sample.cloud(), 0.1, 1.0, 4, 9, 3000);
    Eigen::VectorXd sparse = diffusion_maps_eigenvalues(sample.cloud(), 0.1, 1.0, 4, 9, 10);
    for (int i = 0; i < 4; ++i)
      CHECK(sparse(i) == doctest::Approx(dense(i)).epsilon(1e-6));
  }
}
