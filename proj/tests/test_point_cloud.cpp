#include "locov/point_cloud.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "locov/errors.hpp"
#include "locov/rng.hpp"

using namespace locov;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  std::filesystem::path path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

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

// O(n) scan used as the oracle for both neighbor queries.
std::vector<Eigen::Index> brute_radius(const PointCloud& c, Eigen::Index center, double h) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index j = 0; j < c.size(); ++j)
    if (j != center && (c.point(j) - c.point(center)).norm() <= h) out.push_back(j);
  return out;
}

std::vector<Eigen::Index> brute_knn(const PointCloud& c, Eigen::Index center, int k) {
  std::vector<std::pair<double, Eigen::Index>> d;
  for (Eigen::Index j = 0; j < c.size(); ++j)
    if (j != center) d.emplace_back((c.point(j) - c.point(center)).norm(), j);
  std::sort(d.begin(), d.end());
  std::vector<Eigen::Index> out;
  for (int i = 0; i < k; ++i) out.push_back(d[static_cast<std::size_t>(i)].second);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("load_csv") {
  TEST_CASE("three 2-d points") {
    auto path = write_temp("pc_basic.csv", "0,0\n1,0\n0,1");
    PointCloud cloud = load_csv(path);
    CHECK(cloud.size() == 3);
    CHECK(cloud.dim() == 2);
    CHECK(cloud.coords()(2, 1) == 1.0);
  }

  TEST_CASE("CRLF newlines parse the same as LF") {
    auto lf = load_csv(write_temp("pc_lf.csv", "1.5,2\n3,4\n"));
    auto crlf = load_csv(write_temp("pc_crlf.csv", "1.5,2\r\n3,4\r\n"));
    CHECK((lf.coords() - crlf.coords()).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("empty file is a format error") {
    auto path = write_temp("pc_empty.csv", "");
    CHECK_THROWS_AS(load_csv(path), FormatError);
  }

  TEST_CASE("header row is rejected as a parse error at 1,1") {
    auto path = write_temp("pc_header.csv", "x,y\n1,2\n");
    try {
      load_csv(path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 1);
      CHECK(e.column == 1);
    }
  }

  TEST_CASE("ragged rows report the offending line") {
    auto path = write_temp("pc_ragged.csv", "1,2\n3\n");
    try {
      load_csv(path);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.line == 2);
    }
  }

  TEST_CASE("non-numeric interior cell reports line and column") {
    auto path = write_temp("pc_bad_cell.csv", "1,2\n3,oops\n");
    try {
      load_csv(path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 2);
      CHECK(e.column == 2);
    }
  }

  TEST_CASE("save and reload round-trips exactly") {
    SplitMix64 rng(5);
    Eigen::MatrixXd m(20, 3);
    for (Eigen::Index i = 0; i < 20; ++i)
      for (Eigen::Index j = 0; j < 3; ++j) m(i, j) = rng.next_gaussian();
    auto path = std::filesystem::temp_directory_path() / "pc_roundtrip.csv";
    save_csv(m, path);
    PointCloud cloud = load_csv(path);
    CHECK((cloud.coords() - m).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("missing file is an io error") {
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), IoError);
  }
}

TEST_SUITE("radius_neighbors") {
  TEST_CASE("simple line of points") {
    PointCloud cloud = make_cloud({{0, 0}, {1, 0}, {3, 0}});
    NeighborSet nbrs = radius_neighbors(cloud, 0, 1.5);
    CHECK(nbrs.indices == std::vector<Eigen::Index>{1});
  }

  TEST_CASE("empty result is allowed") {
    PointCloud cloud = make_cloud({{0, 0}, {1, 0}, {3, 0}});
    CHECK(radius_neighbors(cloud, 0, 0.5).indices.empty());
  }

  TEST_CASE("boundary points at exactly h are included") {
    PointCloud cloud = make_cloud({{0, 0}, {1, 0}, {-1, 0}, {0, 2}});
    NeighborSet nbrs = radius_neighbors(cloud, 0, 1.0);
    CHECK(nbrs.indices == std::vector<Eigen::Index>{1, 2});
  }

  TEST_CASE("duplicate of the center appears at distance zero") {
    PointCloud cloud = make_cloud({{1, 1}, {1, 1}, {5, 5}});
    NeighborSet nbrs = radius_neighbors(cloud, 0, 0.1);
    CHECK(nbrs.indices == std::vector<Eigen::Index>{1});
  }

  TEST_CASE("bad arguments") {
    PointCloud cloud = make_cloud({{0, 0}, {1, 0}});
    CHECK_THROWS_AS(radius_neighbors(cloud, 5, 1.0), IndexError);
    CHECK_THROWS_AS(radius_neighbors(cloud, 0, 0.0), InvalidInput);
  }
}

TEST_SUITE("knn_neighbors") {
  TEST_CASE("nearest single point") {
    PointCloud cloud = make_cloud({{0, 0}, {1, 0}, {3, 0}});
    CHECK(knn_neighbors(cloud, 0, 1).indices == std::vector<Eigen::Index>{1});
  }

  TEST_CASE("equidistant tie breaks toward the smaller index") {
    PointCloud cloud = make_cloud({{0, 0}, {1, 0}, {-1, 0}});
    CHECK(knn_neighbors(cloud, 0, 1).indices == std::vector<Eigen::Index>{1});
  }

  TEST_CASE("k out of range") {
    PointCloud cloud = make_cloud({{0, 0}, {1, 0}});
    CHECK_THROWS_AS(knn_neighbors(cloud, 0, 2), InvalidInput);
    CHECK_THROWS_AS(knn_neighbors(cloud, 0, 0), InvalidInput);
  }
}

TEST_SUITE("neighbor properties") {
  TEST_CASE("both queries match the brute-force oracle on random clouds") {
    SplitMix64 rng(41);
    Eigen::MatrixXd m(50, 3);
    for (Eigen::Index i = 0; i < 50; ++i)
      for (Eigen::Index j = 0; j < 3; ++j) m(i, j) = rng.next_gaussian();
    PointCloud cloud(std::move(m));
    for (int trial = 0; trial < 30; ++trial) {
      Eigen::Index center = static_cast<Eigen::Index>(rng.next_below(50));
      double h = 0.5 + 2.0 * rng.next_double();
      CHECK(radius_neighbors(cloud, center, h).indices == brute_radius(cloud, center, h));
      int k = 1 + static_cast<int>(rng.next_below(10));
      CHECK(knn_neighbors(cloud, center, k).indices == brute_knn(cloud, center, k));
    }
  }

  TEST_CASE("radius relation is symmetric") {
    SplitMix64 rng(43);
    Eigen::MatrixXd m(40, 2);
    for (Eigen::Index i = 0; i < 40; ++i)
      for (Eigen::Index j = 0; j < 2; ++j) m(i, j) = rng.next_gaussian();
    PointCloud cloud(std::move(m));
    const double h = 1.0;
    for (Eigen::Index i = 0; i < 40; ++i) {
      for (Eigen::Index j : radius_neighbors(cloud, i, h).indices) {
        auto back = radius_neighbors(cloud, j, h).indices;
        CHECK(std::find(back.begin(), back.end(), i) != back.end());
      }
    }
  }
}
