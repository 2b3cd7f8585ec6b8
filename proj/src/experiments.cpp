#include "locov/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "locov/eig_metric.hpp"
#include "locov/embedding.hpp"
#include "locov/errors.hpp"
#include "locov/geodesic.hpp"
#include "locov/linalg.hpp"
#include "locov/manifolds.hpp"
#include "locov/rng.hpp"

namespace locov {

namespace {

constexpr const char* kVersion = "locov/0.1.0";

ManifoldSample sample_from_config(const ExperimentConfig& cfg) {
  switch (manifold_from_string(cfg.manifold)) {
    case ManifoldId::spiral:
      return sample_spiral(cfg.n, cfg.s_min, cfg.s_max, cfg.seed);
    case ManifoldId::circle_uniform:
      return sample_circle_uniform(cfg.n, cfg.seed);
    case ManifoldId::circle_nonuniform:
      return sample_circle_nonuniform(cfg.n, cfg.seed);
    case ManifoldId::sphere:
      return sample_sphere(cfg.n, cfg.d, cfg.seed);
    case ManifoldId::segment:
      return sample_segment(cfg.n, cfg.seg_min, cfg.seg_max, cfg.seed);
  }
  throw ConfigError("manifold", "unknown manifold");
}

ResultTable new_table(const ExperimentConfig& cfg) {
  ResultTable table;
  table.add_metadata("tool", kVersion);
  cfg.echo_into(table);
  return table;
}

// Index of the point whose latent parameter is the (lower) median.
Eigen::Index median_latent_index(const ManifoldSample& sample) {
  std::vector<Eigen::Index> order(sample.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return sample.latent()(a, 0) < sample.latent()(b, 0);
  });
  return order[(order.size() - 1) / 2];
}

TangentFrame frame_at(const PointCloud& cloud, Eigen::Index i, double h_bar, int d) {
  NeighborSet nbrs = radius_neighbors(cloud, i, h_bar);
  return tangent_frame(sample_covariance(local_data_matrix(cloud, nbrs)), d);
}

std::vector<double> default_t_values(double eps) {
  std::vector<double> t = {eps / 8.0, eps / 4.0, std::pow(eps, 1.5), eps / 2.0, eps};
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

// Least-squares slope of log(err) against log(t).
double fit_log_slope(const std::vector<double>& t, const std::vector<double>& err) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    double x = std::log(t[i]);
    double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / denom;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> parse_pair_list(const std::string& text) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  std::string item;
  for (std::size_t pos = 0; pos <= text.size(); ++pos) {
    if (pos < text.size() && text[pos] != ';' && text[pos] != ',') {
      item += text[pos];
      continue;
    }
    if (!item.empty()) {
      std::size_t sep = item.find(':');
      if (sep == std::string::npos) throw ConfigError("pairs", "expected i:j entries");
      try {
        out.emplace_back(std::stol(item.substr(0, sep)), std::stol(item.substr(sep + 1)));
      } catch (const std::exception&) {
        throw ConfigError("pairs", "bad pair '" + item + "'");
      }
      item.clear();
    }
  }
  return out;
}

}  // namespace

ResultTable run_exp_spiral_geodesic(const ExperimentConfig& cfg) {
  if (cfg.manifold != "spiral") throw ConfigError("manifold", "this experiment runs on the spiral");
  ManifoldSample sample = sample_from_config(cfg);
  const PointCloud& cloud = sample.cloud();

  ResultTable table = new_table(cfg);
  const Eigen::Index ref = median_latent_index(sample);
  table.add_metadata("reference_index", static_cast<long long>(ref));
  table.add_metadata("reference_s", sample.latent()(ref, 0));

  // Local section: the reference point against every eps-ball neighbor, with
  // the symmetrized corrected estimate (frames at both endpoints, radius
  // h_bar).
  auto& local = table.add_section(
      "local", {"i", "j", "true_t", "euclid", "euclid_err", "corrected", "corrected_err"});
  NeighborSet nbrs = radius_neighbors(cloud, ref, cfg.eps);
  if (nbrs.indices.empty()) throw EmptyNeighborhood("reference point has no eps neighbors");
  TangentFrame ref_frame = frame_at(cloud, ref, cfg.h_bar, cfg.d);
  for (Eigen::Index j : nbrs.indices) {
    TangentFrame j_frame = frame_at(cloud, j, cfg.h_bar, cfg.d);
    GeodesicEstimate e1 = corrected_distance(cloud, ref, j, ref_frame);
    GeodesicEstimate e2 = corrected_distance(cloud, j, ref, j_frame);
    double corrected = 0.5 * (e1.corrected + e2.corrected);
    double t = sample.geodesic(ref, j);
    local.add_row({ResultTable::fmt_int(ref), ResultTable::fmt_int(j), ResultTable::fmt(t),
                   ResultTable::fmt(e1.euclidean), ResultTable::fmt(std::abs(e1.euclidean - t)),
                   ResultTable::fmt(corrected), ResultTable::fmt(std::abs(corrected - t))});
  }

  // Global section: shortest paths with Euclidean vs corrected edge weights.
  auto& global = table.add_section("global", {"source", "target", "true_t", "dijkstra_euclid",
                                              "euclid_err", "dijkstra_corrected",
                                              "corrected_err"});
  DistanceGraph graph_e = build_local_graph(cloud, cfg.h_bar, EdgeEstimator::euclidean, cfg.d);
  DistanceGraph graph_c = build_local_graph(cloud, cfg.h_bar, EdgeEstimator::corrected, cfg.d);

  SplitMix64 rng(cfg.seed ^ 0x7061746870616972ULL);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> path_pairs;
  for (long p = 0; p < cfg.path_pairs; ++p) {
    Eigen::Index a = static_cast<Eigen::Index>(rng.next_below(cloud.size()));
    Eigen::Index b = static_cast<Eigen::Index>(rng.next_below(cloud.size()));
    if (a == b) {
      --p;
      continue;
    }
    path_pairs.emplace_back(a, b);
  }
  std::map<Eigen::Index, std::vector<double>> dist_e, dist_c;
  for (const auto& [a, b] : path_pairs) {
    if (!dist_e.count(a)) {
      dist_e[a] = shortest_paths(graph_e, a);
      dist_c[a] = shortest_paths(graph_c, a);
    }
    double t = sample.geodesic(a, b);
    double de = dist_e[a][b];
    double dc = dist_c[a][b];
    global.add_row({ResultTable::fmt_int(a), ResultTable::fmt_int(b), ResultTable::fmt(t),
                    ResultTable::fmt(de), ResultTable::fmt(std::abs(de - t)),
                    ResultTable::fmt(dc), ResultTable::fmt(std::abs(dc - t))});
  }
  return table;
}

ResultTable run_exp_s1_eigenvalues(const ExperimentConfig& cfg) {
  if (cfg.manifold != "circle_nonuniform" && cfg.manifold != "circle_uniform")
    throw ConfigError("manifold", "this experiment runs on a circle");
  ManifoldSample sample = sample_from_config(cfg);
  const PointCloud& cloud = sample.cloud();

  ResultTable table = new_table(cfg);
  table.add_metadata("ldr_laplacian_scale", 2.0 * (cfg.d + 2) / (cfg.h * cfg.h));
  table.add_metadata("dm_laplacian_scale", 4.0 / (cfg.h * cfg.h));

  NeighborScale scale = cfg.neighbor_mode == "knn" ? NeighborScale::knn(cfg.knn_k)
                                                   : NeighborScale::radius(cfg.h);
  SparseMat w = assemble_lle_matrix(cloud, scale, WeightVariant::truncated(cfg.d));
  Eigen::VectorXd ldr =
      laplacian_eigenvalues(w, cfg.h, cfg.d, cfg.k_eigs, cfg.seed, cfg.dense_threshold);
  Eigen::VectorXd dm = diffusion_maps_eigenvalues(cloud, cfg.h, cfg.dm_alpha, cfg.k_eigs,
                                                  cfg.seed + 1, cfg.dense_threshold);

  auto& section = table.add_section("eigenvalues", {"index", "true_eig", "ldr_lle_eig", "dm_eig"});
  for (int i = 0; i < cfg.k_eigs; ++i) {
    double k = static_cast<double>((i + 1) / 2);
    section.add_row({ResultTable::fmt_int(i), ResultTable::fmt(k * k), ResultTable::fmt(ldr(i)),
                     ResultTable::fmt(dm(i))});
  }
  return table;
}

ResultTable run_exp_alpha_sensitivity(const ExperimentConfig& cfg) {
  if (cfg.manifold != "sphere") throw ConfigError("manifold", "this experiment runs on the sphere");
  ManifoldSample latent = sample_from_config(cfg);
  Deformation map = deformation_from_config(cfg.deformation, cfg.deform_scales, cfg.deform_amp,
                                            cfg.deform_freq, cfg.deform_amp2,
                                            latent.cloud().dim());
  DeformedDataset data = deform(std::move(latent), map);

  ResultTable table = new_table(cfg);
  table.add_metadata("deformation_detail", map.describe());
  std::vector<double> t_values = cfg.t_values.empty() ? default_t_values(cfg.eps) : cfg.t_values;

  EigParams params;
  params.eps = cfg.eps;
  std::vector<AlphaScanRow> rows = alpha_sensitivity_scan(data, cfg.alpha_list, params, t_values,
                                                          cfg.pairs_per_bucket, cfg.seed);

  auto& scan = table.add_section(
      "scan", {"alpha", "t", "mean_rel_error", "mean_abs_rel_error", "pairs", "skipped", "empty"});
  for (const auto& row : rows)
    scan.add_row({ResultTable::fmt_int(row.alpha), ResultTable::fmt(row.t),
                  ResultTable::fmt(row.bias), ResultTable::fmt(row.mean_abs),
                  ResultTable::fmt_int(row.pairs), ResultTable::fmt_int(row.skipped),
                  row.empty ? "1" : "0"});

  // Per-alpha exponent of the bias against t.
  auto& fit = table.add_section("fit", {"alpha", "exponent", "buckets"});
  for (int alpha : cfg.alpha_list) {
    std::vector<double> ts, errs;
    for (const auto& row : rows) {
      if (row.alpha != alpha || row.empty || !(row.bias > 0.0)) continue;
      ts.push_back(row.t);
      errs.push_back(row.bias);
    }
    double slope = ts.size() >= 2 ? fit_log_slope(ts, errs)
                                  : std::numeric_limits<double>::quiet_NaN();
    fit.add_row({ResultTable::fmt_int(alpha), ResultTable::fmt(slope),
                 ResultTable::fmt_int(static_cast<long long>(ts.size()))});
  }
  return table;
}

namespace {

ResultTable run_adhoc_covgeo(const ExperimentConfig& cfg, const PointCloud& cloud) {
  ResultTable table = new_table(cfg);
  auto& section = table.add_section("distances", {"i", "j", "euclid", "corrected"});
  std::vector<TangentFrame> frames(cloud.size());
  std::vector<bool> has_frame(cloud.size(), false);
  const double scale2 = cfg.h_bar * cfg.h_bar;
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    for (Eigen::Index j = i + 1; j < cloud.size(); ++j) {
      double h2 = (cloud.point(i) - cloud.point(j)).squaredNorm();
      if (h2 > scale2 || h2 < 1e-24) continue;
      for (Eigen::Index p : {i, j}) {
        if (!has_frame[p]) {
          frames[p] = frame_at(cloud, p, cfg.h_bar, cfg.d);
          has_frame[p] = true;
        }
      }
      GeodesicEstimate e1 = corrected_distance(cloud, i, j, frames[i]);
      GeodesicEstimate e2 = corrected_distance(cloud, j, i, frames[j]);
      section.add_row({ResultTable::fmt_int(i), ResultTable::fmt_int(j),
                       ResultTable::fmt(e1.euclidean),
                       ResultTable::fmt(0.5 * (e1.corrected + e2.corrected))});
    }
  }
  return table;
}

ResultTable run_adhoc_eig_dist(const ExperimentConfig& cfg, PointCloud observed) {
  if (cfg.pairs.empty()) throw ConfigError("pairs", "eig-dist needs a pair list");
  auto pair_list = parse_pair_list(cfg.pairs);

  EigParams params;
  params.alpha = cfg.alpha;
  params.eps = cfg.eps;

  ResultTable table = new_table(cfg);
  DeformedDataset data = [&]() -> DeformedDataset {
    if (!cfg.latent_csv.empty()) {
      if (cfg.manifold.empty())
        throw ConfigError("manifold", "latent oracle needs the manifold id");
      PointCloud latent_cloud = load_csv(cfg.latent_csv);
      if (latent_cloud.size() != observed.size())
        throw InvalidInput("latent and observed row counts differ");
      Eigen::MatrixXd latent = latent_cloud.coords();
      ManifoldSample sample(std::move(latent_cloud), std::move(latent),
                            manifold_from_string(cfg.manifold), cfg.d, cfg.seed);
      table.add_metadata("neighbor_source", "latent_oracle");
      return DeformedDataset{std::move(sample), std::move(observed)};
    }
    // No latent sidecar: fall back to observed-space balls. This drops the
    // known-ellipsoid assumption and is labeled as such.
    params.neighbors = EigParams::Neighbors::observed_ball;
    table.add_metadata("neighbor_source", "observed_ball_ablation");
    Eigen::MatrixXd latent = Eigen::MatrixXd::Zero(observed.size(), 1);
    for (Eigen::Index i = 0; i < observed.size(); ++i) latent(i, 0) = static_cast<double>(i);
    PointCloud cloud_copy(observed.coords());
    ManifoldSample sample(std::move(cloud_copy), std::move(latent), ManifoldId::segment, cfg.d,
                          cfg.seed);
    return DeformedDataset{std::move(sample), std::move(observed)};
  }();

  auto results = eig_distance_matrix(data, pair_list, params);
  auto& section = table.add_section("eig_distances", {"i", "j", "distance", "status"});
  for (const auto& r : results)
    section.add_row({ResultTable::fmt_int(r.i), ResultTable::fmt_int(r.j),
                     r.ok ? ResultTable::fmt(r.distance) : "",
                     r.ok ? "ok" : r.error});
  return table;
}

ResultTable run_adhoc_embedding(const ExperimentConfig& cfg, const PointCloud& cloud,
                                bool truncated) {
  NeighborScale scale = cfg.neighbor_mode == "knn" ? NeighborScale::knn(cfg.knn_k)
                                                   : NeighborScale::radius(cfg.h);
  WeightVariant variant =
      truncated ? WeightVariant::truncated(cfg.d) : WeightVariant::regularized(cfg.c);
  SparseMat w = assemble_lle_matrix(cloud, scale, variant);
  EmbeddingResult result = embed(w, cfg.ell, cfg.seed, cfg.dense_threshold);

  ResultTable table = new_table(cfg);
  std::vector<std::string> columns = {"index"};
  for (int j = 0; j < cfg.ell; ++j) columns.push_back("y" + std::to_string(j));
  auto& coords = table.add_section("coordinates", columns);
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    std::vector<std::string> row = {ResultTable::fmt_int(i)};
    for (int j = 0; j < cfg.ell; ++j) row.push_back(ResultTable::fmt(result.coordinates(i, j)));
    coords.add_row(std::move(row));
  }
  auto& spec = table.add_section("spectrum", {"index", "eigenvalue", "trivial"});
  for (int j = 0; j < cfg.ell; ++j) {
    bool trivial = std::find(result.trivial_columns.begin(), result.trivial_columns.end(), j) !=
                   result.trivial_columns.end();
    spec.add_row({ResultTable::fmt_int(j), ResultTable::fmt(result.spectrum(j)),
                  trivial ? "1" : "0"});
  }
  if (truncated) {
    Eigen::VectorXd lap =
        laplacian_eigenvalues(w, cfg.h, cfg.d, cfg.k_eigs, cfg.seed, cfg.dense_threshold);
    auto& section = table.add_section("laplacian_eigenvalues", {"index", "eigenvalue"});
    for (int i = 0; i < cfg.k_eigs; ++i)
      section.add_row({ResultTable::fmt_int(i), ResultTable::fmt(lap(i))});
  }
  return table;
}

ResultTable run_adhoc_dm(const ExperimentConfig& cfg, const PointCloud& cloud) {
  Eigen::VectorXd eigs = diffusion_maps_eigenvalues(cloud, cfg.h, cfg.dm_alpha, cfg.k_eigs,
                                                    cfg.seed, cfg.dense_threshold);
  ResultTable table = new_table(cfg);
  table.add_metadata("dm_laplacian_scale", 4.0 / (cfg.h * cfg.h));
  auto& section = table.add_section("dm_eigenvalues", {"index", "eigenvalue"});
  for (int i = 0; i < cfg.k_eigs; ++i)
    section.add_row({ResultTable::fmt_int(i), ResultTable::fmt(eigs(i))});
  return table;
}

}  // namespace

ResultTable run_adhoc(const std::string& subcommand, const ExperimentConfig& cfg) {
  if (cfg.input_csv.empty()) throw ConfigError("input_csv", "this subcommand needs an input cloud");
  PointCloud cloud = load_csv(cfg.input_csv);
  if (subcommand == "covgeo") return run_adhoc_covgeo(cfg, cloud);
  if (subcommand == "eig-dist") return run_adhoc_eig_dist(cfg, std::move(cloud));
  if (subcommand == "lle") return run_adhoc_embedding(cfg, cloud, false);
  if (subcommand == "ldr-lle") return run_adhoc_embedding(cfg, cloud, true);
  if (subcommand == "dm") return run_adhoc_dm(cfg, cloud);
  throw ConfigError("subcommand", "unknown subcommand '" + subcommand + "'");
}

ResultTable run_sample_export(const ExperimentConfig& cfg) {
  if (cfg.manifold.empty()) throw ConfigError("manifold", "sample needs a manifold");
  ManifoldSample sample = sample_from_config(cfg);

  std::filesystem::path points_path =
      cfg.out.empty() ? std::filesystem::path(cfg.output_dir) / (cfg.manifold + ".csv")
                      : std::filesystem::path(cfg.out);
  std::filesystem::path latent_path = points_path;
  latent_path.replace_extension("");
  latent_path += "_latent.csv";

  save_csv(sample.cloud().coords(), points_path);
  save_latent_csv(sample, latent_path);

  ResultTable table = new_table(cfg);
  table.add_metadata("points_csv", points_path.string());
  table.add_metadata("latent_csv", latent_path.string());
  auto& section = table.add_section("summary", {"n", "ambient_dim", "intrinsic_dim"});
  section.add_row({ResultTable::fmt_int(sample.size()), ResultTable::fmt_int(sample.cloud().dim()),
                   ResultTable::fmt_int(sample.intrinsic_dim())});
  return table;
}

}  // namespace locov
