#include "locov/eig_metric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include "locov/errors.hpp"
#include "locov/linalg.hpp"
#include "locov/local_covariance.hpp"
#include "locov/rng.hpp"

namespace locov {

Deformation Deformation::identity() { return Deformation{}; }

Deformation Deformation::linear(Eigen::MatrixXd map) {
  Deformation d;
  d.kind = Kind::linear;
  d.linear_map = std::move(map);
  if (d.linear_map.rows() < d.linear_map.cols())
    throw InvalidInput("linear deformation must not collapse dimensions");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(d.linear_map);
  if (lu.rank() < d.linear_map.cols())
    throw InvalidInput("linear deformation must have full column rank");
  return d;
}

Deformation Deformation::sine_warp(double amp, double freq) {
  if (std::abs(amp * freq) >= 1.0)
    throw InvalidInput("sine warp needs |amp * freq| < 1 to stay a diffeomorphism");
  Deformation d;
  d.kind = Kind::sine_warp;
  d.amp = amp;
  d.freq = freq;
  return d;
}

Deformation Deformation::sphere_bend(double amp, double amp2) {
  Deformation d;
  d.kind = Kind::sphere_bend;
  d.amp = amp;
  d.amp2 = amp2;
  return d;
}

Eigen::RowVectorXd Deformation::apply(const Eigen::RowVectorXd& x) const {
  switch (kind) {
    case Kind::identity:
      return x;
    case Kind::linear:
      if (linear_map.cols() != x.size()) throw InvalidInput("deformation dimension mismatch");
      return x * linear_map.transpose();
    case Kind::sine_warp: {
      Eigen::RowVectorXd y = x;
      for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += amp * std::sin(freq * x(i));
      return y;
    }
    case Kind::sphere_bend: {
      if (x.size() != 3) throw InvalidInput("sphere bend expects points in R^3");
      Eigen::RowVectorXd y(4);
      y.head(3) = x;
      y(3) = amp * (x(0) * x(0) - x(1) * x(1)) + amp2 * x(0) * x(1);
      return y;
    }
  }
  throw InvalidInput("unknown deformation");
}

std::string Deformation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::identity:
      os << "identity";
      break;
    case Kind::linear: {
      os << "linear[";
      for (Eigen::Index i = 0; i < linear_map.rows(); ++i)
        for (Eigen::Index j = 0; j < linear_map.cols(); ++j)
          os << (i + j ? "," : "") << linear_map(i, j);
      os << "]";
      break;
    }
    case Kind::sine_warp:
      os << "sine_warp[amp=" << amp << ",freq=" << freq << "]";
      break;
    case Kind::sphere_bend:
      os << "sphere_bend[amp=" << amp << ",amp2=" << amp2 << "]";
      break;
  }
  return os.str();
}

Deformation deformation_from_config(const std::string& name, const std::vector<double>& scales,
                                    double amp, double freq, double amp2,
                                    Eigen::Index latent_dim) {
  if (name == "identity") return Deformation::identity();
  if (name == "linear") {
    if (scales.empty()) throw ConfigError("deform_scales", "linear deformation needs scales");
    if (static_cast<Eigen::Index>(scales.size()) != latent_dim)
      throw ConfigError("deform_scales", "expected one scale per latent coordinate");
    Eigen::MatrixXd map = Eigen::MatrixXd::Zero(latent_dim, latent_dim);
    for (Eigen::Index i = 0; i < latent_dim; ++i) map(i, i) = scales[static_cast<size_t>(i)];
    return Deformation::linear(std::move(map));
  }
  if (name == "sine_warp") return Deformation::sine_warp(amp, freq);
  if (name == "sphere_bend") return Deformation::sphere_bend(amp, amp2);
  throw ConfigError("deformation", "unknown deformation '" + name + "'");
}

DeformedDataset deform(ManifoldSample latent, const Deformation& map) {
  const Eigen::Index n = latent.size();
  Eigen::RowVectorXd probe = map.apply(latent.cloud().point(0));
  Eigen::MatrixXd observed(n, probe.size());
  observed.row(0) = probe;
  for (Eigen::Index i = 1; i < n; ++i) observed.row(i) = map.apply(latent.cloud().point(i));
  return DeformedDataset{std::move(latent), PointCloud(std::move(observed))};
}

NeighborSet ellipsoid_neighbors(const DeformedDataset& data, Eigen::Index i, double eps) {
  if (i < 0 || i >= data.latent.size()) throw IndexError("point index out of range");
  if (!(eps > 0.0)) throw InvalidInput("eps must be positive");
  NeighborSet out;
  out.center = i;
  out.mode = NeighborMode::radius;
  out.radius = eps;
  for (Eigen::Index j = 0; j < data.latent.size(); ++j) {
    if (j == i) continue;
    if (data.latent.geodesic(i, j) <= eps) out.indices.push_back(j);
  }
  if (out.indices.empty())
    throw EmptyNeighborhood("no latent neighbors within eps of point " + std::to_string(i));
  return out;
}

NeighborSet observed_ball_neighbors(const DeformedDataset& data, Eigen::Index i, double eps) {
  NeighborSet out = radius_neighbors(data.observed, i, eps);
  if (out.indices.empty())
    throw EmptyNeighborhood("no observed neighbors within eps of point " + std::to_string(i));
  return out;
}

namespace {

// T_alpha of the normalized local covariance at one point, with the rank
// available so callers can decide between erroring and skipping.
struct PointInverse {
  Eigen::MatrixXd t_alpha;
  Eigen::Index rank = 0;
  bool ok = false;
  bool rank_deficient = false;
  std::string error;
};

PointInverse point_truncated_inverse(const DeformedDataset& data, Eigen::Index i,
                                     const EigParams& params) {
  PointInverse out;
  try {
    NeighborSet nbrs = params.neighbors == EigParams::Neighbors::latent_oracle
                           ? ellipsoid_neighbors(data, i, params.eps)
                           : observed_ball_neighbors(data, i, params.eps);
    LocalDataMatrix g = local_data_matrix(data.observed, nbrs);
    LocalCovariance cov = normalized_covariance(g, params.eps);
    SymEig eig = sym_eig(cov.matrix);
    out.rank = eig.rank;
    if (out.rank < params.alpha) {
      out.rank_deficient = true;
      out.error = "alpha " + std::to_string(params.alpha) + " exceeds covariance rank " +
                  std::to_string(out.rank) + " at point " + std::to_string(i);
      return out;
    }
    out.t_alpha = truncated_inverse(cov.matrix, params.alpha).mat();
    out.ok = true;
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

double eig_distance(const DeformedDataset& data, Eigen::Index i, Eigen::Index j,
                    const EigParams& params) {
  if (params.alpha < 1) throw InvalidInput("alpha must be at least 1");
  if (i == j) return 0.0;
  PointInverse a = point_truncated_inverse(data, i, params);
  PointInverse b = point_truncated_inverse(data, j, params);
  for (const PointInverse* p : {&a, &b}) {
    if (p->ok) continue;
    if (p->rank_deficient) throw RankExceeded(p->error);
    throw EmptyNeighborhood(p->error);
  }
  Eigen::VectorXd delta = (data.observed.point(i) - data.observed.point(j)).transpose();
  double quad = 0.5 * delta.dot((a.t_alpha + b.t_alpha) * delta);
  return std::sqrt(std::max(quad, 0.0));
}

std::vector<PairResult> eig_distance_matrix(
    const DeformedDataset& data, const std::vector<std::pair<Eigen::Index, Eigen::Index>>& pairs,
    const EigParams& params) {
  if (params.alpha < 1) throw InvalidInput("alpha must be at least 1");
  std::unordered_map<Eigen::Index, PointInverse> cache;
  auto inverse_at = [&](Eigen::Index i) -> const PointInverse& {
    auto it = cache.find(i);
    if (it == cache.end())
      it = cache.emplace(i, point_truncated_inverse(data, i, params)).first;
    return it->second;
  };

  std::vector<PairResult> out;
  out.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    PairResult r;
    r.i = i;
    r.j = j;
    if (i == j) {
      r.ok = true;
      out.push_back(r);
      continue;
    }
    const PointInverse& a = inverse_at(i);
    const PointInverse& b = inverse_at(j);
    if (!a.ok || !b.ok) {
      r.error = !a.ok ? a.error : b.error;
      out.push_back(r);
      continue;
    }
    Eigen::VectorXd delta = (data.observed.point(i) - data.observed.point(j)).transpose();
    r.distance = std::sqrt(std::max(0.5 * delta.dot((a.t_alpha + b.t_alpha) * delta), 0.0));
    r.ok = true;
    out.push_back(r);
  }
  return out;
}

std::vector<AlphaScanRow> alpha_sensitivity_scan(const DeformedDataset& data,
                                                 const std::vector<int>& alphas,
                                                 const EigParams& params,
                                                 const std::vector<double>& t_values,
                                                 long pairs_per_bucket, std::uint64_t seed) {
  if (pairs_per_bucket < 1) throw InvalidInput("pairs_per_bucket must be positive");
  const Eigen::Index n = data.latent.size();
  const double d = data.latent.intrinsic_dim();
  const double scale = std::sqrt(d + 2.0);

  // Reservoir-sample pairs whose latent distance falls in [0.9 t, 1.1 t];
  // the same pair set serves every alpha so rows are comparable.
  SplitMix64 rng(seed);
  std::vector<std::vector<std::pair<Eigen::Index, Eigen::Index>>> buckets(t_values.size());
  std::vector<long> seen(t_values.size(), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double t = data.latent.geodesic(i, j);
      for (std::size_t b = 0; b < t_values.size(); ++b) {
        if (t < 0.9 * t_values[b] || t > 1.1 * t_values[b]) continue;
        ++seen[b];
        if (static_cast<long>(buckets[b].size()) < pairs_per_bucket) {
          buckets[b].emplace_back(i, j);
        } else {
          std::uint64_t pos = rng.next_below(static_cast<std::uint64_t>(seen[b]));
          if (pos < static_cast<std::uint64_t>(pairs_per_bucket))
            buckets[b][static_cast<std::size_t>(pos)] = {i, j};
        }
      }
    }
  }

  std::vector<AlphaScanRow> rows;
  for (int alpha : alphas) {
    EigParams p = params;
    p.alpha = alpha;
    std::unordered_map<Eigen::Index, PointInverse> cache;
    auto inverse_at = [&](Eigen::Index i) -> const PointInverse& {
      auto it = cache.find(i);
      if (it == cache.end()) it = cache.emplace(i, point_truncated_inverse(data, i, p)).first;
      return it->second;
    };
    for (std::size_t b = 0; b < t_values.size(); ++b) {
      AlphaScanRow row;
      row.alpha = alpha;
      row.t = t_values[b];
      double sum = 0.0, sum_abs = 0.0;
      for (const auto& [i, j] : buckets[b]) {
        const PointInverse& pa = inverse_at(i);
        const PointInverse& pb = inverse_at(j);
        if (!pa.ok || !pb.ok) {
          ++row.skipped;
          continue;
        }
        Eigen::VectorXd delta = (data.observed.point(i) - data.observed.point(j)).transpose();
        double eig = std::sqrt(std::max(0.5 * delta.dot((pa.t_alpha + pb.t_alpha) * delta), 0.0));
        double rel = eig / (scale * data.latent.geodesic(i, j)) - 1.0;
        sum += rel;
        sum_abs += std::abs(rel);
        ++row.pairs;
      }
      if (row.pairs > 0) {
        row.empty = false;
        row.bias = std::abs(sum / static_cast<double>(row.pairs));
        row.mean_abs = sum_abs / static_cast<double>(row.pairs);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace locov
