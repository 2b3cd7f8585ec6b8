#include <charconv>
#include <fstream>
#include <sstream>

#include "locov/errors.hpp"
#include "locov/experiments.hpp"

namespace locov {

namespace {

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError(key, "expected a number, got '" + value + "'");
  return out;
}

long long parse_int(const std::string& key, const std::string& value) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError(key, "expected an integer, got '" + value + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError(key, "expected a non-negative integer, got '" + value + "'");
  return out;
}

std::vector<std::string> split(const std::string& value, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& part : split(value, ','))
    if (!part.empty()) out.push_back(parse_double(key, part));
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  for (const auto& part : split(value, ','))
    if (!part.empty()) out.push_back(static_cast<int>(parse_int(key, part)));
  return out;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i)
    out += (i ? "," : "") + ResultTable::fmt(values[i]);
  return out;
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i)
    out += (i ? "," : "") + std::to_string(values[i]);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<std::string>& ExperimentConfig::known_keys() {
  static const std::vector<std::string> keys = {
      "manifold",      "n",           "d",
      "h",             "h_bar",       "eps",
      "c",             "alpha",       "alpha_list",
      "ell",           "k_eigs",      "seed",
      "output_dir",    "s_min",       "s_max",
      "seg_min",       "seg_max",     "deformation",
      "deform_scales", "deform_amp",  "deform_freq",
      "deform_amp2",   "t_values",    "pairs_per_bucket",
      "path_pairs",    "neighbor_mode", "knn_k",
      "dense_threshold", "dm_alpha",  "input_csv",
      "latent_csv",    "pairs",       "out",
      "profile",
  };
  return keys;
}

void ExperimentConfig::apply(const std::string& key, const std::string& value) {
  if (key == "manifold") manifold = value;
  else if (key == "n") n = parse_int(key, value);
  else if (key == "d") d = static_cast<int>(parse_int(key, value));
  else if (key == "h") h = parse_double(key, value);
  else if (key == "h_bar") h_bar = parse_double(key, value);
  else if (key == "eps") eps = parse_double(key, value);
  else if (key == "c") c = parse_double(key, value);
  else if (key == "alpha") alpha = static_cast<int>(parse_int(key, value));
  else if (key == "alpha_list") alpha_list = parse_int_list(key, value);
  else if (key == "ell") ell = static_cast<int>(parse_int(key, value));
  else if (key == "k_eigs") k_eigs = static_cast<int>(parse_int(key, value));
  else if (key == "seed") seed = parse_u64(key, value);
  else if (key == "output_dir") output_dir = value;
  else if (key == "s_min") s_min = parse_double(key, value);
  else if (key == "s_max") s_max = parse_double(key, value);
  else if (key == "seg_min") seg_min = parse_double(key, value);
  else if (key == "seg_max") seg_max = parse_double(key, value);
  else if (key == "deformation") deformation = value;
  else if (key == "deform_scales") deform_scales = parse_double_list(key, value);
  else if (key == "deform_amp") deform_amp = parse_double(key, value);
  else if (key == "deform_freq") deform_freq = parse_double(key, value);
  else if (key == "deform_amp2") deform_amp2 = parse_double(key, value);
  else if (key == "t_values") t_values = parse_double_list(key, value);
  else if (key == "pairs_per_bucket") pairs_per_bucket = parse_int(key, value);
  else if (key == "path_pairs") path_pairs = parse_int(key, value);
  else if (key == "neighbor_mode") neighbor_mode = value;
  else if (key == "knn_k") knn_k = static_cast<int>(parse_int(key, value));
  else if (key == "dense_threshold") dense_threshold = parse_int(key, value);
  else if (key == "dm_alpha") dm_alpha = parse_double(key, value);
  else if (key == "input_csv") input_csv = value;
  else if (key == "latent_csv") latent_csv = value;
  else if (key == "pairs") pairs = value;
  else if (key == "out") out = value;
  else if (key == "profile") profile = value;
  else throw ConfigError(key, "unknown key");
}

void ExperimentConfig::validate() const {
  if (n < 2) throw ConfigError("n", "need at least two points");
  if (d < 1) throw ConfigError("d", "intrinsic dimension must be positive");
  if (!(h > 0.0)) throw ConfigError("h", "must be positive");
  if (!(h_bar > 0.0)) throw ConfigError("h_bar", "must be positive");
  if (!(eps > 0.0)) throw ConfigError("eps", "must be positive");
  if (alpha < 1) throw ConfigError("alpha", "must be at least 1");
  if (ell < 1) throw ConfigError("ell", "must be at least 1");
  if (k_eigs < 1) throw ConfigError("k_eigs", "must be at least 1");
  if (pairs_per_bucket < 1) throw ConfigError("pairs_per_bucket", "must be positive");
  if (path_pairs < 1) throw ConfigError("path_pairs", "must be positive");
  if (knn_k < 1) throw ConfigError("knn_k", "must be at least 1");
  if (dense_threshold < 1) throw ConfigError("dense_threshold", "must be positive");
  if (dm_alpha < 0.0 || dm_alpha > 1.0) throw ConfigError("dm_alpha", "must lie in [0, 1]");
  if (neighbor_mode != "radius" && neighbor_mode != "knn")
    throw ConfigError("neighbor_mode", "must be 'radius' or 'knn'");
  if (!profile.empty() && profile != "desk" && profile != "paper")
    throw ConfigError("profile", "must be 'desk' or 'paper'");
  for (double t : t_values)
    if (!(t > 0.0)) throw ConfigError("t_values", "entries must be positive");
  for (int a : alpha_list)
    if (a < 1) throw ConfigError("alpha_list", "entries must be at least 1");
}

void ExperimentConfig::echo_into(ResultTable& table) const {
  table.add_metadata("experiment", experiment);
  table.add_metadata("manifold", manifold);
  table.add_metadata("n", static_cast<long long>(n));
  table.add_metadata("d", static_cast<long long>(d));
  table.add_metadata("h", h);
  table.add_metadata("h_bar", h_bar);
  table.add_metadata("eps", eps);
  table.add_metadata("c", c);
  table.add_metadata("alpha", static_cast<long long>(alpha));
  table.add_metadata("alpha_list", join_ints(alpha_list));
  table.add_metadata("ell", static_cast<long long>(ell));
  table.add_metadata("k_eigs", static_cast<long long>(k_eigs));
  table.add_metadata("seed", std::to_string(seed));
  table.add_metadata("output_dir", output_dir);
  table.add_metadata("s_min", s_min);
  table.add_metadata("s_max", s_max);
  table.add_metadata("seg_min", seg_min);
  table.add_metadata("seg_max", seg_max);
  table.add_metadata("deformation", deformation);
  table.add_metadata("deform_scales", join_doubles(deform_scales));
  table.add_metadata("deform_amp", deform_amp);
  table.add_metadata("deform_freq", deform_freq);
  table.add_metadata("deform_amp2", deform_amp2);
  table.add_metadata("t_values", join_doubles(t_values));
  table.add_metadata("pairs_per_bucket", static_cast<long long>(pairs_per_bucket));
  table.add_metadata("path_pairs", static_cast<long long>(path_pairs));
  table.add_metadata("neighbor_mode", neighbor_mode);
  table.add_metadata("knn_k", static_cast<long long>(knn_k));
  table.add_metadata("dense_threshold", static_cast<long long>(dense_threshold));
  table.add_metadata("dm_alpha", dm_alpha);
  table.add_metadata("input_csv", input_csv);
  table.add_metadata("latent_csv", latent_csv);
  table.add_metadata("pairs", pairs);
  table.add_metadata("profile", profile);
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected key=value");
    out.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return out;
}

ExperimentConfig base_config_for(const std::string& experiment) {
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  if (experiment == "exp-spiral-geodesic") {
    cfg.manifold = "spiral";
    cfg.n = 2000;
    cfg.eps = 0.2;
    cfg.h_bar = 0.2;
    cfg.d = 1;
  } else if (experiment == "exp-s1-eigenvalues") {
    cfg.manifold = "circle_nonuniform";
    cfg.n = 2000;
    cfg.h = 0.05;
    cfg.d = 1;
    cfg.k_eigs = 8;
  } else if (experiment == "exp-alpha-sensitivity") {
    cfg.manifold = "sphere";
    cfg.n = 8000;
    cfg.d = 2;
    cfg.eps = 0.1;
    cfg.deformation = "sphere_bend";
    cfg.deform_amp = 1.0;
    cfg.deform_amp2 = 0.6;
  }
  return cfg;
}

ExperimentConfig resolve_config(
    const std::string& experiment,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  ExperimentConfig cfg = base_config_for(experiment);
  // The profile applies before explicit keys so that explicit keys win.
  for (const auto& [k, v] : overrides)
    if (k == "profile") cfg.profile = v;
  if (cfg.profile == "paper") {
    cfg.n = 8000;
    if (experiment == "exp-s1-eigenvalues") cfg.h = 0.03;
  }
  for (const auto& [k, v] : overrides) cfg.apply(k, v);
  cfg.validate();
  return cfg;
}

}  // namespace locov
