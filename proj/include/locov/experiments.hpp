#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "locov/result_table.hpp"

namespace locov {

// Flat experiment configuration. Defaults are the desk-scale profile; the
// paper-scale profile and any config file or command-line pairs override them
// in that order. Every field is echoed into result metadata so output files
// are self-describing.
struct ExperimentConfig {
  std::string experiment;
  std::string manifold;  // empty: the experiment's canonical manifold
  long n = 2000;
  int d = 1;
  double h = 0.05;
  double h_bar = 0.2;
  double eps = 0.2;
  double c = 0.0;  // <= 0: scale-aware default per neighborhood
  int alpha = 1;
  std::vector<int> alpha_list = {1, 2, 3, 4};
  int ell = 2;
  int k_eigs = 8;
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  double s_min = 0.0;
  double s_max = 10.0;
  double seg_min = 0.0;
  double seg_max = 1.0;
  std::string deformation = "identity";
  std::vector<double> deform_scales;
  double deform_amp = 0.0;
  double deform_freq = 0.0;
  double deform_amp2 = 0.0;
  std::vector<double> t_values;  // empty: eps * {1/8, 1/4, 1/2, 1} plus eps^1.5
  long pairs_per_bucket = 2000;
  long path_pairs = 50;
  std::string neighbor_mode = "radius";
  int knn_k = 10;
  long dense_threshold = 3000;
  double dm_alpha = 1.0;
  std::string input_csv;
  std::string latent_csv;
  std::string pairs;  // "i:j;i:j" pair list for eig-dist
  std::string out;    // output file override
  std::string profile;  // "", "desk", "paper"

  // Applies "key=value" pairs; unknown keys raise ConfigError.
  void apply(const std::string& key, const std::string& value);
  void validate() const;
  void echo_into(ResultTable& table) const;

  static const std::vector<std::string>& known_keys();
};

// key=value lines, '#' comments and blank lines allowed.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

// Canonical desk-scale defaults of one experiment or subcommand.
ExperimentConfig base_config_for(const std::string& experiment);

// base_config_for -> profile preset -> ordered overrides (file first, CLI
// second).
ExperimentConfig resolve_config(const std::string& experiment,
                                const std::vector<std::pair<std::string, std::string>>& overrides);

ResultTable run_exp_spiral_geodesic(const ExperimentConfig& cfg);
ResultTable run_exp_s1_eigenvalues(const ExperimentConfig& cfg);
ResultTable run_exp_alpha_sensitivity(const ExperimentConfig& cfg);

// Single-purpose commands over an input cloud CSV: covgeo, eig-dist, lle,
// ldr-lle, dm.
ResultTable run_adhoc(const std::string& subcommand, const ExperimentConfig& cfg);

// Manifold export used by the `sample` subcommand: writes the cloud CSV plus
// a latent sidecar and returns a small summary table.
ResultTable run_sample_export(const ExperimentConfig& cfg);

}  // namespace locov
