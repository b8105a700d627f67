#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace hitchin::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  int d = 3;
  std::string construction = "fuchsian";  // fuchsian | deform | file
  std::uint64_t deform_seed = 1;
  double deform_step = 0.05;
  std::string rep_file;

  int max_wordlength = 8;
  int mesh = 128;
  int mesh_wordlength = 8;
  double T = std::numeric_limits<double>::quiet_NaN();  // NaN: table horizon
  double dT = 2.0;
  int root = 1;
  std::string word = "a1";
  std::string word2;

  int pairs = 100;
  int pair_wordlength = 3;
  int n_max = 20;
  int samples = 1000;
  int chi_configs = 100;

  double eps = 1e-3;
  double hessian_h = 0.02;
  double prune_margin = 0.05;
  std::uint64_t mc_samples = 0;
  double slack = 1.15;

  double identity_tol = 1e-8;
  double volume_tol = 0.10;
  double intersect_tol = 0.02;
  double entropy_lo = 0.85, entropy_hi = 1.15;
  double cv_max = 0.25;
  double transversality_min = 1e-8;
  double trace_min = 1e-10;
  double ratio_tol = 1e-6;

  std::uint64_t seed = 1;
  int threads = 1;
  std::string precision = "extended";  // double | extended
  std::string cache;
  std::string out = ".";

  void set(const std::string& key, const std::string& value);  // throws ConfigError naming the key
  void validate() const;
  nlohmann::ordered_json to_json() const;
  static const std::vector<std::string>& keys();
};

// "key = value" lines, '#' comments
ExperimentConfig load_config(const std::string& path);
void apply_config_text(ExperimentConfig& c, const std::string& text, const std::string& origin);

}  // namespace hitchin::cli
