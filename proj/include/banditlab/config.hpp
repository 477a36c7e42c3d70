#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "banditlab/actionspace.hpp"
#include "banditlab/clustering.hpp"
#include "banditlab/model_selection.hpp"
#include "banditlab/policies.hpp"

namespace banditlab {

// Flat `key = value` lines with dotted keys; '#' starts a comment. Every key
// must be consumed by the experiment builder, so typos fail loudly instead of
// silently falling back to defaults.
class ConfigMap {
 public:
  static ConfigMap from_text(const std::string& text);
  static ConfigMap from_file(const std::filesystem::path& path);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback);
  std::string require_string(const std::string& key);
  double get_double(const std::string& key, double fallback);
  std::int64_t get_int(const std::string& key, std::int64_t fallback);
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback);
  std::optional<double> get_optional_double(const std::string& key);
  Vec get_vec(const std::string& key);                // "1,0,0"
  std::vector<int> get_int_list(const std::string& key);
  std::vector<Vec> get_vec_list(const std::string& key);  // "1,0;-1,0"

  std::vector<std::string> unconsumed() const;
  void set(const std::string& key, const std::string& value);

 private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> consumed_;
};

enum class Scenario {
  EigenTrace,
  DimSweep,
  ConvexCounterexample,
  Alb,
  Clustering,
  VerifyTheory,
};

struct SpaceSpec {
  std::string kind = "sphere";  // sphere | ellipsoid | pnorm_ball | finite
  std::size_t dim = 2;
  double p = 10.0;
  double radius = 1.0;
  Vec axes;                     // ellipsoid diagonal; empty = identity
  double level = 1.0;
  std::vector<Vec> points;      // finite

  ActionSpace build() const;
};

struct ExperimentConfig {
  std::string name = "experiment";
  Scenario scenario = Scenario::EigenTrace;
  std::uint64_t master_seed = 1;
  int trials = 1;
  std::int64_t n = 1024;
  double lambda = 1.0;
  double sigma = 1.0;

  SpaceSpec space;
  std::string theta_mode = "e1";  // e1 | ones | custom
  Vec theta_values;               // used when theta_mode = custom

  PolicyConfig policy;

  // exponent diagnostics
  double exponent_threshold = 0.5;
  double tail_fraction = 0.5;
  double k_sigma = 3.0;
  int checkpoint_count = 64;

  std::vector<int> dims{3, 5, 10};  // dim_sweep

  AlbConfig alb;

  // clustering scenario; agents derive from assignment
  std::vector<Vec> cluster_params;
  std::vector<int> cluster_assignment;
  std::optional<double> cluster_eta;
  double cluster_gamma = 0.5;

  double vt_eps_scale = 10.0;  // verify_theory: eps = scale / sqrt(n)

  Vec resolve_theta(std::size_t d) const;
};

ExperimentConfig experiment_from_config(ConfigMap& cfg);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

}  // namespace banditlab
