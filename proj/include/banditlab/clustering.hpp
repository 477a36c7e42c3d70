#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "banditlab/bandit.hpp"
#include "banditlab/policies.hpp"

namespace banditlab {

// Pairing threshold eta = (4 / n^{1/4}) sqrt(2 d ln(n/delta) / (gamma ln(d/delta))):
// twice the worst-case estimation error when every agent's design matrix has
// grown to gamma sqrt(n). Requires ln(d/delta) > 0, i.e. delta < d.
double cluster_threshold(std::int64_t n, int d, double delta, double gamma);

// Undirected threshold graph on the estimates (edge iff ||est_i - est_j|| <= eta);
// returns its connected components, ordered by smallest member, members sorted.
std::vector<std::vector<int>> edge_cluster(const std::vector<Vec>& estimates,
                                           double eta);

// Minimum pairwise distance between cluster parameters; +inf for fewer than
// two. Recovery is only guaranteed when this separation exceeds 2 eta, so the
// harness reports it next to the threshold as an advisory.
double min_separation(const std::vector<Vec>& params);

struct MultiAgentConfig {
  std::vector<Vec> cluster_params;  // theta* per cluster
  std::vector<int> assignment;      // agent -> cluster index
  std::int64_t n = 1024;            // rounds per agent
  double delta = 0.05;
  double lambda = 1.0;
  double norm_bound = 1.0;
  double gamma = 0.5;               // fed to cluster_threshold when eta unset
  std::optional<double> eta;
};

struct ClusterReport {
  std::vector<Vec> estimates;
  std::vector<std::vector<int>> partition;
  bool exact_recovery = false;
  double eta = 0.0;
  Vec per_agent_regret;
};

// Runs one independent OFUL episode per agent (agent k draws from the stream
// master_seed + k, identical to a standalone run_episode with that seed), then
// clusters the final ridge estimates.
ClusterReport run_multi_agent_clustering(const MultiAgentConfig& cfg,
                                         const ActionSpace& space, double noise_sigma,
                                         std::uint64_t master_seed);

}  // namespace banditlab
