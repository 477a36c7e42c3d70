#include "banditlab/clustering.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "banditlab/harness.hpp"
#include "test_util.hpp"

namespace banditlab {
namespace {

std::vector<std::vector<int>> sorted_groups(const std::vector<int>& assignment) {
  std::vector<std::vector<int>> groups;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] >= static_cast<int>(groups.size()))
      groups.resize(assignment[i] + 1);
    groups[assignment[i]].push_back(static_cast<int>(i));
  }
  groups.erase(std::remove_if(groups.begin(), groups.end(),
                              [](const auto& g) { return g.empty(); }),
               groups.end());
  std::sort(groups.begin(), groups.end());
  return groups;
}

TEST(ClusterThreshold, ClosedFormAndScaling) {
  EXPECT_NEAR(cluster_threshold(10000, 2, 0.05, 0.5), 2.058001695662829, 1e-12);
  const double base = cluster_threshold(10000, 2, 0.05, 0.5);
  EXPECT_NEAR(cluster_threshold(10000, 2, 0.05, 1.0), base / std::sqrt(2.0), 1e-12);
  EXPECT_LT(cluster_threshold(1000000, 2, 0.05, 0.5), base);
}

TEST(ClusterThreshold, RejectsBadArguments) {
  EXPECT_THROW(cluster_threshold(1, 2, 0.05, 0.5), std::invalid_argument);
  EXPECT_THROW(cluster_threshold(100, 0, 0.05, 0.5), std::invalid_argument);
  EXPECT_THROW(cluster_threshold(100, 2, 0.0, 0.5), std::invalid_argument);
  EXPECT_THROW(cluster_threshold(100, 2, 1.5, 0.5), std::invalid_argument);
  EXPECT_THROW(cluster_threshold(100, 2, 0.05, 0.0), std::invalid_argument);
  EXPECT_THROW(cluster_threshold(100, 2, 0.05, -1.0), std::invalid_argument);
  // d = 1 at delta = 1 makes ln(d/delta) vanish
  EXPECT_THROW(cluster_threshold(100, 1, 1.0, 0.5), std::invalid_argument);
  EXPECT_GT(cluster_threshold(100, 2, 1.0, 0.5), 0.0);
}

TEST(EdgeCluster, ThresholdComponents) {
  const std::vector<Vec> est = {{0.0, 0.0}, {0.1, 0.0}, {5.0, 5.0}};
  EXPECT_EQ(edge_cluster(est, 0.5),
            (std::vector<std::vector<int>>{{0, 1}, {2}}));
}

TEST(EdgeCluster, ChainsMergeTransitively) {
  const std::vector<Vec> est = {{0.0, 0.0}, {0.4, 0.0}, {0.8, 0.0}};
  EXPECT_EQ(edge_cluster(est, 0.5), (std::vector<std::vector<int>>{{0, 1, 2}}));
}

TEST(EdgeCluster, ZeroEtaSeparatesDistinctPoints) {
  const std::vector<Vec> est = {{0.0, 0.0}, {0.4, 0.0}, {0.8, 0.0}};
  EXPECT_EQ(edge_cluster(est, 0.0),
            (std::vector<std::vector<int>>{{0}, {1}, {2}}));
}

TEST(EdgeCluster, ComponentsOrderedBySmallestMember) {
  const std::vector<Vec> est = {{0.0, 0.0}, {5.0, 5.0}, {0.1, 0.0}, {5.1, 5.0}};
  EXPECT_EQ(edge_cluster(est, 0.5),
            (std::vector<std::vector<int>>{{0, 2}, {1, 3}}));
}

TEST(EdgeCluster, RejectsBadInput) {
  EXPECT_THROW(edge_cluster({}, 0.5), std::invalid_argument);
  EXPECT_THROW(edge_cluster({{0.0, 0.0}}, -0.1), std::invalid_argument);
  EXPECT_THROW(edge_cluster({{0.0, 0.0}, {std::nan(""), 0.0}}, 0.5),
               std::invalid_argument);
  EXPECT_THROW(edge_cluster({{0.0, 0.0}, {1.0}}, 0.5), std::invalid_argument);
}

TEST(MinSeparation, PairwiseMinimum) {
  EXPECT_DOUBLE_EQ(min_separation({{1.0, 0.0}, {-1.0, 0.0}}), 2.0);
  EXPECT_DOUBLE_EQ(min_separation({{0.0, 0.0}, {3.0, 0.0}, {3.5, 0.0}}), 0.5);
  EXPECT_TRUE(std::isinf(min_separation({{1.0, 0.0}})));
}

TEST(EdgeCluster, PlantedPartitionsRecoverExactly) {
  Rng rng(91);
  const double eta = 0.5;
  for (int t = 0; t < 40; ++t) {
    const std::size_t d = 2 + t % 3;
    const int k = 1 + t % 4;
    std::vector<Vec> centers;
    for (int j = 0; j < k; ++j) {
      Vec c(d, 0.0);
      c[j % d] = 3.0 * eta * (1.0 + j / static_cast<double>(d));
      c[(j + 1) % d] = 0.7 * j;
      centers.push_back(c);
    }
    const int agents = k + 1 + t % 5;
    std::vector<int> assignment;
    for (int i = 0; i < agents; ++i)
      assignment.push_back(i < k ? i
                                 : static_cast<int>(rng.uniform_index(
                                       static_cast<std::uint64_t>(k))));

    std::vector<Vec> estimates;
    for (int i = 0; i < agents; ++i) {
      const Vec dir = testutil::normalized(rng.gaussian_vector(d));
      estimates.push_back(
          add(centers[assignment[i]], scaled(dir, 0.49 * eta * rng.uniform01())));
    }
    std::vector<std::vector<int>> got = edge_cluster(estimates, eta);
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, sorted_groups(assignment)) << "instance " << t;
  }
}

TEST(MultiAgent, AgentStreamsMatchStandaloneEpisodes) {
  MultiAgentConfig cfg;
  cfg.cluster_params = {{1.0, 0.0}, {-1.0, 0.0}};
  cfg.assignment = {0, 1, 0};
  cfg.n = 128;
  const ActionSpace sphere(UnitSphere{2});
  const std::uint64_t master = 92;
  const ClusterReport rep = run_multi_agent_clustering(cfg, sphere, 0.1, master);

  PolicyConfig pc;
  pc.kind = PolicyKind::Oful;
  pc.delta = cfg.delta;
  pc.norm_bound = cfg.norm_bound;
  const ConfiguredPolicy policy(pc);
  for (std::size_t k = 0; k < cfg.assignment.size(); ++k) {
    BanditInstance inst{cfg.cluster_params[cfg.assignment[k]], 0.1, sphere};
    Rng rng(derive_stream_seed(master, k));
    const EpisodeResult ep = run_episode(policy, inst, cfg.n, cfg.lambda, rng, {});
    EXPECT_EQ(rep.estimates[k], ep.state.theta_hat());
    EXPECT_EQ(rep.per_agent_regret[k], ep.trajectory.cum_regrets.back());
  }
}

TEST(MultiAgent, SingleClusterAlwaysRecovers) {
  MultiAgentConfig cfg;
  cfg.cluster_params = {{0.8, 0.6}};
  cfg.assignment = {0, 0, 0, 0};
  cfg.n = 128;
  const ClusterReport rep =
      run_multi_agent_clustering(cfg, ActionSpace(UnitSphere{2}), 0.1, 93);
  EXPECT_TRUE(rep.exact_recovery);
  EXPECT_EQ(rep.partition.size(), 1u);
  EXPECT_GT(rep.eta, 0.0);
}

TEST(MultiAgent, OversizedEtaMergesEverything) {
  MultiAgentConfig cfg;
  cfg.cluster_params = {{1.0, 0.0}, {-1.0, 0.0}};
  cfg.assignment = {0, 1};
  cfg.n = 64;
  cfg.eta = 100.0;
  const ClusterReport rep =
      run_multi_agent_clustering(cfg, ActionSpace(UnitSphere{2}), 0.1, 94);
  EXPECT_EQ(rep.partition.size(), 1u);
  EXPECT_FALSE(rep.exact_recovery);
  EXPECT_DOUBLE_EQ(rep.eta, 100.0);
}

TEST(MultiAgent, AntipodalClustersRecoverAtModerateHorizon) {
  MultiAgentConfig cfg;
  cfg.cluster_params = {{1.0, 0.0}, {-1.0, 0.0}};
  cfg.assignment = {0, 0, 0, 1, 1, 1};
  cfg.n = 2048;
  cfg.eta = 1.0;  // half the separation
  const ClusterReport rep =
      run_multi_agent_clustering(cfg, ActionSpace(UnitSphere{2}), 0.1, 95);
  EXPECT_TRUE(rep.exact_recovery);
  EXPECT_EQ(rep.partition, (std::vector<std::vector<int>>{{0, 1, 2}, {3, 4, 5}}));
  EXPECT_DOUBLE_EQ(min_separation(cfg.cluster_params), 2.0);
  for (double r : rep.per_agent_regret) EXPECT_GE(r, -1e-9);
}

TEST(MultiAgent, RecoveryRateImprovesWithHorizon) {
  const std::vector<std::int64_t> horizons = {64, 512, 4096};
  const int seeds = 50;
  std::vector<std::vector<int>> hit(horizons.size(), std::vector<int>(seeds, 0));
  parallel_for(static_cast<int>(horizons.size()) * seeds, 4, [&](int job) {
    const int h = job / seeds;
    const int s = job % seeds;
    MultiAgentConfig cfg;
    cfg.cluster_params = {{1.0, 0.0}, {-1.0, 0.0}};
    cfg.assignment = {0, 0, 0, 1, 1, 1};
    cfg.n = horizons[h];
    cfg.eta = 1.0;
    const ClusterReport rep = run_multi_agent_clustering(
        cfg, ActionSpace(UnitSphere{2}), 1.0, 9600 + static_cast<std::uint64_t>(s));
    hit[h][s] = rep.exact_recovery ? 1 : 0;
  });
  std::vector<double> rate(horizons.size());
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    int sum = 0;
    for (int v : hit[h]) sum += v;
    rate[h] = static_cast<double>(sum) / seeds;
  }
  EXPECT_LE(rate[0], rate[1] + 1e-12);
  EXPECT_LE(rate[1], rate[2] + 1e-12);
  EXPECT_GE(rate[2], 0.9);
}

TEST(MultiAgent, RejectsBadConfig) {
  const ActionSpace sphere(UnitSphere{2});
  MultiAgentConfig cfg;
  EXPECT_THROW(run_multi_agent_clustering(cfg, sphere, 0.1, 1),
               std::invalid_argument);
  cfg.cluster_params = {{1.0, 0.0}};
  EXPECT_THROW(run_multi_agent_clustering(cfg, sphere, 0.1, 1),
               std::invalid_argument);
  cfg.assignment = {0, 1};
  EXPECT_THROW(run_multi_agent_clustering(cfg, sphere, 0.1, 1),
               std::invalid_argument);
  cfg.assignment = {0, -1};
  EXPECT_THROW(run_multi_agent_clustering(cfg, sphere, 0.1, 1),
               std::invalid_argument);
  cfg.assignment = {0, 0};
  cfg.cluster_params = {{1.0, 0.0, 0.0}};
  EXPECT_THROW(run_multi_agent_clustering(cfg, sphere, 0.1, 1),
               std::invalid_argument);
}

}  // namespace
}  // namespace banditlab
