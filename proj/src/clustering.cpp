#include "banditlab/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace banditlab {

double cluster_threshold(std::int64_t n, int d, double delta, double gamma) {
  if (n < 2) throw std::invalid_argument("cluster_threshold: n < 2");
  if (d < 1) throw std::invalid_argument("cluster_threshold: d < 1");
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("cluster_threshold: delta outside (0,1]");
  if (gamma <= 0.0) throw std::invalid_argument("cluster_threshold: gamma <= 0");
  const double log_nd = std::log(static_cast<double>(n) / delta);
  const double log_dd = std::log(static_cast<double>(d) / delta);
  if (log_dd <= 0.0) throw std::invalid_argument("cluster_threshold: ln(d/delta) <= 0");
  const double nn = static_cast<double>(n);
  return 4.0 / std::pow(nn, 0.25) * std::sqrt(2.0 * d * log_nd / (gamma * log_dd));
}

std::vector<std::vector<int>> edge_cluster(const std::vector<Vec>& estimates,
                                           double eta) {
  if (estimates.empty()) throw std::invalid_argument("edge_cluster: no estimates");
  if (eta < 0.0) throw std::invalid_argument("edge_cluster: eta < 0");
  const std::size_t n = estimates.size();
  for (const Vec& e : estimates)
    if (e.size() != estimates.front().size() || !all_finite(e))
      throw std::invalid_argument("edge_cluster: bad estimate");

  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (norm2(sub(estimates[i], estimates[j])) <= eta)
        parent[std::max(find(i), find(j))] = std::min(find(i), find(j));

  std::vector<std::vector<int>> components;
  std::vector<int> root_slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const int r = find(i);
    if (root_slot[r] < 0) {
      root_slot[r] = static_cast<int>(components.size());
      components.emplace_back();
    }
    components[root_slot[r]].push_back(static_cast<int>(i));
  }
  return components;  // roots are minima, so order/members come out sorted
}

double min_separation(const std::vector<Vec>& params) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < params.size(); ++i)
    for (std::size_t j = i + 1; j < params.size(); ++j)
      best = std::min(best, norm2(sub(params[i], params[j])));
  return best;
}

namespace {

std::vector<std::vector<int>> canonical_partition(const std::vector<int>& assignment) {
  std::vector<std::vector<int>> groups;
  std::vector<int> slot;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    const int c = assignment[i];
    if (c >= static_cast<int>(slot.size())) slot.resize(c + 1, -1);
    if (slot[c] < 0) {
      slot[c] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[c]].push_back(static_cast<int>(i));
  }
  std::sort(groups.begin(), groups.end());
  return groups;
}

}  // namespace

ClusterReport run_multi_agent_clustering(const MultiAgentConfig& cfg,
                                         const ActionSpace& space, double noise_sigma,
                                         std::uint64_t master_seed) {
  if (cfg.cluster_params.empty())
    throw std::invalid_argument("clustering: no cluster parameters");
  if (cfg.assignment.empty()) throw std::invalid_argument("clustering: no agents");
  for (int c : cfg.assignment)
    if (c < 0 || c >= static_cast<int>(cfg.cluster_params.size()))
      throw std::invalid_argument("clustering: assignment index out of range");
  for (const Vec& th : cfg.cluster_params)
    if (th.size() != space.dim())
      throw std::invalid_argument("clustering: parameter dimension mismatch");

  PolicyConfig pc;
  pc.kind = PolicyKind::Oful;
  pc.delta = cfg.delta;
  pc.norm_bound = cfg.norm_bound;
  const ConfiguredPolicy policy(pc);

  ClusterReport rep;
  const std::size_t agents = cfg.assignment.size();
  rep.estimates.reserve(agents);
  rep.per_agent_regret.reserve(agents);
  for (std::size_t k = 0; k < agents; ++k) {
    BanditInstance inst{cfg.cluster_params[cfg.assignment[k]], noise_sigma, space};
    Rng rng(derive_stream_seed(master_seed, k));
    const EpisodeResult ep = run_episode(policy, inst, cfg.n, cfg.lambda, rng, {});
    rep.estimates.push_back(ep.state.theta_hat());
    rep.per_agent_regret.push_back(ep.trajectory.cum_regrets.back());
  }

  rep.eta = cfg.eta ? *cfg.eta
                    : cluster_threshold(cfg.n, static_cast<int>(space.dim()), cfg.delta,
                                        cfg.gamma);
  rep.partition = edge_cluster(rep.estimates, rep.eta);

  std::vector<std::vector<int>> truth = canonical_partition(cfg.assignment);
  std::vector<std::vector<int>> got = rep.partition;
  std::sort(got.begin(), got.end());
  rep.exact_recovery = got == truth;
  return rep;
}

}  // namespace banditlab
