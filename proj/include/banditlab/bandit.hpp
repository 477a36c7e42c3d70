#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "banditlab/actionspace.hpp"
#include "banditlab/linalg.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

struct BanditInstance {
  Vec theta_star;
  double noise_sigma = 1.0;
  ActionSpace space;
};

// Ridge-regression state of one episode: gram = lambda I + sum a a^T, and its
// inverse maintained by rank-one (Sherman-Morrison) downdates. Every 512
// updates the inverse is recomputed exactly so drift cannot accumulate over
// long horizons.
class DesignState {
 public:
  DesignState(std::size_t dim, double lambda);

  void update(const Vec& action, double reward);

  std::size_t dim() const { return dim_; }
  double lambda() const { return lambda_; }
  std::int64_t rounds() const { return rounds_; }
  const SymMatrix& gram() const { return gram_; }
  const SymMatrix& gram_inv() const { return gram_inv_; }
  const Vec& xty() const { return xty_; }
  const Vec& theta_hat() const { return theta_hat_; }

  double lambda_min() const;  // smallest eigenvalue of gram

 private:
  void refresh_inverse();

  std::size_t dim_;
  double lambda_;
  std::int64_t rounds_ = 0;
  int updates_since_refresh_ = 0;
  SymMatrix gram_;
  SymMatrix gram_inv_;
  Vec xty_;
  Vec theta_hat_;
};

// sqrt(beta_t): b sqrt(lambda) + sqrt(2 ln(1/delta) + d ln(1 + n/(lambda d))),
// the self-normalized bound for sub-Gaussian noise and ||theta*|| <= b.
double confidence_radius(double b, double lambda, std::int64_t n, std::size_t d,
                         double delta);

struct ConfidenceSet {
  Vec center;
  SymMatrix shape;
  double radius = 0.0;
};

struct Trajectory {
  std::vector<Vec> actions;
  Vec rewards;
  Vec inst_regrets;
  Vec cum_regrets;
  // (round, lambda_min(gram)) at the requested checkpoint rounds
  std::vector<std::pair<std::int64_t, double>> checkpoints;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual Vec select(const DesignState& state, const ActionSpace& space,
                     Rng& rng) const = 0;
};

// {1, 2, 4, ...} up to n, plus n itself.
std::vector<std::int64_t> geometric_checkpoints(std::int64_t n);
// `count` geometrically spaced rounds in [lo, n], deduplicated after rounding.
std::vector<std::int64_t> spaced_checkpoints(std::int64_t n, int count,
                                             std::int64_t lo);

struct EpisodeResult {
  Trajectory trajectory;
  DesignState state;
};

EpisodeResult run_episode(const Policy& policy, const BanditInstance& instance,
                          std::int64_t n, double lambda, Rng& rng,
                          const std::vector<std::int64_t>& checkpoints);

// round, a_0..a_{d-1}, reward, inst_regret, cum_regret, lambda_min; the last
// column is filled only on checkpoint rows.
std::string trajectory_csv(const Trajectory& traj);

}  // namespace banditlab
