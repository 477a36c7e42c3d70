#pragma once

#include <optional>

#include "banditlab/bandit.hpp"

namespace banditlab {

enum class PolicyKind { Oful, LinTs, Uniform };

struct PolicyConfig {
  PolicyKind kind = PolicyKind::Oful;
  double delta = 0.1;       // confidence level fed to the radius
  double norm_bound = 1.0;  // assumed bound b on ||theta*||
  // posterior inflation for LinTS; when unset the per-round confidence radius
  // is used as the scale
  std::optional<double> ts_scale;
};

// Optimism: maximize <x, theta> jointly over the action space and the ridge
// confidence ellipsoid {||theta - theta_hat||_gram <= sqrt(beta_t)}.
Vec oful_select(const DesignState& state, const ActionSpace& space,
                const PolicyConfig& cfg);

// One posterior draw theta_tilde = theta_hat + scale * L z with L L^T = gram_inv
// (symmetric square root) and z standard normal.
Vec lints_sample_parameter(const DesignState& state, double scale, Rng& rng);

// Thompson sampling: draw theta_tilde, play the best response. A zero draw is
// retried once, then falls back to the e1 direction.
Vec lints_select(const DesignState& state, const ActionSpace& space,
                 const PolicyConfig& cfg, Rng& rng);

Vec uniform_select(const ActionSpace& space, Rng& rng);

class ConfiguredPolicy : public Policy {
 public:
  explicit ConfiguredPolicy(PolicyConfig cfg) : cfg_(cfg) {}
  Vec select(const DesignState& state, const ActionSpace& space,
             Rng& rng) const override;
  const PolicyConfig& config() const { return cfg_; }

 private:
  PolicyConfig cfg_;
};

}  // namespace banditlab
