#include "banditlab/policies.hpp"

#include <cmath>
#include <stdexcept>

namespace banditlab {

Vec oful_select(const DesignState& state, const ActionSpace& space,
                const PolicyConfig& cfg) {
  const double radius = confidence_radius(cfg.norm_bound, state.lambda(),
                                          state.rounds(), state.dim(), cfg.delta);
  return ucb_argmax(space, state.theta_hat(), state.gram(), radius);
}

Vec lints_sample_parameter(const DesignState& state, double scale, Rng& rng) {
  const SymMatrix root = sym_power(state.gram_inv(), 0.5);
  const Vec step = root.apply(rng.gaussian_vector(state.dim()));
  return add(state.theta_hat(), scaled(step, scale));
}

Vec lints_select(const DesignState& state, const ActionSpace& space,
                 const PolicyConfig& cfg, Rng& rng) {
  const double scale =
      cfg.ts_scale ? *cfg.ts_scale
                   : confidence_radius(cfg.norm_bound, state.lambda(), state.rounds(),
                                       state.dim(), cfg.delta);
  for (int attempt = 0; attempt < 2; ++attempt) {
    const Vec theta = lints_sample_parameter(state, scale, rng);
    if (norm2(theta) > 0.0) return linear_argmax(space, theta);
  }
  return linear_argmax(space, basis_vector(state.dim(), 0));
}

Vec uniform_select(const ActionSpace& space, Rng& rng) {
  return sample_uniform(space, rng);
}

Vec ConfiguredPolicy::select(const DesignState& state, const ActionSpace& space,
                             Rng& rng) const {
  switch (cfg_.kind) {
    case PolicyKind::Oful:
      return oful_select(state, space, cfg_);
    case PolicyKind::LinTs:
      return lints_select(state, space, cfg_, rng);
    case PolicyKind::Uniform:
      return uniform_select(space, rng);
  }
  throw std::logic_error("unknown policy kind");
}

}  // namespace banditlab
