#include "banditlab/model_selection.hpp"

#include <cmath>
#include <stdexcept>

namespace banditlab {

std::vector<Epoch> epoch_schedule(std::int64_t n1, double delta,
                                  std::int64_t total_rounds) {
  if (n1 < 1) throw std::invalid_argument("epoch_schedule: n1 < 1");
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("epoch_schedule: delta outside (0,1]");
  if (total_rounds < 1) throw std::invalid_argument("epoch_schedule: total_rounds < 1");

  std::vector<Epoch> out;
  std::int64_t used = 0;
  std::int64_t len = n1;
  double d = delta;
  while (used < total_rounds) {
    const std::int64_t take = std::min(len, total_rounds - used);
    out.push_back({take, d});
    used += take;
    len *= 2;
    d *= 0.5;
  }
  return out;
}

double refine_norm_estimate(const ConfidenceSet& conf, RefineMode mode) {
  if (mode == RefineMode::Exact)
    return trust_region_max_norm(conf.center, conf.shape, conf.radius).max_norm;
  const double lam_min = eig_sym(conf.shape).eigenvalues.back();
  if (lam_min <= 0.0)
    throw std::invalid_argument("refine_norm_estimate: shape not positive definite");
  return norm2(conf.center) + conf.radius / std::sqrt(lam_min);
}

AlbReport alb_run(const BanditInstance& instance, const AlbConfig& cfg, Rng& rng) {
  if (cfg.b_init <= 0.0) throw std::invalid_argument("alb_run: b_init <= 0");
  if (cfg.lambda <= 0.0) throw std::invalid_argument("alb_run: lambda <= 0");
  const std::vector<Epoch> epochs =
      epoch_schedule(cfg.n1, cfg.delta, cfg.total_rounds);
  const std::size_t d = instance.space.dim();
  const double opt = linear_opt_value(instance.space, instance.theta_star);

  AlbReport rep;
  rep.b_sequence.push_back(cfg.b_init);
  double cum = 0.0;
  double b = cfg.b_init;
  Vec theta_hat(d, 0.0);

  for (std::size_t i = 0; i < epochs.size(); ++i) {
    const Epoch& ep = epochs[i];
    PolicyConfig pc;
    pc.kind = PolicyKind::Oful;
    pc.delta = ep.delta;
    pc.norm_bound = b;

    DesignState state(d, cfg.lambda);
    double epoch_regret = 0.0;
    for (std::int64_t t = 0; t < ep.length; ++t) {
      const Vec action = oful_select(state, instance.space, pc);
      const double mean = dot(action, instance.theta_star);
      state.update(action, mean + instance.noise_sigma * rng.normal());
      epoch_regret += opt - mean;
    }
    cum += epoch_regret;
    rep.epoch_lengths.push_back(ep.length);
    rep.per_epoch_regret.push_back(epoch_regret);
    rep.cumulative_regret.push_back(cum);
    theta_hat = state.theta_hat();

    // A truncated epoch ran at the wrong (n_i, delta_i) pair for its actual
    // length, so its confidence set is not used for refinement.
    const bool full = ep.length == cfg.n1 * (std::int64_t{1} << i);
    if (full) {
      ConfidenceSet conf{state.theta_hat(), state.gram(),
                         confidence_radius(b, cfg.lambda, ep.length, d, ep.delta)};
      b = refine_norm_estimate(conf, cfg.refine);
      rep.b_sequence.push_back(b);
    }
  }
  rep.theta_hat_final = theta_hat;
  return rep;
}

}  // namespace banditlab
