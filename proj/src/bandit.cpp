#include "banditlab/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "banditlab/csv.hpp"

namespace banditlab {

namespace {
constexpr int kRefreshInterval = 512;
}

DesignState::DesignState(std::size_t dim, double lambda)
    : dim_(dim),
      lambda_(lambda),
      gram_(SymMatrix::identity(dim)),
      gram_inv_(SymMatrix::identity(dim)),
      xty_(dim, 0.0),
      theta_hat_(dim, 0.0) {
  if (dim < 1) throw std::invalid_argument("DesignState: dim < 1");
  if (lambda <= 0.0) throw std::invalid_argument("DesignState: lambda <= 0");
  gram_.scale(lambda);
  gram_inv_.scale(1.0 / lambda);
}

void DesignState::update(const Vec& action, double reward) {
  if (action.size() != dim_) throw std::invalid_argument("update: dimension mismatch");
  if (!all_finite(action) || !std::isfinite(reward))
    throw std::invalid_argument("update: non-finite input");

  gram_.add_outer(action);
  const Vec va = gram_inv_.apply(action);
  const double denom = 1.0 + dot(action, va);
  gram_inv_.add_outer(va, -1.0 / denom);
  for (std::size_t i = 0; i < dim_; ++i) xty_[i] += reward * action[i];
  ++rounds_;
  if (++updates_since_refresh_ >= kRefreshInterval) refresh_inverse();
  theta_hat_ = gram_inv_.apply(xty_);
}

void DesignState::refresh_inverse() {
  gram_inv_ = sym_inverse(gram_);
  updates_since_refresh_ = 0;
}

double DesignState::lambda_min() const { return eig_sym(gram_).eigenvalues.back(); }

double confidence_radius(double b, double lambda, std::int64_t n, std::size_t d,
                         double delta) {
  if (b < 0.0) throw std::invalid_argument("confidence_radius: b < 0");
  if (lambda <= 0.0) throw std::invalid_argument("confidence_radius: lambda <= 0");
  if (n < 0) throw std::invalid_argument("confidence_radius: n < 0");
  if (d < 1) throw std::invalid_argument("confidence_radius: d < 1");
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("confidence_radius: delta outside (0,1]");
  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  return b * std::sqrt(lambda) +
         std::sqrt(2.0 * std::log(1.0 / delta) + dd * std::log(1.0 + nn / (lambda * dd)));
}

std::vector<std::int64_t> geometric_checkpoints(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t r = 1; r <= n; r *= 2) out.push_back(r);
  if (out.empty() || out.back() != n) out.push_back(n);
  return out;
}

std::vector<std::int64_t> spaced_checkpoints(std::int64_t n, int count, std::int64_t lo) {
  if (n < 1 || count < 1 || lo < 1 || lo > n)
    throw std::invalid_argument("spaced_checkpoints: bad arguments");
  std::vector<std::int64_t> out;
  const double la = std::log(static_cast<double>(lo));
  const double lb = std::log(static_cast<double>(n));
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 1.0 : static_cast<double>(i) / (count - 1);
    const auto r = static_cast<std::int64_t>(std::llround(std::exp(la + f * (lb - la))));
    const std::int64_t clamped = std::clamp<std::int64_t>(r, lo, n);
    if (out.empty() || clamped > out.back()) out.push_back(clamped);
  }
  if (out.back() != n) out.push_back(n);
  return out;
}

EpisodeResult run_episode(const Policy& policy, const BanditInstance& instance,
                          std::int64_t n, double lambda, Rng& rng,
                          const std::vector<std::int64_t>& checkpoints) {
  if (n < 1) throw std::invalid_argument("run_episode: n < 1");
  if (instance.theta_star.size() != instance.space.dim())
    throw std::invalid_argument("run_episode: theta_star dimension mismatch");
  if (instance.noise_sigma < 0.0)
    throw std::invalid_argument("run_episode: noise_sigma < 0");

  const std::size_t d = instance.space.dim();
  const double opt = linear_opt_value(instance.space, instance.theta_star);

  EpisodeResult out{Trajectory{}, DesignState(d, lambda)};
  Trajectory& traj = out.trajectory;
  traj.actions.reserve(n);
  traj.rewards.reserve(n);
  traj.inst_regrets.reserve(n);
  traj.cum_regrets.reserve(n);

  std::vector<std::int64_t> cps(checkpoints);
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  std::size_t next_cp = 0;
  while (next_cp < cps.size() && cps[next_cp] < 1) ++next_cp;

  double cum = 0.0;
  for (std::int64_t t = 1; t <= n; ++t) {
    const Vec action = policy.select(out.state, instance.space, rng);
    const double mean = dot(action, instance.theta_star);
    const double reward = mean + instance.noise_sigma * rng.normal();
    out.state.update(action, reward);

    cum += opt - mean;
    traj.actions.push_back(action);
    traj.rewards.push_back(reward);
    traj.inst_regrets.push_back(opt - mean);
    traj.cum_regrets.push_back(cum);

    if (next_cp < cps.size() && t == cps[next_cp]) {
      traj.checkpoints.emplace_back(t, out.state.lambda_min());
      ++next_cp;
    }
  }
  return out;
}

std::string trajectory_csv(const Trajectory& traj) {
  const std::size_t d = traj.actions.empty() ? 0 : traj.actions.front().size();
  CsvTable t;
  t.header = {"round"};
  for (std::size_t j = 0; j < d; ++j) t.header.push_back("a_" + std::to_string(j));
  t.header.insert(t.header.end(), {"reward", "inst_regret", "cum_regret", "lambda_min"});

  std::size_t cp = 0;
  for (std::size_t i = 0; i < traj.actions.size(); ++i) {
    const auto round = static_cast<std::int64_t>(i + 1);
    std::vector<std::string> row = {format_int(round)};
    for (double v : traj.actions[i]) row.push_back(format_double(v));
    row.push_back(format_double(traj.rewards[i]));
    row.push_back(format_double(traj.inst_regrets[i]));
    row.push_back(format_double(traj.cum_regrets[i]));
    if (cp < traj.checkpoints.size() && traj.checkpoints[cp].first == round) {
      row.push_back(format_double(traj.checkpoints[cp].second));
      ++cp;
    } else {
      row.emplace_back();
    }
    t.add_row(std::move(row));
  }
  return t.to_string();
}

}  // namespace banditlab
