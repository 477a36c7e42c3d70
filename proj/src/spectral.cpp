#include "banditlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace banditlab {

SpectralTrace make_spectral_trace(
    const std::vector<std::pair<std::int64_t, double>>& checkpoints) {
  SpectralTrace trace;
  for (const auto& [round, lam] : checkpoints) {
    if (round < 2) continue;
    trace.rounds.push_back(round);
    trace.lambda_min.push_back(lam);
    trace.raw_exponent.push_back(
        lam > 0.0 ? std::log(lam) / std::log(static_cast<double>(round))
                  : std::numeric_limits<double>::quiet_NaN());
  }
  return trace;
}

ExponentReport exponent_estimate(const SpectralTrace& trace, double threshold,
                                 double tail_fraction) {
  const std::size_t k = trace.rounds.size();
  if (k < 2) throw std::invalid_argument("exponent_estimate: needs >= 2 checkpoints");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw std::invalid_argument("exponent_estimate: tail_fraction outside (0,1]");

  const std::size_t m =
      std::max<std::size_t>(2, static_cast<std::size_t>(
                                   std::ceil(tail_fraction * static_cast<double>(k))));
  const std::size_t start = k - std::min(m, k);

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t cnt = 0;
  double gamma_hat = std::numeric_limits<double>::infinity();
  for (std::size_t i = start; i < k; ++i) {
    const double lam = trace.lambda_min[i];
    if (!(lam > 0.0))
      throw std::invalid_argument("exponent_estimate: nonpositive lambda_min in tail");
    const double x = std::log(static_cast<double>(trace.rounds[i]));
    const double y = std::log(lam);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
    gamma_hat = std::min(gamma_hat, lam / std::sqrt(static_cast<double>(trace.rounds[i])));
  }
  const double denom = cnt * sxx - sx * sx;
  if (denom <= 0.0)
    throw std::invalid_argument("exponent_estimate: degenerate checkpoint grid");

  ExponentReport rep;
  rep.fitted_slope = (cnt * sxy - sx * sy) / denom;
  rep.gamma_hat = gamma_hat;

  // earliest checkpoint from which the raw exponent never dips below threshold
  std::optional<std::size_t> idx;
  for (std::size_t i = k; i-- > 0;) {
    const double e = trace.raw_exponent[i];
    if (std::isnan(e) || e < threshold) break;
    idx = i;
  }
  if (idx) rep.n0_hat = trace.rounds[*idx];
  return rep;
}

EnsembleBand ensemble_band(const std::vector<SpectralTrace>& traces, double k_sigma) {
  if (traces.empty()) throw std::invalid_argument("ensemble_band: no traces");
  const std::vector<std::int64_t>& rounds = traces.front().rounds;
  for (const SpectralTrace& t : traces)
    if (t.rounds != rounds)
      throw std::invalid_argument("ensemble_band: traces on different checkpoint grids");

  EnsembleBand band;
  band.rounds = rounds;
  band.k_sigma = k_sigma;
  band.mean.resize(rounds.size());
  band.stddev.resize(rounds.size());
  const double n = static_cast<double>(traces.size());
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    double mean = 0.0;
    for (const SpectralTrace& t : traces) mean += t.raw_exponent[i];
    mean /= n;
    double ss = 0.0;
    for (const SpectralTrace& t : traces) {
      const double dlt = t.raw_exponent[i] - mean;
      ss += dlt * dlt;
    }
    band.mean[i] = mean;
    band.stddev[i] = traces.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return band;
}

SymMatrix mc_expected_design(const Policy& policy, const BanditInstance& instance,
                             std::int64_t n, int trials, double lambda,
                             std::uint64_t master_seed) {
  if (trials < 1) throw std::invalid_argument("mc_expected_design: trials < 1");
  const std::size_t d = instance.space.dim();
  SymMatrix acc(d);
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_stream_seed(master_seed, static_cast<std::uint64_t>(t)));
    const EpisodeResult ep = run_episode(policy, instance, n, lambda, rng, {});
    acc = add(acc, ep.state.gram());
  }
  acc.scale(1.0 / trials);
  acc.add_scaled_identity(-lambda);
  return acc;
}

AlignmentReport alignment_check(const SymMatrix& gbar, const Vec& v) {
  if (v.size() != gbar.dim())
    throw std::invalid_argument("alignment_check: dimension mismatch");
  const EigenDecomposition eig = eig_sym(gbar);
  AlignmentReport rep;
  if (gbar.dim() > 1)
    rep.degenerate = eig.eigenvalues[0] - eig.eigenvalues[1] < 1e-9;
  for (std::size_t k = 1; k < gbar.dim(); ++k)
    rep.value = std::max(rep.value, std::abs(dot(v, eig.eigenvectors[k])));
  return rep;
}

double eps_fraction(const Trajectory& traj, const ActionSpace& space, const Vec& theta,
                    double eps) {
  if (traj.actions.empty()) throw std::invalid_argument("eps_fraction: empty trajectory");
  std::size_t hits = 0;
  for (const Vec& a : traj.actions)
    if (eps_optimal_contains(space, theta, eps, a)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(traj.actions.size());
}

PinskerReport pinsker_bound(double z1, double z2) {
  if (!(z1 >= 0.0 && z1 <= 1.0 && z2 >= 0.0 && z2 <= 1.0))
    throw std::invalid_argument("pinsker_bound: arguments outside [0,1]");
  PinskerReport rep;
  rep.pinsker = 2.0 * (z1 - z2) * (z1 - z2);
  if (z1 == z2) {
    rep.kl = 0.0;
  } else if (z2 == 0.0 || z2 == 1.0) {
    rep.kl = std::numeric_limits<double>::infinity();
  } else {
    double kl = 0.0;
    if (z1 > 0.0) kl += z1 * std::log(z1 / z2);
    if (z1 < 1.0) kl += (1.0 - z1) * std::log((1.0 - z1) / (1.0 - z2));
    rep.kl = kl;
  }
  return rep;
}

double kl_quadratic_lhs(const Vec& theta, const Vec& theta_prime,
                        const SymMatrix& gbar) {
  if (theta.size() != gbar.dim() || theta_prime.size() != gbar.dim())
    throw std::invalid_argument("kl_quadratic_lhs: dimension mismatch");
  return 0.5 * gbar.quad_form(sub(theta, theta_prime));
}

double highprob_reference(double gamma, double c, int d, double delta, std::int64_t n) {
  if (d < 1) throw std::invalid_argument("highprob_reference: d < 1");
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("highprob_reference: delta outside (0,1]");
  if (n < 0) throw std::invalid_argument("highprob_reference: n < 0");
  const double log_term = std::log(static_cast<double>(d) / delta);
  const double nn = static_cast<double>(n);
  return gamma * std::sqrt(nn) - (2.0 + c) * std::sqrt(8.0 * nn * log_term);
}

}  // namespace banditlab
