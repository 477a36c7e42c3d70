#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "banditlab/bandit.hpp"
#include "banditlab/policies.hpp"

namespace banditlab {

// lambda_min(V_n) against n at checkpoint rounds, with the pointwise growth
// exponent ln(lambda_min)/ln(n). Rounds below 2 are dropped (the exponent is
// undefined at n = 1); nonpositive lambda_min yields NaN.
struct SpectralTrace {
  std::vector<std::int64_t> rounds;
  Vec lambda_min;
  Vec raw_exponent;
};

SpectralTrace make_spectral_trace(
    const std::vector<std::pair<std::int64_t, double>>& checkpoints);

// Tail diagnostics of one trace: least-squares slope of ln(lambda_min) against
// ln(n) over the last ceil(tail_fraction * K) checkpoints (at least 2),
// n0_hat = earliest checkpoint from which raw_exponent stays >= threshold, and
// gamma_hat = min over the tail window of lambda_min / sqrt(n).
struct ExponentReport {
  double fitted_slope = 0.0;
  std::optional<std::int64_t> n0_hat;
  double gamma_hat = 0.0;
};

ExponentReport exponent_estimate(const SpectralTrace& trace, double threshold,
                                 double tail_fraction);

struct EnsembleBand {
  std::vector<std::int64_t> rounds;
  Vec mean;    // of raw_exponent across traces, per checkpoint
  Vec stddev;  // sample standard deviation (divisor k-1; zero for k = 1)
  double k_sigma = 3.0;
};

// Traces must share an identical checkpoint grid.
EnsembleBand ensemble_band(const std::vector<SpectralTrace>& traces, double k_sigma);

// Monte Carlo estimate of the expected design matrix E[sum_t A_t A_t^T]:
// averages the final gram minus lambda I over `trials` episodes seeded
// master_seed + t.
SymMatrix mc_expected_design(const Policy& policy, const BanditInstance& instance,
                             std::int64_t n, int trials, double lambda,
                             std::uint64_t master_seed);

// max_{i >= 2} |<v, u_i>| over the trailing eigenvectors of gbar; degenerate is
// set when the top eigengap is below 1e-9 and the split u_1 vs the rest is
// arbitrary.
struct AlignmentReport {
  double value = 0.0;
  bool degenerate = false;
};
AlignmentReport alignment_check(const SymMatrix& gbar, const Vec& v);

// Fraction of episode rounds whose action lies in OPT_eps(theta).
double eps_fraction(const Trajectory& traj, const ActionSpace& space, const Vec& theta,
                    double eps);

// Pinsker lower bound 2 (z1 - z2)^2 for KL(Ber(z1) || Ber(z2)), and the exact
// KL (infinity when z2 is degenerate and z1 differs).
struct PinskerReport {
  double pinsker = 0.0;
  double kl = 0.0;
};
PinskerReport pinsker_bound(double z1, double z2);

// (1/2) ||theta - theta_prime||^2_gbar, the Gaussian-bandit KL between two
// parameters under a common expected design.
double kl_quadratic_lhs(const Vec& theta, const Vec& theta_prime, const SymMatrix& gbar);

// High-probability floor gamma sqrt(n) - (2 + C) sqrt(8 n ln(d/delta)) implied
// by the in-expectation rate plus a matrix Azuma deviation.
double highprob_reference(double gamma, double c, int d, double delta, std::int64_t n);

}  // namespace banditlab
