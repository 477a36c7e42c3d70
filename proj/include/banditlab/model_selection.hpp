#pragma once

#include <cstdint>
#include <vector>

#include "banditlab/bandit.hpp"
#include "banditlab/policies.hpp"

namespace banditlab {

// Doubling schedule: epoch i runs n1 * 2^{i-1} rounds at confidence
// delta / 2^{i-1}; the last epoch is truncated at total_rounds.
struct Epoch {
  std::int64_t length;
  double delta;
};
std::vector<Epoch> epoch_schedule(std::int64_t n1, double delta,
                                  std::int64_t total_rounds);

enum class RefineMode { Exact, Bound };

// Largest ||theta|| consistent with the confidence set: either the exact
// trust-region maximum or the cheap bound ||center|| + radius / sqrt(lambda_min).
double refine_norm_estimate(const ConfidenceSet& conf, RefineMode mode);

struct AlbConfig {
  double b_init = 1.0;
  std::int64_t n1 = 256;
  double delta = 0.05;
  std::int64_t total_rounds = 0;
  double lambda = 1.0;
  RefineMode refine = RefineMode::Exact;
};

// b_sequence[i] is the bound used during epoch i (so b_sequence[0] == b_init);
// the refinement appended after the last full epoch gives one extra entry when
// the horizon ends exactly on an epoch boundary.
struct AlbReport {
  std::vector<double> b_sequence;
  std::vector<std::int64_t> epoch_lengths;
  Vec per_epoch_regret;
  Vec cumulative_regret;  // running total at each epoch end
  Vec theta_hat_final;
};

// Norm-adaptive OFUL: each epoch restarts the design state, runs OFUL with the
// current norm bound, then shrinks the bound to the largest norm inside the
// epoch's confidence set. Truncated final epochs still count their regret but
// do not refine.
AlbReport alb_run(const BanditInstance& instance, const AlbConfig& cfg, Rng& rng);

}  // namespace banditlab
