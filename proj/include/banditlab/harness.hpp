#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "banditlab/config.hpp"
#include "banditlab/spectral.hpp"

namespace banditlab {

struct RunOptions {
  std::filesystem::path out_dir = "out";
  int workers = 0;  // 0 = hardware concurrency
  bool svg = false;
};

// Runs fn(0..jobs-1) on a fixed-size thread pool. Job outputs must be written
// to per-job slots; the first exception (lowest job index) is rethrown.
void parallel_for(int jobs, int workers, const std::function<void(int)>& fn);

// One policy/space ensemble: per-trial spectral traces on a shared checkpoint
// grid plus the cross-trial band and tail diagnostics of the mean trace.
struct EnsembleOutcome {
  std::vector<SpectralTrace> traces;
  EnsembleBand band;
  SpectralTrace mean_trace;  // lambda_min averaged over trials per checkpoint
  ExponentReport report;     // diagnostics of the mean trace
};

EnsembleOutcome run_ensemble(const ExperimentConfig& cfg, const ActionSpace& space,
                             const Vec& theta, int workers);

// Dispatches on cfg.scenario and writes the scenario's CSV (and SVG) files into
// opts.out_dir, named <cfg.name>_<file>.csv. Returns the written paths.
std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& cfg,
                                                  const RunOptions& opts);

}  // namespace banditlab
