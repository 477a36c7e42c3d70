#include "banditlab/harness.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "banditlab/csv.hpp"
#include "banditlab/svg.hpp"

namespace banditlab {

void parallel_for(int jobs, int workers, const std::function<void(int)>& fn) {
  if (jobs <= 0) return;
  if (workers <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    workers = hw == 0 ? 1 : static_cast<int>(hw);
  }
  workers = std::min(workers, jobs);
  if (workers == 1) {
    for (int j = 0; j < jobs; ++j) fn(j);
    return;
  }

  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int j = next.fetch_add(1);
        if (j >= jobs) return;
        try {
          fn(j);
        } catch (...) {
          errors[j] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

EnsembleOutcome run_ensemble(const ExperimentConfig& cfg, const ActionSpace& space,
                             const Vec& theta, int workers) {
  const std::vector<std::int64_t> checkpoints =
      spaced_checkpoints(cfg.n, cfg.checkpoint_count, std::min<std::int64_t>(16, cfg.n));
  const ConfiguredPolicy policy(cfg.policy);

  EnsembleOutcome out;
  out.traces.resize(cfg.trials);
  parallel_for(cfg.trials, workers, [&](int t) {
    Rng rng(derive_stream_seed(cfg.master_seed, static_cast<std::uint64_t>(t)));
    const BanditInstance inst{theta, cfg.sigma, space};
    const EpisodeResult ep =
        run_episode(policy, inst, cfg.n, cfg.lambda, rng, checkpoints);
    out.traces[t] = make_spectral_trace(ep.trajectory.checkpoints);
  });

  out.band = ensemble_band(out.traces, cfg.k_sigma);
  out.mean_trace.rounds = out.traces.front().rounds;
  const std::size_t k = out.mean_trace.rounds.size();
  out.mean_trace.lambda_min.resize(k);
  out.mean_trace.raw_exponent.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    double mean = 0.0;
    for (const SpectralTrace& tr : out.traces) mean += tr.lambda_min[i];
    mean /= static_cast<double>(out.traces.size());
    out.mean_trace.lambda_min[i] = mean;
    out.mean_trace.raw_exponent[i] =
        std::log(mean) / std::log(static_cast<double>(out.mean_trace.rounds[i]));
  }
  out.report = exponent_estimate(out.mean_trace, cfg.exponent_threshold,
                                 cfg.tail_fraction);
  return out;
}

namespace {

std::filesystem::path out_path(const ExperimentConfig& cfg, const RunOptions& opts,
                               const std::string& suffix) {
  return opts.out_dir / (cfg.name + "_" + suffix);
}

void write_traces_csv(const std::filesystem::path& path,
                      const std::vector<SpectralTrace>& traces) {
  CsvTable t;
  t.header = {"trial", "round", "lambda_min", "raw_exponent"};
  for (std::size_t i = 0; i < traces.size(); ++i)
    for (std::size_t j = 0; j < traces[i].rounds.size(); ++j)
      t.add_row({format_int(static_cast<std::int64_t>(i)),
                 format_int(traces[i].rounds[j]), format_double(traces[i].lambda_min[j]),
                 format_double(traces[i].raw_exponent[j])});
  write_file_atomic(path, t.to_string());
}

void write_band_csv(const std::filesystem::path& path, const EnsembleBand& band) {
  CsvTable t;
  t.header = {"round", "mean", "std", "band_lo", "band_hi"};
  for (std::size_t i = 0; i < band.rounds.size(); ++i)
    t.add_row({format_int(band.rounds[i]), format_double(band.mean[i]),
               format_double(band.stddev[i]),
               format_double(band.mean[i] - band.k_sigma * band.stddev[i]),
               format_double(band.mean[i] + band.k_sigma * band.stddev[i])});
  write_file_atomic(path, t.to_string());
}

std::vector<std::string> summary_row(const ExperimentConfig& cfg, std::size_t d,
                                     const EnsembleOutcome& ens) {
  return {format_int(static_cast<std::int64_t>(d)),
          format_int(cfg.n),
          format_int(cfg.trials),
          format_double(ens.band.mean.back()),
          format_double(ens.report.fitted_slope),
          ens.report.n0_hat ? format_int(*ens.report.n0_hat) : std::string{},
          format_double(ens.report.gamma_hat)};
}

const std::vector<std::string> kSummaryHeader = {
    "d",           "n",          "trials", "final_mean_raw_exponent",
    "fitted_slope", "n0_hat",    "gamma_hat"};

void write_band_svg(const std::filesystem::path& path, const std::string& title,
                    const EnsembleBand& band, double threshold) {
  SvgPlotSpec spec;
  spec.title = title;
  spec.x_label = "round n (log scale)";
  spec.y_label = "ln lambda_min / ln n";
  spec.log_x = true;
  spec.hline = threshold;
  auto series = [&](const Vec& y, const std::string& color, const std::string& label) {
    SvgSeries s;
    s.x.assign(band.rounds.begin(), band.rounds.end());
    s.y = y;
    s.color = color;
    s.label = label;
    return s;
  };
  Vec lo(band.mean), hi(band.mean);
  for (std::size_t i = 0; i < band.mean.size(); ++i) {
    lo[i] -= band.k_sigma * band.stddev[i];
    hi[i] += band.k_sigma * band.stddev[i];
  }
  spec.series.push_back(series(band.mean, "#1f6fb2", "mean"));
  spec.series.push_back(series(lo, "#9ec4e0", "band lo"));
  spec.series.push_back(series(hi, "#9ec4e0", "band hi"));
  write_file_atomic(path, render_line_plot(spec));
}

std::vector<std::filesystem::path> scenario_ensemble(const ExperimentConfig& cfg,
                                                     const RunOptions& opts) {
  const ActionSpace space = cfg.space.build();
  const Vec theta = cfg.resolve_theta(space.dim());
  const EnsembleOutcome ens = run_ensemble(cfg, space, theta, opts.workers);

  std::vector<std::filesystem::path> files;
  files.push_back(out_path(cfg, opts, "traces.csv"));
  write_traces_csv(files.back(), ens.traces);
  files.push_back(out_path(cfg, opts, "band.csv"));
  write_band_csv(files.back(), ens.band);

  CsvTable summary;
  summary.header = kSummaryHeader;
  summary.add_row(summary_row(cfg, space.dim(), ens));
  files.push_back(out_path(cfg, opts, "summary.csv"));
  write_file_atomic(files.back(), summary.to_string());

  if (opts.svg) {
    files.push_back(out_path(cfg, opts, "band.svg"));
    write_band_svg(files.back(), cfg.name, ens.band, cfg.exponent_threshold);
  }
  return files;
}

std::vector<std::filesystem::path> scenario_dim_sweep(const ExperimentConfig& cfg,
                                                      const RunOptions& opts) {
  if (cfg.dims.empty()) throw std::invalid_argument("dim_sweep: empty dims list");
  std::vector<std::filesystem::path> files;
  CsvTable sweep;
  sweep.header = kSummaryHeader;
  SvgPlotSpec spec;
  spec.title = cfg.name;
  spec.x_label = "round n (log scale)";
  spec.y_label = "mean raw exponent";
  spec.log_x = true;
  spec.hline = cfg.exponent_threshold;
  const std::vector<std::string> palette = {"#1f6fb2", "#c23b22", "#3a9d5d",
                                            "#8e5bb5", "#b08d2f"};

  for (std::size_t i = 0; i < cfg.dims.size(); ++i) {
    ExperimentConfig sub = cfg;
    sub.space.dim = static_cast<std::size_t>(cfg.dims[i]);
    const ActionSpace space = sub.space.build();
    const Vec theta = sub.resolve_theta(space.dim());
    const EnsembleOutcome ens = run_ensemble(sub, space, theta, opts.workers);

    sweep.add_row(summary_row(sub, space.dim(), ens));
    files.push_back(out_path(cfg, opts, "d" + std::to_string(cfg.dims[i]) + "_band.csv"));
    write_band_csv(files.back(), ens.band);

    SvgSeries s;
    s.x.assign(ens.band.rounds.begin(), ens.band.rounds.end());
    s.y = ens.band.mean;
    s.color = palette[i % palette.size()];
    s.label = "d = " + std::to_string(cfg.dims[i]);
    spec.series.push_back(s);
  }

  files.push_back(out_path(cfg, opts, "dimsweep.csv"));
  write_file_atomic(files.back(), sweep.to_string());
  if (opts.svg) {
    files.push_back(out_path(cfg, opts, "dimsweep.svg"));
    write_file_atomic(files.back(), render_line_plot(spec));
  }
  return files;
}

std::vector<std::filesystem::path> scenario_alb(const ExperimentConfig& cfg,
                                                const RunOptions& opts) {
  if (cfg.alb.n1 < 256)
    std::fprintf(stderr, "warning: alb.n1 = %lld is below the recommended minimum 256\n",
                 static_cast<long long>(cfg.alb.n1));
  const ActionSpace space = cfg.space.build();
  const Vec theta = cfg.resolve_theta(space.dim());
  const BanditInstance inst{theta, cfg.sigma, space};
  const double b_oracle = norm2(theta);
  const std::int64_t n_oracle =
      static_cast<std::int64_t>(std::bit_ceil(static_cast<std::uint64_t>(
          std::max<std::int64_t>(1, cfg.alb.total_rounds))));

  struct RunOut {
    AlbReport alb;
    double oracle_regret = 0.0;
  };
  std::vector<RunOut> runs(cfg.trials);
  parallel_for(cfg.trials, opts.workers, [&](int r) {
    Rng rng(derive_stream_seed(cfg.master_seed, static_cast<std::uint64_t>(r)));
    runs[r].alb = alb_run(inst, cfg.alb, rng);

    PolicyConfig pc;
    pc.kind = PolicyKind::Oful;
    pc.delta = cfg.alb.delta;
    pc.norm_bound = b_oracle;
    Rng rng2(derive_stream_seed(cfg.master_seed, static_cast<std::uint64_t>(r)));
    const EpisodeResult ep = run_episode(ConfiguredPolicy(pc), inst, n_oracle,
                                         cfg.alb.lambda, rng2, {});
    runs[r].oracle_regret = ep.trajectory.cum_regrets.back();
  });

  CsvTable epochs;
  epochs.header = {"run", "epoch", "length", "delta", "b", "epoch_regret", "cum_regret"};
  CsvTable bounds;
  bounds.header = {"run", "i", "b"};
  CsvTable summary;
  summary.header = {"run", "final_b", "total_regret", "oracle_n", "oracle_regret",
                    "ratio"};
  for (int r = 0; r < cfg.trials; ++r) {
    const AlbReport& rep = runs[r].alb;
    double delta_i = cfg.alb.delta;
    for (std::size_t e = 0; e < rep.epoch_lengths.size(); ++e) {
      epochs.add_row({format_int(r), format_int(static_cast<std::int64_t>(e + 1)),
                      format_int(rep.epoch_lengths[e]), format_double(delta_i),
                      format_double(rep.b_sequence[e]),
                      format_double(rep.per_epoch_regret[e]),
                      format_double(rep.cumulative_regret[e])});
      delta_i *= 0.5;
    }
    for (std::size_t i = 0; i < rep.b_sequence.size(); ++i)
      bounds.add_row({format_int(r), format_int(static_cast<std::int64_t>(i + 1)),
                      format_double(rep.b_sequence[i])});
    const double total = rep.cumulative_regret.back();
    summary.add_row({format_int(r), format_double(rep.b_sequence.back()),
                     format_double(total), format_int(n_oracle),
                     format_double(runs[r].oracle_regret),
                     format_double(total / std::max(1e-300, runs[r].oracle_regret))});
  }

  std::vector<std::filesystem::path> files;
  files.push_back(out_path(cfg, opts, "alb.csv"));
  write_file_atomic(files.back(), epochs.to_string());
  files.push_back(out_path(cfg, opts, "alb_b.csv"));
  write_file_atomic(files.back(), bounds.to_string());
  files.push_back(out_path(cfg, opts, "alb_summary.csv"));
  write_file_atomic(files.back(), summary.to_string());
  return files;
}

std::vector<std::filesystem::path> scenario_clustering(const ExperimentConfig& cfg,
                                                       const RunOptions& opts) {
  if (cfg.cluster_params.empty() || cfg.cluster_assignment.empty())
    throw std::invalid_argument(
        "clustering scenario requires cluster.params and cluster.assignment");
  const ActionSpace space = cfg.space.build();

  MultiAgentConfig mc;
  mc.cluster_params = cfg.cluster_params;
  mc.assignment = cfg.cluster_assignment;
  mc.n = cfg.n;
  mc.delta = cfg.policy.delta;
  mc.lambda = cfg.lambda;
  mc.norm_bound = cfg.policy.norm_bound;
  mc.gamma = cfg.cluster_gamma;
  mc.eta = cfg.cluster_eta;

  const std::size_t agents = mc.assignment.size();
  std::vector<ClusterReport> reports(cfg.trials);
  parallel_for(cfg.trials, opts.workers, [&](int r) {
    // stride by the agent count so per-agent streams never collide across runs
    const std::uint64_t base =
        cfg.master_seed + static_cast<std::uint64_t>(r) * agents;
    reports[r] = run_multi_agent_clustering(mc, space, cfg.sigma, base);
  });

  CsvTable per_agent;
  per_agent.header = {"run", "agent", "true_cluster", "assigned_cluster", "regret"};
  for (std::size_t j = 0; j < space.dim(); ++j)
    per_agent.header.push_back("est_" + std::to_string(j));
  CsvTable summary;
  summary.header = {"run", "eta", "separation", "separation_ok", "components",
                    "exact_recovery"};
  const double separation = min_separation(mc.cluster_params);

  for (int r = 0; r < cfg.trials; ++r) {
    const ClusterReport& rep = reports[r];
    std::vector<int> assigned(agents, -1);
    for (std::size_t c = 0; c < rep.partition.size(); ++c)
      for (int k : rep.partition[c]) assigned[k] = static_cast<int>(c);
    for (std::size_t k = 0; k < agents; ++k) {
      std::vector<std::string> row = {
          format_int(r), format_int(static_cast<std::int64_t>(k)),
          format_int(mc.assignment[k]), format_int(assigned[k]),
          format_double(rep.per_agent_regret[k])};
      for (double v : rep.estimates[k]) row.push_back(format_double(v));
      per_agent.add_row(std::move(row));
    }
    summary.add_row({format_int(r), format_double(rep.eta), format_double(separation),
                     format_int(separation > 2.0 * rep.eta ? 1 : 0),
                     format_int(static_cast<std::int64_t>(rep.partition.size())),
                     format_int(rep.exact_recovery ? 1 : 0)});
  }

  std::vector<std::filesystem::path> files;
  files.push_back(out_path(cfg, opts, "clustering.csv"));
  write_file_atomic(files.back(), per_agent.to_string());
  files.push_back(out_path(cfg, opts, "cluster_summary.csv"));
  write_file_atomic(files.back(), summary.to_string());
  return files;
}

std::vector<std::filesystem::path> scenario_verify_theory(const ExperimentConfig& cfg,
                                                          const RunOptions& opts) {
  const ActionSpace space = cfg.space.build();
  if (!std::holds_alternative<UnitSphere>(space.value()))
    throw std::invalid_argument("verify_theory: requires a UnitSphere action space");
  const Vec theta = cfg.resolve_theta(space.dim());
  if (std::abs(norm2(theta) - 1.0) > 1e-9)
    throw std::invalid_argument("verify_theory: requires a unit-norm theta_star");

  const double eps = cfg.vt_eps_scale / std::sqrt(static_cast<double>(cfg.n));
  const ConfiguredPolicy policy(cfg.policy);
  const BanditInstance inst{theta, cfg.sigma, space};

  // Per-trial grams and eps-fractions under theta; summed in index order so the
  // result is identical to a serial mc_expected_design call.
  std::vector<SymMatrix> grams(cfg.trials);
  Vec z1s(cfg.trials, 0.0);
  parallel_for(cfg.trials, opts.workers, [&](int t) {
    Rng rng(derive_stream_seed(cfg.master_seed, static_cast<std::uint64_t>(t)));
    const EpisodeResult ep = run_episode(policy, inst, cfg.n, cfg.lambda, rng, {});
    grams[t] = ep.state.gram();
    z1s[t] = eps_fraction(ep.trajectory, space, theta, eps);
  });
  SymMatrix gbar(space.dim());
  for (const SymMatrix& g : grams) gbar = add(gbar, g);
  gbar.scale(1.0 / cfg.trials);
  gbar.add_scaled_identity(-cfg.lambda);

  const EigenDecomposition eig = eig_sym(gbar);
  const double lam_min = eig.eigenvalues.back();
  const Vec& u_min = eig.eigenvectors.back();
  const Vec v_opt = linear_argmax(space, theta);
  const AlignmentReport align = alignment_check(gbar, v_opt);

  const double alpha = perturbation_alpha_sphere(eps, std::min(align.value, 1.0 - 1e-12));
  const Vec theta_prime = add(theta, scaled(u_min, alpha));
  Rng disjoint_rng(derive_stream_seed(cfg.master_seed, 0));
  const bool disjoint =
      check_disjoint_eps_sets(space, theta, theta_prime, eps, 10000, disjoint_rng);

  const double lhs = kl_quadratic_lhs(theta, theta_prime, gbar);
  const double half_quad = 0.5 * alpha * alpha * lam_min;
  const double identity_diff = std::abs(lhs - half_quad);

  const BanditInstance inst_prime{theta_prime, cfg.sigma, space};
  Vec z2s(cfg.trials, 0.0);
  parallel_for(cfg.trials, opts.workers, [&](int t) {
    Rng rng(derive_stream_seed(cfg.master_seed, static_cast<std::uint64_t>(t)));
    const EpisodeResult ep = run_episode(policy, inst_prime, cfg.n, cfg.lambda, rng, {});
    // fraction of pulls still inside the ORIGINAL eps-cap
    z2s[t] = eps_fraction(ep.trajectory, space, theta, eps);
  });
  double z1 = 0.0, z2 = 0.0;
  for (int t = 0; t < cfg.trials; ++t) {
    z1 += z1s[t];
    z2 += z2s[t];
  }
  z1 /= cfg.trials;
  z2 /= cfg.trials;
  const PinskerReport pr = pinsker_bound(z1, z2);

  CsvTable checks;
  checks.header = {"check", "value", "bound", "pass"};
  auto info = [&](const std::string& name, double value) {
    checks.add_row({name, format_double(value), "", "1"});
  };
  auto gate = [&](const std::string& name, double value, double bound, bool pass) {
    checks.add_row({name, format_double(value), format_double(bound), pass ? "1" : "0"});
  };
  info("lambda_min_gbar", lam_min);
  gate("alignment", align.value, 0.2, align.value < 0.2 && !align.degenerate);
  gate("alignment_degenerate", align.degenerate ? 1.0 : 0.0, 0.0, !align.degenerate);
  info("eps", eps);
  info("alpha", alpha);
  gate("disjoint_caps", disjoint ? 1.0 : 0.0, 1.0, disjoint);
  info("kl_quadratic_lhs", lhs);
  info("half_alpha_sq_lambda_min", half_quad);
  gate("quad_identity_diff", identity_diff, 1e-9, identity_diff <= 1e-9);
  info("z_theta", z1);
  info("z_theta_prime", z2);
  gate("z_ordering", z1 - z2, 0.0, z1 > z2);
  gate("pinsker_vs_quad", pr.pinsker, lhs, lhs >= pr.pinsker);
  info("kl_exact", pr.kl);

  std::vector<std::filesystem::path> files;
  files.push_back(out_path(cfg, opts, "checks.csv"));
  write_file_atomic(files.back(), checks.to_string());
  return files;
}

}  // namespace

std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& cfg,
                                                  const RunOptions& opts) {
  std::filesystem::create_directories(opts.out_dir);
  switch (cfg.scenario) {
    case Scenario::EigenTrace:
    case Scenario::ConvexCounterexample:
      return scenario_ensemble(cfg, opts);
    case Scenario::DimSweep:
      return scenario_dim_sweep(cfg, opts);
    case Scenario::Alb:
      return scenario_alb(cfg, opts);
    case Scenario::Clustering:
      return scenario_clustering(cfg, opts);
    case Scenario::VerifyTheory:
      return scenario_verify_theory(cfg, opts);
  }
  throw std::logic_error("unknown scenario");
}

}  // namespace banditlab
