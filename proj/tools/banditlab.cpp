#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "banditlab/acceptance.hpp"
#include "banditlab/config.hpp"
#include "banditlab/harness.hpp"

namespace {

// Seed precedence: --seed flag, then BANDITLAB_SEED, then the config file.
void apply_seed_override(banditlab::ExperimentConfig& cfg, const CLI::Option* flag,
                         std::uint64_t flag_value) {
  if (flag->count() > 0) {
    cfg.master_seed = flag_value;
    return;
  }
  if (const char* env = std::getenv("BANDITLAB_SEED")) {
    try {
      cfg.master_seed = std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("BANDITLAB_SEED", "not an unsigned integer");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear-bandit experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  int workers = 0;
  std::uint64_t seed = 0;
  std::string format = "csv";
  CLI::App* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", config_path, "experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--workers", workers, "worker threads (0 = all cores)");
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "master seed override (beats BANDITLAB_SEED)");
  run->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "csv+svg"}));

  std::string suite = "all";
  std::string verify_dir = "acceptance_out";
  int verify_workers = 0;
  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("suite", suite, "all or one criterion (C1..C9 or its name)");
  verify->add_option("--out", verify_dir, "working directory for acceptance runs");
  verify->add_option("--workers", verify_workers, "worker threads (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      banditlab::ExperimentConfig cfg = banditlab::load_experiment_config(config_path);
      apply_seed_override(cfg, seed_opt, seed);
      banditlab::RunOptions opts;
      opts.out_dir = out_dir;
      opts.workers = workers;
      opts.svg = format == "csv+svg";
      for (const auto& f : banditlab::run_experiment(cfg, opts))
        std::cout << f.string() << "\n";
      return 0;
    }
    banditlab::AcceptanceOptions opts;
    opts.work_dir = verify_dir;
    opts.workers = verify_workers;
    const auto results = banditlab::run_acceptance(suite, opts);
    return banditlab::report_acceptance(results) == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
