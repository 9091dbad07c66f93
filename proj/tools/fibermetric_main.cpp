// fibermetric: run, replay, and export numerical experiments on families of
// elliptic-curve fibers.
//
//   fibermetric run <config.json> [--workers N] [--out DIR]
//   fibermetric replay <run-dir> [--workers N]
//   fibermetric plotdata <run-dir>
//
// FIBERMETRIC_SEED overrides the config seed (recorded in the manifest).

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "fibermetric/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for relative Ricci-flat metrics on "
               "elliptic fiber families"};
  app.require_subcommand(1);

  std::string config_path, run_dir, out_dir;
  int workers = int(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;

  CLI::App* run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("config", config_path, "JSON experiment config")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--workers", workers, "worker count (does not affect results)");
  run->add_option("--out", out_dir, "output directory override");

  CLI::App* replay = app.add_subcommand(
      "replay", "re-execute a run directory and verify checksums");
  replay->add_option("dir", run_dir, "run directory")->required();
  replay->add_option("--workers", workers,
                     "worker count (does not affect results)");

  CLI::App* plot = app.add_subcommand(
      "plotdata", "convert run outputs to plain-text plot data");
  plot->add_option("dir", run_dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : fm::kExitError;
  }

  if (run->parsed()) {
    fm::RunOptions opts;
    opts.workers = workers;
    if (!out_dir.empty()) opts.out_override = out_dir;
    if (const char* env = std::getenv("FIBERMETRIC_SEED")) {
      try {
        opts.seed_override = std::stoull(env);
      } catch (...) {
        std::cerr << "error: FIBERMETRIC_SEED is not an integer: " << env
                  << '\n';
        return fm::kExitError;
      }
    }
    return fm::run_experiment(config_path, opts);
  }
  if (replay->parsed()) return fm::replay_run(run_dir, workers);
  return fm::emit_plotdata(run_dir);
}
