// Experiment orchestration: run a named experiment from a strict JSON config,
// persist CSV/JSON/FLD1 outputs plus a checksummed manifest, replay a run
// directory bit-exactly, and emit plain-text plot data.

#pragma once

#include <optional>
#include <string>

namespace fm {

// exit statuses shared by the CLI
inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFail = 2;

struct RunOptions {
  int workers = 1;
  std::optional<std::string> out_override;         // --out
  std::optional<std::uint64_t> seed_override;      // FIBERMETRIC_SEED
};

// executes the experiment named in the config; returns kExitPass on a pass
// verdict, kExitFail on a fail verdict, kExitError on any error
int run_experiment(const std::string& config_path, const RunOptions& opts);

// re-executes from the run directory's config and verifies every emitted
// file matches the manifest checksums bit-exactly
int replay_run(const std::string& run_dir, int workers = 1);

// converts FLD1 fields to xyz triples and CSV tables to log-log series
int emit_plotdata(const std::string& run_dir);

}  // namespace fm
