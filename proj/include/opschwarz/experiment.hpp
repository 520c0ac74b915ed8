#pragma once

#include <utility>
#include <vector>

#include "opschwarz/config.hpp"
#include "opschwarz/metrics.hpp"
#include "opschwarz/schwarz.hpp"
#include "opschwarz/snapshots.hpp"

namespace opschwarz {

struct MonolithicOutcome {
  SnapshotSet snapshots;
  double online_seconds = 0.0;  ///< mean over cfg.repeats solves
};

/// Whole-domain finite-element reference for `cfg`.
MonolithicOutcome run_monolithic(const ExperimentConfig& cfg);

/// Reads the snapshot CSV written by run_monolithic / the `monolithic` command.
SnapshotSet load_monolithic(const ExperimentConfig& cfg);

struct ExperimentResult {
  RunStats stats;
  CoupledRun run;
  ErrorSeries errors;
  std::vector<std::pair<int, ReducedModel>> reduced;  ///< (subdomain id, model) per ROM subdomain
};

/// Coupled run described by `cfg`, scored against `mono`. The online phase
/// is repeated cfg.repeats times and its wall time averaged.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const SnapshotSet& mono);

}  // namespace opschwarz
