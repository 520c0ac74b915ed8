#include "opschwarz/experiment.hpp"

#include "opschwarz/errors.hpp"
#include "opschwarz/io.hpp"

namespace opschwarz {

MonolithicOutcome run_monolithic(const ExperimentConfig& cfg) {
  cfg.validate();
  const StructuredGrid grid = cfg.grid();
  const MonolithicSolver solver(grid, cfg.boundary_condition(), cfg.dt);
  const Vector ic = cfg.initial_condition(grid);
  MonolithicOutcome out;
  double total = 0.0;
  for (int k = 0; k < cfg.repeats; ++k) {
    double seconds = 0.0;
    out.snapshots = solver.solve(ic, cfg.T, &seconds);
    total += seconds;
  }
  out.online_seconds = total / cfg.repeats;
  return out;
}

SnapshotSet load_monolithic(const ExperimentConfig& cfg) {
  const std::string path = cfg.snapshot_path();
  if (!fs::exists(path))
    throw IoError("monolithic snapshots not found at " + path +
                  "; run the 'monolithic' command with the same config first");
  SnapshotTable table = read_snapshot_csv(path);
  return SnapshotSet::from_full(cfg.grid(), table.values, std::move(table.times));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const SnapshotSet& mono) {
  cfg.validate();
  const StructuredGrid grid = cfg.grid();
  if (mono.num_nodes != grid.num_nodes())
    throw ConfigError("reference snapshots do not match the configured grid");

  CoupledSimulation sim(grid, cfg.decomposition, cfg.models, cfg.schwarz,
                        cfg.boundary_condition(), cfg.initial_condition(grid), cfg.dt, cfg.T,
                        &mono, cfg.rom);
  ExperimentResult res;
  double total = 0.0;
  for (int k = 0; k < cfg.repeats; ++k) {
    res.run = sim.run();
    total += res.run.online_seconds;
  }
  if (res.run.merged.cols() != mono.num_snapshots())
    throw ConfigError("reference snapshots cover a different time range");

  for (const SubdomainModel& m : sim.models())
    if (const ReducedModel* rom = m.reduced_model()) res.reduced.emplace_back(m.subdomain().id, *rom);

  res.errors = relative_error_series(mono.full_states(), res.run.merged);

  RunStats& s = res.stats;
  s.layout = to_string(cfg.decomposition.layout);
  s.model_assignment = cfg.assignment_string('+');
  s.overlap = res.run.overlap;
  s.r = cfg.has_rom() ? cfg.rom.r : 0;
  s.data = cfg.has_rom() ? cfg.rom.n_train : 0;
  s.lambda = cfg.has_rom() ? cfg.rom.lambda : 0.0;
  s.e_avg = res.errors.e_avg;
  s.e_max = res.errors.e_max;
  s.e_proj_avg = res.run.projection_errors.empty()
                     ? 0.0
                     : average_projection_error(res.run.projection_errors);
  s.avg_sweeps = res.run.average_sweeps();
  s.online_seconds = total / cfg.repeats;
  return res;
}

}  // namespace opschwarz
