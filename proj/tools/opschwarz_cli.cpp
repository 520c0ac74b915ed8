// Experiment harness: monolithic reference, coupled runs, parameter sweeps
// and heatmap rendering.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opschwarz/config.hpp"
#include "opschwarz/errors.hpp"
#include "opschwarz/experiment.hpp"
#include "opschwarz/io.hpp"

namespace fs = std::filesystem;
using namespace opschwarz;

namespace {

enum Exit { kOk = 0, kConfig = 1, kNumerical = 2, kIo = 3 };

struct CommonArgs {
  std::string config;
  std::string out;
  int repeats = 0;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config, "key = value experiment file");
  cmd->add_option("--out", a.out, "output directory (overrides 'out')");
  cmd->add_option("--repeats", a.repeats, "timed repetitions of the online phase")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--set", a.overrides, "extra KEY=VALUE assignment, repeatable");
}

ExperimentConfig resolve(const CommonArgs& a) {
  ExperimentConfig cfg = a.config.empty() ? ExperimentConfig{} : load_config(a.config);
  for (const std::string& kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
    set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!a.out.empty()) cfg.out = a.out;
  if (a.repeats > 0) cfg.repeats = a.repeats;
  cfg.validate();
  return cfg;
}

int cmd_monolithic(const ExperimentConfig& cfg) {
  const MonolithicOutcome mono = run_monolithic(cfg);
  const SnapshotSet& s = mono.snapshots;
  write_snapshot_csv(cfg.snapshot_path(), s.full_states(), s.times);
  write_snapshot_csv(fs::path(cfg.out) / "boundary_history.csv", s.boundary_history, s.times);
  write_file(fs::path(cfg.out) / "config.txt", serialize_config(cfg));
  std::printf("monolithic: %d nodes, %d snapshots, online %.6g s (mean of %d)\n", s.num_nodes,
              s.num_snapshots(), mono.online_seconds, cfg.repeats);
  std::printf("wrote %s\n", cfg.snapshot_path().c_str());
  return kOk;
}

std::string run_label(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << to_string(cfg.decomposition.layout) << '_' << cfg.assignment_string('-') << "_o"
     << cfg.decomposition.overlap;
  if (cfg.has_rom()) os << "_r" << cfg.rom.r << "_d" << cfg.rom.n_train;
  return os.str();
}

int cmd_run(const ExperimentConfig& cfg) {
  const SnapshotSet mono = load_monolithic(cfg);
  const ExperimentResult res = run_experiment(cfg, mono);
  const fs::path out(cfg.out);
  const std::string label = run_label(cfg);
  write_snapshot_csv(out / (label + "_merged.csv"), res.run.merged, res.run.times);
  write_step_csv(out / (label + "_steps.csv"), res.run);
  for (const auto& [id, model] : res.reduced) {
    const fs::path stem = out / (label + "_sub" + std::to_string(id));
    write_basis_csv(stem, model.basis);
    write_operators_csv(stem, model);
  }
  append_stats_row(out / "stats.csv", res.stats);
  std::printf("%s\n%s\n", stats_csv_header().c_str(), to_csv_row(res.stats).c_str());
  return kOk;
}

std::string axis_key(const std::string& axis) {
  if (axis == "data" || axis == "overlap") return axis;
  if (axis == "rank") return "r";
  throw ConfigError("unknown sweep axis '" + axis + "' (expected data, overlap or rank)");
}

int cmd_sweep(const ExperimentConfig& base, const std::string& axis,
              const std::vector<std::string>& values) {
  const std::string key = axis_key(axis);
  if (values.empty()) throw ConfigError("--values needs at least one entry");
  std::vector<ExperimentConfig> points;
  for (const std::string& v : values) {
    ExperimentConfig cfg = base;
    set_config_value(cfg, key, v);
    points.push_back(cfg);
  }

  const SnapshotSet mono = load_monolithic(base);
  const fs::path out(base.out);
  const fs::path sweep_csv = out / ("sweep_" + axis + ".csv");
  const fs::path pareto_csv = out / "pareto.csv";
  const bool pareto_new = !fs::exists(pareto_csv) || fs::file_size(pareto_csv) == 0;
  std::string pareto = pareto_new ? "label,online_seconds,e_avg\n" : "";

  fs::remove(sweep_csv);
  int failures = 0;
  std::printf("%s\n", stats_csv_header().c_str());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const ExperimentConfig& cfg = points[k];
    RunStats stats;
    try {
      cfg.validate();
      stats = run_experiment(cfg, mono).stats;
      std::ostringstream row;
      row.precision(9);
      row << run_label(cfg) << ',' << stats.online_seconds << ',' << stats.e_avg << '\n';
      pareto += row.str();
    } catch (const std::exception& e) {
      ++failures;
      stats.layout = to_string(cfg.decomposition.layout);
      stats.model_assignment = cfg.assignment_string('+');
      stats.overlap = cfg.decomposition.overlap;
      stats.r = cfg.rom.r;
      stats.data = cfg.rom.n_train;
      stats.lambda = cfg.rom.lambda;
      stats.error = e.what();
    }
    append_stats_row(sweep_csv, stats);
    std::printf("%s\n", to_csv_row(stats).c_str());
  }

  std::ofstream(pareto_csv, std::ios::app) << pareto;
  std::printf("wrote %s\n", sweep_csv.string().c_str());
  if (failures > 0) {
    std::fprintf(stderr, "%d of %zu sweep points failed\n", failures, points.size());
    return kNumerical;
  }
  return kOk;
}

int cmd_render(const ExperimentConfig& cfg, const std::string& input, double t, int scale,
               const std::string& image) {
  const fs::path in = input.empty() ? fs::path(cfg.snapshot_path()) : fs::path(input);
  if (!fs::exists(in)) throw IoError("snapshot file not found: " + in.string());
  const SnapshotTable table = read_snapshot_csv(in);

  int col = -1;
  for (std::size_t p = 0; p < table.times.size(); ++p)
    if (std::abs(table.times[p] - t) <= 1e-9 * std::max(1.0, std::abs(t))) col = static_cast<int>(p);
  if (col < 0) {
    std::ostringstream os;
    os << "time " << t << " not found in " << in.string() << "; available times:";
    for (double s : table.times) os << ' ' << s;
    throw ConfigError(os.str());
  }

  const std::string bytes = render_pgm(table.values.col(col), cfg.nx, cfg.ny, scale);
  fs::path target = image;
  if (target.empty()) {
    std::ostringstream name;
    name << in.stem().string() << "_t" << table.times[col] << ".pgm";
    target = fs::path(cfg.out) / name.str();
  }
  write_file(target, bytes);
  std::printf("wrote %s\n", target.string().c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schwarz coupling of finite-element and operator-inference heat models"};
  app.require_subcommand(1);

  CommonArgs mono_args, run_args, sweep_args, render_args;
  auto* mono_cmd = app.add_subcommand("monolithic", "whole-domain reference solve");
  add_common(mono_cmd, mono_args);

  auto* run_cmd = app.add_subcommand("run", "one coupled run scored against the reference");
  add_common(run_cmd, run_args);

  std::string axis;
  std::vector<std::string> values;
  auto* sweep_cmd = app.add_subcommand("sweep", "coupled runs over one parameter");
  add_common(sweep_cmd, sweep_args);
  sweep_cmd->add_option("--axis", axis, "data, overlap or rank")->required();
  sweep_cmd->add_option("--values", values, "comma separated values")
      ->required()
      ->delimiter(',');

  std::string input, image;
  double time = 0.0;
  int scale = 4;
  auto* render_cmd = app.add_subcommand("render", "greyscale PGM heatmap of one snapshot");
  add_common(render_cmd, render_args);
  render_cmd->add_option("--input", input, "snapshot CSV (default: the monolithic snapshots)");
  render_cmd->add_option("--time", time, "time stamp to render")->required();
  render_cmd->add_option("--scale", scale, "pixels per node")->check(CLI::PositiveNumber);
  render_cmd->add_option("--image", image, "output file (default: <out>/<input>_t<T>.pgm)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*mono_cmd) return cmd_monolithic(resolve(mono_args));
    if (*run_cmd) return cmd_run(resolve(run_args));
    if (*sweep_cmd) return cmd_sweep(resolve(sweep_args), axis, values);
    if (*render_cmd) return cmd_render(resolve(render_args), input, time, scale, image);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const NonConvergenceError& e) {
    std::fprintf(stderr, "no convergence: %s\n", e.what());
    return kNumerical;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumerical;
  }
  return kOk;
}
