#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "opschwarz/fem.hpp"
#include "opschwarz/mesh.hpp"
#include "opschwarz/pod.hpp"
#include "opschwarz/schwarz.hpp"

namespace opschwarz {

enum class Problem { StaticBCs, TimeVaryingBCs, Custom };

const char* to_string(Problem p);
Problem problem_from_string(const std::string& name);

/// Experiment description read from a flat `key = value` file.
///
/// Recognized keys (defaults in brackets):
///   problem      static | time_varying | custom            [static]
///   nx, ny       cells per axis                             [50, 50]
///   x0 x1 y0 y1  domain bounds                              [-1 1 -1 1]
///   dt, T        time step and final time                   [0.01, 1]
///   layout       monolithic | vertical | horizontal | four_squares  [vertical]
///   overlap      shared cells between neighbours            [10]
///   models       comma list of fom/rom, one per subdomain or one for all  [fom]
///   r, data      basis size and training steps (incl. t=0)  [6, 30]
///   lambda       regularization weight                      [0.01]
///   centering    true | false                               [true]
///   rank_policy  strict | pad                               [strict]
///   delta_abs, delta_rel, max_sweeps                        [1e-10, 1e-10, 100]
///   repeats      timed repetitions of the online phase      [1]
///   out          output directory                           [out]
///   snapshots    monolithic snapshot CSV                    [<out>/monolithic.csv]
///   bc_left bc_right bc_top bc_bottom  custom problem only: number or q:MU
///   ic           custom problem only: constant initial value [0]
///
/// Lines starting with '#' and blank lines are ignored.
struct ExperimentConfig {
  Problem problem = Problem::StaticBCs;
  int nx = 50;
  int ny = 50;
  Rect bounds{};
  double dt = 0.01;
  double T = 1.0;
  DecompositionConfig decomposition{};
  std::vector<ModelKind> models{ModelKind::Fom};
  RomOptions rom{};
  SchwarzConfig schwarz{};
  int repeats = 1;
  std::string out = "out";
  std::string snapshots;
  BoundaryCondition custom_bc = BoundaryCondition::uniform(0.0);
  double ic = 0.0;

  /// Throws ConfigError on any inconsistent value.
  void validate() const;

  BoundaryCondition boundary_condition() const;
  Vector initial_condition(const StructuredGrid& grid) const;
  StructuredGrid grid() const { return build_grid(nx, ny, bounds); }
  bool has_rom() const;
  std::string snapshot_path() const;
  std::string assignment_string(char sep = ',') const;

  bool operator==(const ExperimentConfig&) const;
};

ExperimentConfig parse_config(const std::string& text);
std::string serialize_config(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one `key = value` assignment (also used for CLI overrides).
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

}  // namespace opschwarz
