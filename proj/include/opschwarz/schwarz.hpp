#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "opschwarz/fem.hpp"
#include "opschwarz/linalg.hpp"
#include "opschwarz/mesh.hpp"
#include "opschwarz/opinf.hpp"
#include "opschwarz/snapshots.hpp"

namespace opschwarz {

enum class ModelKind { Fom, Rom };

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct SchwarzConfig {
  double delta_abs = 1e-10;
  double delta_rel = 1e-10;
  int max_sweeps = 100;

  void validate() const;
};

/// Offline settings shared by every reduced subdomain.
struct RomOptions {
  int r = 6;
  int n_train = 30;  ///< training columns, counting the initial condition
  double lambda = 1e-2;
  bool centering = true;
  RankPolicy rank_policy = RankPolicy::Strict;
};

/// One subdomain's solver: a finite-element model or an inferred reduced
/// model, plus its current iterate.
///
/// `interior()` always holds the state in full interior coordinates (the
/// reconstruction for a reduced model), which is what neighbours sample and
/// what the convergence measures compare.
class SubdomainModel {
 public:
  static SubdomainModel full_order(const Subdomain& sub, double dt);
  static SubdomainModel reduced(const Subdomain& sub, ReducedModel model, double dt);

  ModelKind kind() const { return kind_; }
  const Subdomain& subdomain() const { return *sub_; }
  const NodeOrdering& ordering() const { return ordering_; }
  const FemOperators* fem_operators() const { return fem_.get(); }
  const ReducedModel* reduced_model() const { return rom_.get(); }

  /// Initial state from a full nodal vector on the parent grid: interior
  /// values (projected for a reduced model) and boundary values.
  void load(const Vector& parent_full);
  /// Sets the reduced coordinates directly (reduced models only).
  void set_reduced_state(const Vector& xhat);

  /// Replaces the current iterate by one backward-Euler step taken from
  /// `start` (model coordinates) and boundary values `start_boundary` at t_n,
  /// using the current boundary vector at t_{n+1}. Reduced models ignore
  /// `start_boundary`.
  void advance(const Vector& start, const Vector& start_boundary);

  const Vector& coordinates() const { return coords_; }
  const Vector& interior() const { return interior_; }
  const Vector& boundary() const { return boundary_; }
  Vector& boundary() { return boundary_; }

  /// Interior position k >= 0, or boundary position encoded as -(k + 1).
  /// Throws ConfigError for nodes outside the subdomain's ordering.
  int slot_of(int local_node) const;
  /// Current value at a local node, interior or boundary.
  double value_at(int local_node) const;

 private:
  SubdomainModel(const Subdomain& sub, ModelKind kind);

  const Subdomain* sub_;
  ModelKind kind_;
  NodeOrdering ordering_;
  std::vector<int> slot_;
  std::shared_ptr<const FemOperators> fem_;
  std::shared_ptr<const ImplicitEulerSolver> fom_stepper_;
  std::shared_ptr<const ReducedModel> rom_;
  std::shared_ptr<const ReducedStepper> rom_stepper_;
  Vector coords_;
  Vector interior_;
  Vector boundary_;
};

/// Values of `supplier`'s current iterate at the given parent-grid nodes.
/// Throws ConfigError if a node is not part of the supplier's mesh.
Vector sample_gamma(const SubdomainModel& supplier, const std::vector<int>& parent_nodes,
                    const StructuredGrid& parent);

/// Schwarz convergence measures for one sweep.
struct ConvergenceMeasures {
  double eps_abs = 0.0;
  double eps_rel = 0.0;
};

/// eps_abs = sqrt(sum_i ||u_i^k - u_i^{k-1}||^2),
/// eps_rel = sqrt(sum_i ||u_i^k - u_i^{k-1}||^2 / ||u_i^k||^2).
/// A subdomain with ||u_i^k|| < 1e-14 contributes its absolute term to eps_rel.
ConvergenceMeasures convergence_measures(const std::vector<Vector>& current,
                                         const std::vector<Vector>& previous);

struct StepReport {
  int sweeps = 0;
  std::vector<double> eps_abs;  ///< one entry per sweep
  std::vector<double> eps_rel;
  /// iterates[k][i]: interior of subdomain i after sweep k (k = 0 is the t_n
  /// state). Filled only when requested.
  std::vector<std::vector<Vector>> iterates;
};

/// Boundary wiring derived once per decomposition: where each entry of each
/// subdomain's boundary vector comes from.
struct TransmissionPlan {
  struct Source {
    int supplier = -1;
    int slot = 0;  ///< supplier slot (see SubdomainModel::slot_of)
  };
  std::vector<std::vector<int>> physical_parent_nodes;  ///< per subdomain
  std::vector<std::vector<Source>> gamma_sources;       ///< per subdomain, Schwarz part of y
};

TransmissionPlan build_transmission_plan(const std::vector<SubdomainModel>& models);

/// Advances every model from t_n to t_n + dt by multiplicative Schwarz
/// sweeps in ascending subdomain order, each sweep re-solving from the t_n
/// state with the newest neighbour data. Throws NonConvergenceError past
/// cfg.max_sweeps.
StepReport schwarz_time_step(std::vector<SubdomainModel>& models, const TransmissionPlan& plan,
                             const StructuredGrid& grid, double t_n, double dt,
                             const BoundaryCondition& bc, const SchwarzConfig& cfg,
                             bool keep_iterates = false);

/// Owner of each global node in the merged solution: -1 for the physical
/// boundary, else the subdomain whose interior holds the node and whose
/// centre is nearest (ties to the lower index).
struct MergePlan {
  std::vector<int> owner;
  std::vector<int> position;  ///< interior position inside the owner
};

MergePlan build_merge_plan(const StructuredGrid& grid, const std::vector<Subdomain>& subs);

Vector merge_solutions(const MergePlan& plan, const std::vector<SubdomainModel>& models,
                       const StructuredGrid& grid, const BoundaryCondition& bc, double t);

struct CoupledRun {
  Matrix merged;  ///< num_nodes x tau full nodal states
  std::vector<double> times;
  std::vector<int> sweeps;  ///< per time step (tau - 1 entries)
  std::vector<double> eps_abs;
  std::vector<double> eps_rel;
  double online_seconds = 0.0;
  std::vector<double> projection_errors;  ///< per reduced subdomain
  Layout layout = Layout::Monolithic;
  int overlap = 0;
  std::vector<ModelKind> assignment;

  double average_sweeps() const;
};

/// Offline part of a coupled run (decomposition, assembly, factorization,
/// reduced-model training) kept separate so `run` times only the online loop.
class CoupledSimulation {
 public:
  /// `training` must be the monolithic snapshot set on `grid` whenever
  /// `assignment` contains a reduced model.
  CoupledSimulation(const StructuredGrid& grid, const DecompositionConfig& decomposition,
                    std::vector<ModelKind> assignment, SchwarzConfig cfg, BoundaryCondition bc,
                    Vector ic_full, double dt, double T, const SnapshotSet* training = nullptr,
                    RomOptions rom = {});

  CoupledSimulation(const CoupledSimulation&) = delete;
  CoupledSimulation& operator=(const CoupledSimulation&) = delete;
  CoupledSimulation(CoupledSimulation&&) = default;
  CoupledSimulation& operator=(CoupledSimulation&&) = default;

  /// Resets every model to the initial condition and runs all time steps.
  CoupledRun run();

  const std::vector<Subdomain>& subdomains() const { return subs_; }
  const std::vector<SubdomainModel>& models() const { return models_; }
  const MergePlan& merge_plan() const { return merge_; }
  const std::vector<double>& projection_errors() const { return projection_errors_; }

 private:
  void reset();

  const StructuredGrid* grid_;
  DecompositionConfig decomposition_;
  std::vector<ModelKind> assignment_;
  SchwarzConfig cfg_;
  BoundaryCondition bc_;
  Vector ic_;
  double dt_;
  int steps_;
  std::vector<Subdomain> subs_;
  std::vector<SubdomainModel> models_;
  TransmissionPlan transmission_;
  MergePlan merge_;
  std::vector<double> projection_errors_;
};

/// Trains the reduced model of one subdomain from monolithic snapshots:
/// POD of the local interior states, then operator inference with inputs
/// [g_i ; gamma_i] read at the subdomain's boundary parent nodes.
ReducedModel train_reduced_model(const Subdomain& sub, const StructuredGrid& grid,
                                 const SnapshotSet& mono, double dt, const RomOptions& opts,
                                 double* projection_error_out = nullptr);

/// Local interior states (N_i x tau) of a subdomain cut from monolithic snapshots.
Matrix restrict_states(const Subdomain& sub, const NodeOrdering& ordering,
                       const SnapshotSet& mono);

CoupledRun run_coupled(const StructuredGrid& grid, const DecompositionConfig& decomposition,
                       std::vector<ModelKind> assignment, const SchwarzConfig& cfg,
                       const BoundaryCondition& bc, const Vector& ic_full, double dt, double T,
                       const SnapshotSet* training = nullptr, const RomOptions& rom = {});

}  // namespace opschwarz
