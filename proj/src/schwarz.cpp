#include "opschwarz/schwarz.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "opschwarz/errors.hpp"

namespace opschwarz {

const char* to_string(ModelKind kind) { return kind == ModelKind::Fom ? "fom" : "rom"; }

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "fom" || name == "fe") return ModelKind::Fom;
  if (name == "rom" || name == "opinf") return ModelKind::Rom;
  throw ConfigError("unknown model kind '" + name + "' (expected fom or rom)");
}

void SchwarzConfig::validate() const {
  if (!(delta_abs > 0.0) || !(delta_rel > 0.0))
    throw ConfigError("Schwarz tolerances must be positive");
  if (max_sweeps < 1) throw ConfigError("max_sweeps must be at least 1");
}

// ---------------------------------------------------------------------------
// SubdomainModel

SubdomainModel::SubdomainModel(const Subdomain& sub, ModelKind kind)
    : sub_(&sub), kind_(kind), ordering_(node_ordering(sub.partition)) {
  slot_.assign(sub.local_grid.num_nodes(), std::numeric_limits<int>::min());
  for (int k = 0; k < ordering_.n_interior(); ++k) slot_[ordering_.interior_map[k]] = k;
  for (int k = 0; k < ordering_.n_boundary(); ++k) slot_[ordering_.boundary_map[k]] = -(k + 1);
  interior_ = Vector::Zero(ordering_.n_interior());
  boundary_ = Vector::Zero(ordering_.n_boundary());
}

SubdomainModel SubdomainModel::full_order(const Subdomain& sub, double dt) {
  SubdomainModel m(sub, ModelKind::Fom);
  auto ops = std::make_shared<FemOperators>(assemble(sub.local_grid, sub.partition));
  m.fom_stepper_ = std::make_shared<ImplicitEulerSolver>(*ops, dt);
  m.fem_ = std::move(ops);
  m.coords_ = Vector::Zero(m.ordering_.n_interior());
  return m;
}

SubdomainModel SubdomainModel::reduced(const Subdomain& sub, ReducedModel model, double dt) {
  SubdomainModel m(sub, ModelKind::Rom);
  if (model.boundary_map != m.ordering_.boundary_map)
    throw ConfigError("reduced model boundary ordering differs from subdomain " +
                      std::to_string(sub.id));
  if (model.basis.size() != m.ordering_.n_interior())
    throw ConfigError("reduced model basis size differs from subdomain " +
                      std::to_string(sub.id) + " interior");
  auto rom = std::make_shared<ReducedModel>(std::move(model));
  m.rom_stepper_ = std::make_shared<ReducedStepper>(*rom, dt);
  m.rom_ = std::move(rom);
  m.coords_ = Vector::Zero(m.rom_->rank());
  m.interior_ = m.rom_->reconstruct(m.coords_);
  return m;
}

void SubdomainModel::load(const Vector& parent_full) {
  Vector x(ordering_.n_interior());
  for (int k = 0; k < ordering_.n_interior(); ++k)
    x[k] = parent_full[sub_->parent_of[ordering_.interior_map[k]]];
  for (int k = 0; k < ordering_.n_boundary(); ++k)
    boundary_[k] = parent_full[sub_->parent_of[ordering_.boundary_map[k]]];
  if (kind_ == ModelKind::Fom) {
    coords_ = x;
    interior_ = std::move(x);
  } else {
    set_reduced_state(rom_->project(x));
  }
}

void SubdomainModel::set_reduced_state(const Vector& xhat) {
  if (kind_ != ModelKind::Rom) throw ConfigError("reduced state on a full-order subdomain");
  coords_ = xhat;
  interior_ = rom_->reconstruct(coords_);
}

void SubdomainModel::advance(const Vector& start, const Vector& start_boundary) {
  if (kind_ == ModelKind::Fom) {
    coords_ = fom_stepper_->step(start, start_boundary, boundary_);
    interior_ = coords_;
  } else {
    coords_ = rom_stepper_->step(start, boundary_);
    interior_.noalias() = rom_->basis.modes * coords_;
    interior_ += rom_->basis.mean;
  }
}

int SubdomainModel::slot_of(int local_node) const {
  if (local_node < 0 || local_node >= static_cast<int>(slot_.size()) ||
      slot_[local_node] == std::numeric_limits<int>::min())
    throw ConfigError("node " + std::to_string(local_node) + " is not part of subdomain " +
                      std::to_string(sub_->id));
  return slot_[local_node];
}

double SubdomainModel::value_at(int local_node) const {
  const int s = slot_of(local_node);
  return s >= 0 ? interior_[s] : boundary_[-s - 1];
}

Vector sample_gamma(const SubdomainModel& supplier, const std::vector<int>& parent_nodes,
                    const StructuredGrid& parent) {
  Vector v(parent_nodes.size());
  for (std::size_t k = 0; k < parent_nodes.size(); ++k) {
    const int local = supplier.subdomain().local_of(parent_nodes[k], parent);
    if (local < 0)
      throw ConfigError("interface node " + std::to_string(parent_nodes[k]) +
                        " is not on the mesh of subdomain " +
                        std::to_string(supplier.subdomain().id) + " (non-conformal input)");
    v[k] = supplier.value_at(local);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Sweeps

ConvergenceMeasures convergence_measures(const std::vector<Vector>& current,
                                         const std::vector<Vector>& previous) {
  if (current.size() != previous.size())
    throw std::logic_error("convergence measures need matching iterate lists");
  double abs_sum = 0.0;
  double rel_sum = 0.0;
  for (std::size_t i = 0; i < current.size(); ++i) {
    if (current[i].size() != previous[i].size())
      throw std::logic_error("convergence measures need matching iterate sizes");
    double diff = 0.0;
    double norm = 0.0;
    for (Eigen::Index k = 0; k < current[i].size(); ++k) {
      const double d = current[i][k] - previous[i][k];
      diff += d * d;
      norm += current[i][k] * current[i][k];
    }
    abs_sum += diff;
    rel_sum += std::sqrt(norm) < 1e-14 ? diff : diff / norm;
  }
  return {std::sqrt(abs_sum), std::sqrt(rel_sum)};
}

TransmissionPlan build_transmission_plan(const std::vector<SubdomainModel>& models) {
  TransmissionPlan plan;
  plan.physical_parent_nodes.resize(models.size());
  plan.gamma_sources.resize(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) {
    const Subdomain& sub = models[i].subdomain();
    for (int node : sub.partition.physical_bnd)
      plan.physical_parent_nodes[i].push_back(sub.parent_of[node]);
    for (const auto& edge : sub.partition.schwarz_bnd) {
      if (edge.neighbor < 0 || edge.neighbor >= static_cast<int>(models.size()))
        throw ConfigError("Schwarz edge without a valid neighbour");
      const SubdomainModel& supplier = models[edge.neighbor];
      const Subdomain& nb = supplier.subdomain();
      for (int node : edge.nodes) {
        // Both subdomains are windows of one parent grid, so the parent
        // index translates directly into the neighbour's window.
        const int parent = sub.parent_of[node];
        const int pi = sub.cells.ix_lo + sub.local_grid.column_of(node);
        const int pj = sub.cells.iy_lo + sub.local_grid.row_of(node);
        const int li = pi - nb.cells.ix_lo;
        const int lj = pj - nb.cells.iy_lo;
        if (li < 0 || li > nb.cells.width() || lj < 0 || lj > nb.cells.height())
          throw ConfigError("interface node " + std::to_string(parent) +
                            " is not on the mesh of subdomain " + std::to_string(nb.id) +
                            " (non-conformal input)");
        plan.gamma_sources[i].push_back(
            {edge.neighbor, supplier.slot_of(nb.local_grid.node_index(li, lj))});
      }
    }
  }
  return plan;
}

namespace {

void refresh_boundary(std::vector<SubdomainModel>& models, const TransmissionPlan& plan,
                      std::size_t i, const Vector& physical) {
  Vector& y = models[i].boundary();
  const auto n_phys = physical.size();
  y.head(n_phys) = physical;
  const auto& sources = plan.gamma_sources[i];
  for (std::size_t k = 0; k < sources.size(); ++k) {
    const SubdomainModel& s = models[sources[k].supplier];
    const int slot = sources[k].slot;
    y[n_phys + k] = slot >= 0 ? s.interior()[slot] : s.boundary()[-slot - 1];
  }
}

}  // namespace

StepReport schwarz_time_step(std::vector<SubdomainModel>& models, const TransmissionPlan& plan,
                             const StructuredGrid& grid, double t_n, double dt,
                             const BoundaryCondition& bc, const SchwarzConfig& cfg,
                             bool keep_iterates) {
  const std::size_t n = models.size();
  const double t_next = t_n + dt;

  std::vector<Vector> start(n);
  std::vector<Vector> start_boundary(n);
  std::vector<Vector> previous(n);
  std::vector<Vector> physical(n);
  // boundary data at t_n: Dirichlet values plus the neighbours' converged states
  for (std::size_t i = 0; i < n; ++i)
    refresh_boundary(models, plan, i, bc.values(grid, plan.physical_parent_nodes[i], t_n));
  for (std::size_t i = 0; i < n; ++i) {
    start[i] = models[i].coordinates();
    start_boundary[i] = models[i].boundary();
    previous[i] = models[i].interior();
    physical[i] = bc.values(grid, plan.physical_parent_nodes[i], t_next);
  }

  StepReport report;
  if (keep_iterates) report.iterates.push_back(previous);
  std::vector<Vector> current(n);
  for (int k = 1; k <= cfg.max_sweeps; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      refresh_boundary(models, plan, i, physical[i]);
      models[i].advance(start[i], start_boundary[i]);
    }
    for (std::size_t i = 0; i < n; ++i) current[i] = models[i].interior();
    const auto eps = convergence_measures(current, previous);
    report.sweeps = k;
    report.eps_abs.push_back(eps.eps_abs);
    report.eps_rel.push_back(eps.eps_rel);
    if (keep_iterates) report.iterates.push_back(current);
    if (!std::isfinite(eps.eps_abs) || !std::isfinite(eps.eps_rel)) {
      std::ostringstream msg;
      msg << "Schwarz iteration diverged at t = " << t_next << " (sweep " << k << ")";
      throw NonConvergenceError(msg.str(), report.eps_abs, report.eps_rel);
    }
    if (eps.eps_abs < cfg.delta_abs && eps.eps_rel < cfg.delta_rel) return report;
    std::swap(previous, current);
  }
  std::ostringstream msg;
  msg << "Schwarz iteration did not converge within " << cfg.max_sweeps << " sweeps at t = "
      << t_next << " (eps_abs " << report.eps_abs.back() << ", eps_rel "
      << report.eps_rel.back() << ")";
  throw NonConvergenceError(msg.str(), report.eps_abs, report.eps_rel);
}

// ---------------------------------------------------------------------------
// Merge

MergePlan build_merge_plan(const StructuredGrid& grid, const std::vector<Subdomain>& subs) {
  MergePlan plan;
  plan.owner.assign(grid.num_nodes(), -2);
  plan.position.assign(grid.num_nodes(), -1);
  std::vector<double> best(grid.num_nodes(), INFINITY);
  const Rect b = grid.bounds();
  const double tie = 1e-12 * std::hypot(b.x1 - b.x0, b.y1 - b.y0);

  for (int n = 0; n < grid.num_nodes(); ++n)
    if (grid.on_boundary(n)) plan.owner[n] = -1;

  for (const auto& sub : subs) {
    const NodeOrdering ord = node_ordering(sub.partition);
    for (int k = 0; k < ord.n_interior(); ++k) {
      const int parent = sub.parent_of[ord.interior_map[k]];
      const Point& p = grid.nodes()[parent];
      const double dist = std::hypot(p.x - sub.center.x, p.y - sub.center.y);
      // subdomains are visited in ascending order, so ties keep the lower index
      if (dist < best[parent] - tie) {
        best[parent] = dist;
        plan.owner[parent] = sub.id;
        plan.position[parent] = k;
      }
    }
  }
  for (int n = 0; n < grid.num_nodes(); ++n)
    if (plan.owner[n] == -2)
      throw std::logic_error("merge plan leaves node " + std::to_string(n) + " unassigned");
  return plan;
}

Vector merge_solutions(const MergePlan& plan, const std::vector<SubdomainModel>& models,
                       const StructuredGrid& grid, const BoundaryCondition& bc, double t) {
  Vector u(grid.num_nodes());
  for (int n = 0; n < grid.num_nodes(); ++n) {
    const int owner = plan.owner[n];
    if (owner < 0) {
      u[n] = bc.value(*grid.side_of(n), t);
    } else {
      u[n] = models[owner].interior()[plan.position[n]];
    }
  }
  return u;
}

// ---------------------------------------------------------------------------
// Training and driver

Matrix restrict_states(const Subdomain& sub, const NodeOrdering& ordering,
                       const SnapshotSet& mono) {
  std::vector<int> row_of(mono.num_nodes, -1);
  for (std::size_t k = 0; k < mono.interior_map.size(); ++k) row_of[mono.interior_map[k]] = k;
  Matrix x(ordering.n_interior(), mono.num_snapshots());
  for (int k = 0; k < ordering.n_interior(); ++k) {
    const int row = row_of.at(sub.parent_of[ordering.interior_map[k]]);
    if (row < 0) throw ConfigError("subdomain interior node lies on the monolithic boundary");
    x.row(k) = mono.states.row(row);
  }
  return x;
}

ReducedModel train_reduced_model(const Subdomain& sub, const StructuredGrid& grid,
                                 const SnapshotSet& mono, double dt, const RomOptions& opts,
                                 double* projection_error_out) {
  if (mono.num_nodes != grid.num_nodes())
    throw ConfigError("training snapshots were produced on a different grid (" +
                      std::to_string(mono.num_nodes) + " nodes, expected " +
                      std::to_string(grid.num_nodes()) + ")");
  if (mono.num_snapshots() >= 2 && std::abs(mono.times[1] - mono.times[0] - dt) > 1e-9 * dt)
    throw ConfigError("training snapshots use a different time step");
  if (opts.n_train > mono.num_snapshots())
    throw ConfigError("requested " + std::to_string(opts.n_train) +
                      " training steps but only " + std::to_string(mono.num_snapshots()) +
                      " snapshots are available");

  const NodeOrdering ord = node_ordering(sub.partition);
  const Matrix states = restrict_states(sub, ord, mono);

  std::vector<int> interior_row(mono.num_nodes, -1);
  std::vector<int> boundary_row(mono.num_nodes, -1);
  for (std::size_t k = 0; k < mono.interior_map.size(); ++k)
    interior_row[mono.interior_map[k]] = k;
  for (std::size_t k = 0; k < mono.boundary_map.size(); ++k)
    boundary_row[mono.boundary_map[k]] = k;

  // y_i(t_p) = [g_i ; gamma_i(t_p)], gamma read from the monolithic state
  Matrix inputs(ord.n_boundary(), mono.num_snapshots());
  for (int k = 0; k < ord.n_boundary(); ++k) {
    const int parent = sub.parent_of[ord.boundary_map[k]];
    if (boundary_row[parent] >= 0)
      inputs.row(k) = mono.boundary_history.row(boundary_row[parent]);
    else
      inputs.row(k) = mono.states.row(interior_row[parent]);
  }

  PodBasis basis = pod_basis(states, opts.r, opts.centering, opts.n_train, opts.rank_policy);
  if (projection_error_out) *projection_error_out = projection_error(states, basis);
  const TrainingData data = make_training_data(basis, states, inputs, opts.n_train, dt);
  ReducedOperators ops = infer_operators(data, opts.lambda);

  ReducedModel model;
  model.basis = std::move(basis);
  model.K = std::move(ops.K);
  model.B = std::move(ops.B);
  model.boundary_map = ord.boundary_map;
  model.lambda = opts.lambda;
  return model;
}

double CoupledRun::average_sweeps() const {
  if (sweeps.empty()) return 0.0;
  return std::accumulate(sweeps.begin(), sweeps.end(), 0.0) / static_cast<double>(sweeps.size());
}

CoupledSimulation::CoupledSimulation(const StructuredGrid& grid,
                                     const DecompositionConfig& decomposition,
                                     std::vector<ModelKind> assignment, SchwarzConfig cfg,
                                     BoundaryCondition bc, Vector ic_full, double dt, double T,
                                     const SnapshotSet* training, RomOptions rom)
    : grid_(&grid),
      decomposition_(decomposition),
      assignment_(std::move(assignment)),
      cfg_(cfg),
      bc_(std::move(bc)),
      ic_(std::move(ic_full)),
      dt_(dt),
      steps_(step_count(dt, T)) {
  cfg_.validate();
  if (ic_.size() != grid.num_nodes())
    throw ConfigError("initial condition must have one value per grid node");
  subs_ = decompose(grid, decomposition_);
  if (assignment_.size() == 1 && subs_.size() > 1) assignment_.resize(subs_.size(), assignment_[0]);
  if (assignment_.size() != subs_.size())
    throw ConfigError("model assignment lists " + std::to_string(assignment_.size()) +
                      " subdomains but the layout has " + std::to_string(subs_.size()));

  models_.reserve(subs_.size());
  for (std::size_t i = 0; i < subs_.size(); ++i) {
    if (assignment_[i] == ModelKind::Fom) {
      models_.push_back(SubdomainModel::full_order(subs_[i], dt_));
    } else {
      if (!training)
        throw ConfigError("subdomain " + std::to_string(i + 1) +
                          " is reduced but no monolithic training snapshots were supplied");
      double err = 0.0;
      ReducedModel model = train_reduced_model(subs_[i], grid, *training, dt_, rom, &err);
      projection_errors_.push_back(err);
      models_.push_back(SubdomainModel::reduced(subs_[i], std::move(model), dt_));
    }
  }
  transmission_ = build_transmission_plan(models_);
  merge_ = build_merge_plan(grid, subs_);
}

void CoupledSimulation::reset() {
  // Dirichlet data is imposed at t = 0 as well; the initial field only
  // supplies interior and interface values.
  Vector start = ic_;
  for (int n = 0; n < grid_->num_nodes(); ++n)
    if (grid_->on_boundary(n)) start[n] = bc_.value(*grid_->side_of(n), 0.0);
  for (auto& m : models_) m.load(start);
}

CoupledRun CoupledSimulation::run() {
  reset();
  CoupledRun out;
  out.layout = decomposition_.layout;
  out.overlap = decomposition_.layout == Layout::Monolithic ? 0 : decomposition_.overlap;
  out.assignment = assignment_;
  out.projection_errors = projection_errors_;
  out.merged.resize(grid_->num_nodes(), steps_ + 1);
  out.times.resize(steps_ + 1);
  out.sweeps.reserve(steps_);
  out.eps_abs.reserve(steps_);
  out.eps_rel.reserve(steps_);

  out.times[0] = 0.0;
  out.merged.col(0) = merge_solutions(merge_, models_, *grid_, bc_, 0.0);

  const auto start = std::chrono::steady_clock::now();
  for (int p = 1; p <= steps_; ++p) {
    const double t_n = (p - 1) * dt_;
    const double t = p * dt_;
    StepReport rep = schwarz_time_step(models_, transmission_, *grid_, t_n, dt_, bc_, cfg_);
    out.sweeps.push_back(rep.sweeps);
    out.eps_abs.push_back(rep.eps_abs.back());
    out.eps_rel.push_back(rep.eps_rel.back());
    out.times[p] = t;
    out.merged.col(p) = merge_solutions(merge_, models_, *grid_, bc_, t);
  }
  out.online_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

CoupledRun run_coupled(const StructuredGrid& grid, const DecompositionConfig& decomposition,
                       std::vector<ModelKind> assignment, const SchwarzConfig& cfg,
                       const BoundaryCondition& bc, const Vector& ic_full, double dt, double T,
                       const SnapshotSet* training, const RomOptions& rom) {
  CoupledSimulation sim(grid, decomposition, std::move(assignment), cfg, bc, ic_full, dt, T,
                        training, rom);
  return sim.run();
}

}  // namespace opschwarz
