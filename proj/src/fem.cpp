#include "opschwarz/fem.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "opschwarz/errors.hpp"

namespace opschwarz {

namespace {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

}  // namespace

ElementMatrix element_stiffness(const Point& a, const Point& b, const Point& c) {
  const double area = signed_area(a, b, c);
  if (!(std::abs(area) > 0.0)) throw NumericalError("degenerate triangle in assembly");
  // Gradient of the hat function at vertex k is (dy_k, dx_k) / (2 area).
  const std::array<double, 3> dy = {b.y - c.y, c.y - a.y, a.y - b.y};
  const std::array<double, 3> dx = {c.x - b.x, a.x - c.x, b.x - a.x};
  const double scale = 1.0 / (4.0 * std::abs(area));
  ElementMatrix k{};
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) k[r][s] = scale * (dy[r] * dy[s] + dx[r] * dx[s]);
  return k;
}

ElementMatrix element_mass(const Point& a, const Point& b, const Point& c) {
  const double area = std::abs(signed_area(a, b, c));
  if (!(area > 0.0)) throw NumericalError("degenerate triangle in assembly");
  ElementMatrix m{};
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) m[r][s] = area / 12.0 * (r == s ? 2.0 : 1.0);
  return m;
}

NodeOrdering node_ordering(const NodePartition& partition) {
  NodeOrdering o;
  o.interior_map = partition.interior;
  o.boundary_map = partition.physical_bnd;
  o.n_physical = static_cast<int>(partition.physical_bnd.size());
  for (const auto& edge : partition.schwarz_bnd)
    o.boundary_map.insert(o.boundary_map.end(), edge.nodes.begin(), edge.nodes.end());
  return o;
}

NodePartition monolithic_partition(const StructuredGrid& grid) {
  NodePartition p;
  for (int n = 0; n < grid.num_nodes(); ++n)
    (grid.on_boundary(n) ? p.physical_bnd : p.interior).push_back(n);
  return p;
}

FemOperators assemble(const StructuredGrid& grid, const NodePartition& partition) {
  FemOperators ops;
  ops.ordering = node_ordering(partition);
  const int ni = ops.ordering.n_interior();
  const int nb = ops.ordering.n_boundary();

  // node -> position; interior positions >= 0, boundary positions encoded as -(k + 1)
  std::vector<int> slot(grid.num_nodes(), 0);
  std::vector<bool> seen(grid.num_nodes(), false);
  for (int k = 0; k < ni; ++k) {
    slot[ops.ordering.interior_map[k]] = k;
    seen[ops.ordering.interior_map[k]] = true;
  }
  for (int k = 0; k < nb; ++k) {
    slot[ops.ordering.boundary_map[k]] = -(k + 1);
    seen[ops.ordering.boundary_map[k]] = true;
  }
  for (int n = 0; n < grid.num_nodes(); ++n)
    if (!seen[n]) throw ConfigError("node partition does not cover node " + std::to_string(n));

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> m_ii, a_ii, m_ib, a_ib;
  m_ii.reserve(7 * ni);
  a_ii.reserve(7 * ni);

  const auto& xy = grid.nodes();
  for (const auto& tri : grid.triangles()) {
    const auto ke = element_stiffness(xy[tri[0]], xy[tri[1]], xy[tri[2]]);
    const auto me = element_mass(xy[tri[0]], xy[tri[1]], xy[tri[2]]);
    for (int r = 0; r < 3; ++r) {
      const int row = slot[tri[r]];
      if (row < 0) continue;
      for (int s = 0; s < 3; ++s) {
        const int col = slot[tri[s]];
        if (col >= 0) {
          m_ii.emplace_back(row, col, me[r][s]);
          a_ii.emplace_back(row, col, ke[r][s]);
        } else {
          m_ib.emplace_back(row, -col - 1, me[r][s]);
          a_ib.emplace_back(row, -col - 1, ke[r][s]);
        }
      }
    }
  }

  ops.mass_ii.resize(ni, ni);
  ops.stiff_ii.resize(ni, ni);
  ops.mass_ib.resize(ni, nb);
  ops.stiff_ib.resize(ni, nb);
  ops.mass_ii.setFromTriplets(m_ii.begin(), m_ii.end());
  ops.stiff_ii.setFromTriplets(a_ii.begin(), a_ii.end());
  ops.mass_ib.setFromTriplets(m_ib.begin(), m_ib.end());
  ops.stiff_ib.setFromTriplets(a_ib.begin(), a_ib.end());
  return ops;
}

ImplicitEulerSolver::ImplicitEulerSolver(const FemOperators& ops, double dt)
    : dt_(dt), mass_ii_(ops.mass_ii), mass_ib_(ops.mass_ib), lift_next_(ops.mass_ib + dt * ops.stiff_ib) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (ops.n_interior() == 0) return;
  SparseMatrix system = ops.mass_ii + dt * ops.stiff_ii;
  factor_.compute(system);
  if (factor_.info() != Eigen::Success)
    throw NumericalError("factorization of M + dt A failed (dt = " + std::to_string(dt) + ")");
}

Vector ImplicitEulerSolver::step(const Vector& x_n, const Vector& g_n,
                                 const Vector& g_next) const {
  if (x_n.size() != mass_ii_.rows() || g_n.size() != mass_ib_.cols() ||
      g_next.size() != mass_ib_.cols())
    throw ConfigError("state or boundary vector has the wrong length for this solver");
  if (x_n.size() == 0) return x_n;
  Vector rhs = mass_ii_ * x_n + mass_ib_ * g_n - lift_next_ * g_next;
  Vector x = factor_.solve(rhs);
  if (factor_.info() != Eigen::Success || !x.allFinite())
    throw NumericalError("backward Euler solve failed");
  return x;
}

Vector backward_euler_step(const FemOperators& ops, const Vector& x_n, const Vector& g_n,
                           const Vector& g_next, double dt) {
  return ImplicitEulerSolver(ops, dt).step(x_n, g_n, g_next);
}

double SideCondition::at(double t) const {
  if (frequency) return 1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * *frequency * t);
  return value;
}

BoundaryCondition::BoundaryCondition(SideCondition left, SideCondition right, SideCondition top,
                                     SideCondition bottom)
    : sides_{left, right, top, bottom} {}

BoundaryCondition BoundaryCondition::static_case() {
  return {SideCondition::constant(2.0), SideCondition::constant(5.0),
          SideCondition::constant(0.0), SideCondition::constant(0.0)};
}

BoundaryCondition BoundaryCondition::time_varying_case() {
  return {SideCondition::oscillating(2.0), SideCondition::constant(1.0),
          SideCondition::oscillating(4.0), SideCondition::constant(5.0)};
}

BoundaryCondition BoundaryCondition::uniform(double value) {
  const auto c = SideCondition::constant(value);
  return {c, c, c, c};
}

double BoundaryCondition::value(Side side, double t) const {
  return sides_[static_cast<int>(side)].at(t);
}

Vector BoundaryCondition::values(const StructuredGrid& grid, const std::vector<int>& nodes,
                                 double t) const {
  Vector v(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto side = grid.side_of(nodes[k]);
    if (!side)
      throw ConfigError("node " + std::to_string(nodes[k]) + " is not on the domain boundary");
    v[k] = value(*side, t);
  }
  return v;
}

Vector interpolate(const StructuredGrid& grid, const std::function<double(const Point&)>& v) {
  Vector u(grid.num_nodes());
  for (int n = 0; n < grid.num_nodes(); ++n) u[n] = v(grid.nodes()[n]);
  return u;
}

int step_count(double dt, double T) {
  if (!(dt > 0.0) || !(T > 0.0)) throw ConfigError("dt and T must be positive");
  const double ratio = T / dt;
  const long k = std::lround(ratio);
  if (k < 1 || std::abs(ratio - static_cast<double>(k)) > 1e-9 * ratio)
    throw ConfigError("T must be an integer multiple of dt");
  return static_cast<int>(k);
}

MonolithicSolver::MonolithicSolver(const StructuredGrid& grid, BoundaryCondition bc, double dt)
    : grid_(&grid),
      bc_(std::move(bc)),
      dt_(dt),
      ops_(assemble(grid, monolithic_partition(grid))),
      stepper_(ops_, dt) {}

SnapshotSet MonolithicSolver::solve(const Vector& ic_full, double T,
                                    double* online_seconds) const {
  if (ic_full.size() != grid_->num_nodes())
    throw ConfigError("initial condition must have one value per grid node");
  const int steps = step_count(dt_, T);
  const auto& ord = ops_.ordering;

  SnapshotSet s;
  s.num_nodes = grid_->num_nodes();
  s.interior_map = ord.interior_map;
  s.boundary_map = ord.boundary_map;
  s.times.resize(steps + 1);
  s.states.resize(ord.n_interior(), steps + 1);
  s.boundary_history.resize(ord.n_boundary(), steps + 1);

  Vector x(ord.n_interior());
  for (int k = 0; k < ord.n_interior(); ++k) x[k] = ic_full[ord.interior_map[k]];
  s.times[0] = 0.0;
  s.states.col(0) = x;
  s.boundary_history.col(0) = bc_.values(*grid_, ord.boundary_map, 0.0);

  Vector g_prev = s.boundary_history.col(0);
  const auto start = std::chrono::steady_clock::now();
  for (int p = 1; p <= steps; ++p) {
    const double t = p * dt_;
    Vector g = bc_.values(*grid_, ord.boundary_map, t);
    x = stepper_.step(x, g_prev, g);
    g_prev = g;
    s.times[p] = t;
    s.states.col(p) = x;
    s.boundary_history.col(p) = g;
  }
  if (online_seconds)
    *online_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

SnapshotSet solve_monolithic(const StructuredGrid& grid, const BoundaryCondition& bc,
                             const Vector& ic_full, double dt, double T) {
  return MonolithicSolver(grid, bc, dt).solve(ic_full, T);
}

}  // namespace opschwarz
