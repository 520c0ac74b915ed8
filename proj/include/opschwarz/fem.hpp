#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "opschwarz/linalg.hpp"
#include "opschwarz/mesh.hpp"
#include "opschwarz/snapshots.hpp"

namespace opschwarz {

using ElementMatrix = std::array<std::array<double, 3>, 3>;

/// P1 stiffness of one triangle. Throws NumericalError on zero area.
ElementMatrix element_stiffness(const Point& a, const Point& b, const Point& c);
/// Consistent P1 mass: area/12 * [[2,1,1],[1,2,1],[1,1,2]].
ElementMatrix element_mass(const Point& a, const Point& b, const Point& c);

/// Interior nodes ascending; boundary nodes are the physical ones ascending
/// followed by each Schwarz edge in partition order.
struct NodeOrdering {
  std::vector<int> interior_map;
  std::vector<int> boundary_map;
  int n_physical = 0;

  int n_interior() const { return static_cast<int>(interior_map.size()); }
  int n_boundary() const { return static_cast<int>(boundary_map.size()); }
};

NodeOrdering node_ordering(const NodePartition& partition);

/// Mass and stiffness split into interior/interior and interior/boundary
/// blocks, so the lifted semi-discrete system reads
///   M_ii x' + M_ib g' = -A_ii x - A_ib g.
struct FemOperators {
  SparseMatrix mass_ii;
  SparseMatrix stiff_ii;
  SparseMatrix mass_ib;
  SparseMatrix stiff_ib;
  NodeOrdering ordering;

  int n_interior() const { return ordering.n_interior(); }
  int n_boundary() const { return ordering.n_boundary(); }
};

FemOperators assemble(const StructuredGrid& grid, const NodePartition& partition);

/// Partition of a whole grid: every tagged node is a physical boundary node.
NodePartition monolithic_partition(const StructuredGrid& grid);

/// Backward Euler for the lifted system:
///   (M_ii + dt A_ii) x_{n+1} = M_ii x_n + M_ib g_n - (M_ib + dt A_ib) g_{n+1}.
/// The matrix is factored once; each step is one triangular solve pair.
class ImplicitEulerSolver {
 public:
  ImplicitEulerSolver(const FemOperators& ops, double dt);

  Vector step(const Vector& x_n, const Vector& g_n, const Vector& g_next) const;

  double dt() const { return dt_; }
  int n_interior() const { return static_cast<int>(mass_ii_.rows()); }
  int n_boundary() const { return static_cast<int>(mass_ib_.cols()); }

 private:
  double dt_;
  SparseMatrix mass_ii_;
  SparseMatrix mass_ib_;
  SparseMatrix lift_next_;  // M_ib + dt A_ib
  Eigen::SimplicialLDLT<SparseMatrix> factor_;
};

Vector backward_euler_step(const FemOperators& ops, const Vector& x_n, const Vector& g_n,
                           const Vector& g_next, double dt);

/// Dirichlet value on one side of the global rectangle: either a constant
/// or q(t, mu) = 1 + 0.5 sin(2 pi mu t).
struct SideCondition {
  double value = 0.0;
  std::optional<double> frequency;

  static SideCondition constant(double v) { return {v, std::nullopt}; }
  static SideCondition oscillating(double mu) { return {0.0, mu}; }

  double at(double t) const;
  bool operator==(const SideCondition&) const = default;
};

class BoundaryCondition {
 public:
  BoundaryCondition() = default;
  BoundaryCondition(SideCondition left, SideCondition right, SideCondition top,
                    SideCondition bottom);

  /// Left 2, right 5, top and bottom 0.
  static BoundaryCondition static_case();
  /// Left q(t,2), top q(t,4), bottom 5, right 1.
  static BoundaryCondition time_varying_case();
  static BoundaryCondition uniform(double value);

  double value(Side side, double t) const;
  const SideCondition& side(Side s) const { return sides_[static_cast<int>(s)]; }

  /// Values at boundary nodes of `grid` (their side tag picks the side).
  Vector values(const StructuredGrid& grid, const std::vector<int>& nodes, double t) const;

  bool operator==(const BoundaryCondition&) const = default;

 private:
  std::array<SideCondition, 4> sides_{};
};

/// Nodal interpolation of v on every grid node.
Vector interpolate(const StructuredGrid& grid, const std::function<double(const Point&)>& v);

/// Whole-domain full-order model. Construction is the offline part
/// (assembly and factorization); `solve` is the timed online loop.
class MonolithicSolver {
 public:
  MonolithicSolver(const StructuredGrid& grid, BoundaryCondition bc, double dt);

  /// tau = T/dt + 1 snapshots starting with the interior of `ic` at t = 0.
  SnapshotSet solve(const Vector& ic_full, double T, double* online_seconds = nullptr) const;

  const FemOperators& operators() const { return ops_; }

 private:
  const StructuredGrid* grid_;
  BoundaryCondition bc_;
  double dt_;
  FemOperators ops_;
  ImplicitEulerSolver stepper_;
};

SnapshotSet solve_monolithic(const StructuredGrid& grid, const BoundaryCondition& bc,
                             const Vector& ic_full, double dt, double T);

/// Number of steps K with K dt = T; throws ConfigError otherwise.
int step_count(double dt, double T);

}  // namespace opschwarz
