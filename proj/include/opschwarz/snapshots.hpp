#pragma once

#include <vector>

#include "opschwarz/linalg.hpp"
#include "opschwarz/mesh.hpp"

namespace opschwarz {

/// Time history of a full-order solve, split into unconstrained (interior)
/// states and the Dirichlet boundary values imposed at the same times.
struct SnapshotSet {
  Matrix states;            ///< N x tau, one interior state per column
  Matrix boundary_history;  ///< m x tau, boundary values per column
  std::vector<double> times;
  std::vector<int> interior_map;  ///< row -> global node of `states`
  std::vector<int> boundary_map;  ///< row -> global node of `boundary_history`
  int num_nodes = 0;

  int num_snapshots() const { return static_cast<int>(times.size()); }

  /// Full nodal vector (interior + boundary) at column p.
  Vector full_state(int p) const;
  /// num_nodes x tau matrix of full nodal vectors.
  Matrix full_states() const;

  /// Splits full nodal columns using the grid's own interior/boundary sets
  /// (both in ascending node order).
  static SnapshotSet from_full(const StructuredGrid& grid, const Matrix& full,
                               std::vector<double> times);
};

}  // namespace opschwarz
