#include "opschwarz/snapshots.hpp"

#include "opschwarz/errors.hpp"

namespace opschwarz {

Vector SnapshotSet::full_state(int p) const {
  Vector u(num_nodes);
  for (std::size_t k = 0; k < interior_map.size(); ++k) u[interior_map[k]] = states(k, p);
  for (std::size_t k = 0; k < boundary_map.size(); ++k)
    u[boundary_map[k]] = boundary_history(k, p);
  return u;
}

Matrix SnapshotSet::full_states() const {
  Matrix u(num_nodes, num_snapshots());
  for (int p = 0; p < num_snapshots(); ++p) u.col(p) = full_state(p);
  return u;
}

SnapshotSet SnapshotSet::from_full(const StructuredGrid& grid, const Matrix& full,
                                   std::vector<double> times) {
  if (full.rows() != grid.num_nodes())
    throw ConfigError("snapshot rows (" + std::to_string(full.rows()) +
                      ") do not match grid nodes (" + std::to_string(grid.num_nodes()) + ")");
  if (full.cols() != static_cast<Eigen::Index>(times.size()))
    throw ConfigError("snapshot columns do not match the number of time stamps");

  SnapshotSet s;
  s.num_nodes = grid.num_nodes();
  s.times = std::move(times);
  for (int n = 0; n < grid.num_nodes(); ++n)
    (grid.on_boundary(n) ? s.boundary_map : s.interior_map).push_back(n);
  s.states.resize(s.interior_map.size(), full.cols());
  s.boundary_history.resize(s.boundary_map.size(), full.cols());
  for (std::size_t k = 0; k < s.interior_map.size(); ++k)
    s.states.row(k) = full.row(s.interior_map[k]);
  for (std::size_t k = 0; k < s.boundary_map.size(); ++k)
    s.boundary_history.row(k) = full.row(s.boundary_map[k]);
  return s;
}

}  // namespace opschwarz
