#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace opschwarz {

enum class Side { Left, Right, Top, Bottom };

const char* to_string(Side side);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Rect {
  double x0 = -1.0;
  double x1 = 1.0;
  double y0 = -1.0;
  double y1 = 1.0;
};

/// Half-open window [ix_lo, ix_hi) x [iy_lo, iy_hi) of parent cells.
struct CellRange {
  int ix_lo = 0;
  int ix_hi = 0;
  int iy_lo = 0;
  int iy_hi = 0;

  int width() const { return ix_hi - ix_lo; }
  int height() const { return iy_hi - iy_lo; }
};

using Triangle = std::array<int, 3>;

/// Uniform rectangle grid, every cell split along its lower-left to
/// upper-right diagonal into two counter-clockwise P1 triangles.
///
/// Nodes are numbered row by row: node (i, j) has index j * (nx + 1) + i.
/// Boundary nodes carry a side tag; corners are tagged Top or Bottom.
class StructuredGrid {
 public:
  StructuredGrid(int nx, int ny, const Rect& bounds);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  Rect bounds() const { return {xs_.front(), xs_.back(), ys_.front(), ys_.back()}; }

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }

  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<double>& x_lines() const { return xs_; }
  const std::vector<double>& y_lines() const { return ys_; }

  int node_index(int i, int j) const { return j * (nx_ + 1) + i; }
  int column_of(int node) const { return node % (nx_ + 1); }
  int row_of(int node) const { return node / (nx_ + 1); }

  std::optional<Side> side_of(int node) const { return sides_[node]; }
  bool on_boundary(int node) const { return sides_[node].has_value(); }

  /// Grid over a window of this grid's cells, reusing the same coordinate
  /// lines so that shared nodes compare equal bit for bit.
  StructuredGrid subgrid(const CellRange& cells) const;

 private:
  StructuredGrid(std::vector<double> xs, std::vector<double> ys);
  void build();

  int nx_ = 0;
  int ny_ = 0;
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<Point> nodes_;
  std::vector<Triangle> triangles_;
  std::vector<std::optional<Side>> sides_;
};

StructuredGrid build_grid(int nx, int ny, const Rect& bounds);

enum class Layout { Monolithic, Vertical, Horizontal, FourSquares };

const char* to_string(Layout layout);
Layout layout_from_string(const std::string& name);

struct DecompositionConfig {
  Layout layout = Layout::Vertical;
  int overlap = 10;  ///< cells shared between edge neighbours

  /// Throws ConfigError if this decomposition cannot be applied to `grid`.
  void validate(const StructuredGrid& grid) const;
};

/// Nodes of one local-boundary edge whose values come from `neighbor`.
struct SchwarzEdge {
  Side side = Side::Left;
  int neighbor = -1;
  std::vector<int> nodes;  ///< local node indices, ascending
};

/// Partition of a subdomain's local nodes. Physical Dirichlet data wins
/// over transmission data on nodes touching the global boundary.
struct NodePartition {
  std::vector<int> interior;
  std::vector<int> physical_bnd;
  std::vector<SchwarzEdge> schwarz_bnd;

  int num_schwarz_nodes() const;
};

struct Subdomain {
  int id = 0;
  CellRange cells;
  StructuredGrid local_grid;
  std::vector<int> parent_of;  ///< local node -> parent node
  /// Edge neighbour per local side (Left, Right, Top, Bottom), -1 if none.
  std::array<int, 4> edge_neighbor = {-1, -1, -1, -1};
  int num_subdomains = 1;
  NodePartition partition;
  Point center;

  /// Local index of a parent node, or -1 if the node is outside this subdomain.
  int local_of(int parent_node, const StructuredGrid& parent) const;
};

/// Carves overlapping subdomains out of `grid`, numbered as in the usual
/// layout sketches: Vertical (left, right), Horizontal (bottom, top),
/// FourSquares (bottom-left, bottom-right, top-left, top-right).
std::vector<Subdomain> decompose(const StructuredGrid& grid, const DecompositionConfig& cfg);

/// Splits the local nodes of `sub` into interior, physical boundary and
/// Schwarz boundary (grouped per edge). A Schwarz corner shared by two
/// edges is put on the edge whose neighbour is updated last before `sub`
/// in an ascending sweep.
NodePartition classify_nodes(const Subdomain& sub, const StructuredGrid& grid);

/// Debug dump: node,x,y,tag
void write_mesh_csv(std::ostream& os, const StructuredGrid& grid);

}  // namespace opschwarz
