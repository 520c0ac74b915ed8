#include "opschwarz/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "opschwarz/errors.hpp"

namespace opschwarz {

const char* to_string(Side side) {
  switch (side) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Top: return "top";
    case Side::Bottom: return "bottom";
  }
  return "?";
}

const char* to_string(Layout layout) {
  switch (layout) {
    case Layout::Monolithic: return "monolithic";
    case Layout::Vertical: return "vertical";
    case Layout::Horizontal: return "horizontal";
    case Layout::FourSquares: return "four_squares";
  }
  return "?";
}

Layout layout_from_string(const std::string& name) {
  for (Layout l : {Layout::Monolithic, Layout::Vertical, Layout::Horizontal, Layout::FourSquares})
    if (name == to_string(l)) return l;
  throw ConfigError("unknown layout '" + name +
                    "' (expected monolithic, vertical, horizontal or four_squares)");
}

namespace {

std::vector<double> coordinate_lines(double lo, double hi, int n) {
  std::vector<double> lines(n + 1);
  for (int i = 0; i <= n; ++i) lines[i] = lo + (hi - lo) * i / n;
  lines[n] = hi;
  return lines;
}

}  // namespace

StructuredGrid::StructuredGrid(int nx, int ny, const Rect& b) {
  if (nx < 1 || ny < 1)
    throw ConfigError("grid needs at least one cell per axis, got " + std::to_string(nx) + "x" +
                      std::to_string(ny));
  if (!(b.x0 < b.x1) || !(b.y0 < b.y1))
    throw ConfigError("grid bounds must satisfy x0 < x1 and y0 < y1");
  xs_ = coordinate_lines(b.x0, b.x1, nx);
  ys_ = coordinate_lines(b.y0, b.y1, ny);
  build();
}

StructuredGrid::StructuredGrid(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  build();
}

void StructuredGrid::build() {
  nx_ = static_cast<int>(xs_.size()) - 1;
  ny_ = static_cast<int>(ys_.size()) - 1;

  nodes_.clear();
  sides_.clear();
  nodes_.reserve((nx_ + 1) * (ny_ + 1));
  sides_.reserve((nx_ + 1) * (ny_ + 1));
  for (int j = 0; j <= ny_; ++j) {
    for (int i = 0; i <= nx_; ++i) {
      nodes_.push_back({xs_[i], ys_[j]});
      std::optional<Side> side;
      if (i == 0) side = Side::Left;
      if (i == nx_) side = Side::Right;
      // corners resolve to top/bottom
      if (j == 0) side = Side::Bottom;
      if (j == ny_) side = Side::Top;
      sides_.push_back(side);
    }
  }

  triangles_.clear();
  triangles_.reserve(2 * nx_ * ny_);
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      const int a = node_index(i, j);
      const int b = node_index(i + 1, j);
      const int c = node_index(i + 1, j + 1);
      const int d = node_index(i, j + 1);
      triangles_.push_back({a, b, c});
      triangles_.push_back({a, c, d});
    }
  }
}

StructuredGrid StructuredGrid::subgrid(const CellRange& cells) const {
  if (cells.ix_lo < 0 || cells.ix_hi > nx_ || cells.iy_lo < 0 || cells.iy_hi > ny_ ||
      cells.width() < 1 || cells.height() < 1)
    throw ConfigError("cell window outside the parent grid");
  std::vector<double> xs(xs_.begin() + cells.ix_lo, xs_.begin() + cells.ix_hi + 1);
  std::vector<double> ys(ys_.begin() + cells.iy_lo, ys_.begin() + cells.iy_hi + 1);
  return StructuredGrid(std::move(xs), std::move(ys));
}

StructuredGrid build_grid(int nx, int ny, const Rect& bounds) {
  return StructuredGrid(nx, ny, bounds);
}

void DecompositionConfig::validate(const StructuredGrid& grid) const {
  if (layout == Layout::Monolithic) return;
  const int nx = grid.nx();
  const int ny = grid.ny();
  if (overlap < 1)
    throw ConfigError("overlap must be at least one cell for a multi-subdomain layout");
  if (overlap >= std::min(nx, ny))
    throw ConfigError("overlap " + std::to_string(overlap) + " must be below min(nx, ny)");
  const int half_overlap = (overlap + 1) / 2;
  const bool split_x = layout == Layout::Vertical || layout == Layout::FourSquares;
  const bool split_y = layout == Layout::Horizontal || layout == Layout::FourSquares;
  if (split_x) {
    if (nx % 2 != 0) throw ConfigError("layout needs an even nx");
    if (half_overlap >= nx / 2)
      throw ConfigError("overlap " + std::to_string(overlap) + " too large for half-width " +
                        std::to_string(nx / 2));
  }
  if (split_y) {
    if (ny % 2 != 0) throw ConfigError("layout needs an even ny");
    if (half_overlap >= ny / 2)
      throw ConfigError("overlap " + std::to_string(overlap) + " too large for half-height " +
                        std::to_string(ny / 2));
  }
}

int NodePartition::num_schwarz_nodes() const {
  int n = 0;
  for (const auto& e : schwarz_bnd) n += static_cast<int>(e.nodes.size());
  return n;
}

int Subdomain::local_of(int parent_node, const StructuredGrid& parent) const {
  const int i = parent.column_of(parent_node) - cells.ix_lo;
  const int j = parent.row_of(parent_node) - cells.iy_lo;
  if (i < 0 || i > cells.width() || j < 0 || j > cells.height()) return -1;
  return local_grid.node_index(i, j);
}

namespace {

constexpr int side_slot(Side s) { return static_cast<int>(s); }

// Lower and upper cell windows of a split axis with n cells.
std::pair<std::pair<int, int>, std::pair<int, int>> split(int n, int overlap) {
  const int mid = n / 2;
  return {{0, mid + (overlap + 1) / 2}, {mid - overlap / 2, n}};
}

Subdomain make_subdomain(const StructuredGrid& grid, int id, int count, CellRange cells) {
  Subdomain sub{id, cells, grid.subgrid(cells), {}, {}, count, {}, {}};
  const auto& g = sub.local_grid;
  sub.parent_of.resize(g.num_nodes());
  for (int j = 0; j <= cells.height(); ++j)
    for (int i = 0; i <= cells.width(); ++i)
      sub.parent_of[g.node_index(i, j)] = grid.node_index(i + cells.ix_lo, j + cells.iy_lo);
  const Rect b = g.bounds();
  sub.center = {0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1)};
  return sub;
}

}  // namespace

std::vector<Subdomain> decompose(const StructuredGrid& grid, const DecompositionConfig& cfg) {
  cfg.validate(grid);
  const int nx = grid.nx();
  const int ny = grid.ny();
  std::vector<Subdomain> subs;

  auto connect = [&](int a, Side side_a, int b, Side side_b) {
    subs[a].edge_neighbor[side_slot(side_a)] = b;
    subs[b].edge_neighbor[side_slot(side_b)] = a;
  };

  switch (cfg.layout) {
    case Layout::Monolithic:
      subs.push_back(make_subdomain(grid, 0, 1, {0, nx, 0, ny}));
      break;
    case Layout::Vertical: {
      auto [lo, hi] = split(nx, cfg.overlap);
      subs.push_back(make_subdomain(grid, 0, 2, {lo.first, lo.second, 0, ny}));
      subs.push_back(make_subdomain(grid, 1, 2, {hi.first, hi.second, 0, ny}));
      connect(0, Side::Right, 1, Side::Left);
      break;
    }
    case Layout::Horizontal: {
      auto [lo, hi] = split(ny, cfg.overlap);
      subs.push_back(make_subdomain(grid, 0, 2, {0, nx, lo.first, lo.second}));
      subs.push_back(make_subdomain(grid, 1, 2, {0, nx, hi.first, hi.second}));
      connect(0, Side::Top, 1, Side::Bottom);
      break;
    }
    case Layout::FourSquares: {
      auto [xlo, xhi] = split(nx, cfg.overlap);
      auto [ylo, yhi] = split(ny, cfg.overlap);
      subs.push_back(make_subdomain(grid, 0, 4, {xlo.first, xlo.second, ylo.first, ylo.second}));
      subs.push_back(make_subdomain(grid, 1, 4, {xhi.first, xhi.second, ylo.first, ylo.second}));
      subs.push_back(make_subdomain(grid, 2, 4, {xlo.first, xlo.second, yhi.first, yhi.second}));
      subs.push_back(make_subdomain(grid, 3, 4, {xhi.first, xhi.second, yhi.first, yhi.second}));
      connect(0, Side::Right, 1, Side::Left);
      connect(0, Side::Top, 2, Side::Bottom);
      connect(1, Side::Top, 3, Side::Bottom);
      connect(2, Side::Right, 3, Side::Left);
      break;
    }
  }

  for (auto& s : subs) s.partition = classify_nodes(s, grid);
  return subs;
}

NodePartition classify_nodes(const Subdomain& sub, const StructuredGrid& grid) {
  const auto& g = sub.local_grid;
  const int n = sub.num_subdomains;
  // Larger key = updated more recently when `sub` is about to be solved.
  auto recency = [&](int j) { return j < sub.id ? j + n : j; };

  NodePartition part;
  std::array<std::vector<int>, 4> per_side;
  for (int node = 0; node < g.num_nodes(); ++node) {
    if (grid.on_boundary(sub.parent_of[node])) {
      part.physical_bnd.push_back(node);
      continue;
    }
    if (!g.on_boundary(node)) {
      part.interior.push_back(node);
      continue;
    }
    const int i = g.column_of(node);
    const int j = g.row_of(node);
    std::vector<Side> sides;
    if (i == 0) sides.push_back(Side::Left);
    if (i == g.nx()) sides.push_back(Side::Right);
    if (j == 0) sides.push_back(Side::Bottom);
    if (j == g.ny()) sides.push_back(Side::Top);

    int best_slot = -1;
    for (Side s : sides) {
      const int nb = sub.edge_neighbor[side_slot(s)];
      if (nb < 0) continue;
      if (best_slot < 0 || recency(nb) > recency(sub.edge_neighbor[best_slot]))
        best_slot = side_slot(s);
    }
    if (best_slot < 0)
      throw ConfigError("subdomain " + std::to_string(sub.id) +
                        " has an interface node without an edge neighbour");
    per_side[best_slot].push_back(node);
  }

  for (Side s : {Side::Left, Side::Right, Side::Top, Side::Bottom}) {
    auto& nodes = per_side[side_slot(s)];
    if (nodes.empty()) continue;
    part.schwarz_bnd.push_back({s, sub.edge_neighbor[side_slot(s)], std::move(nodes)});
  }
  return part;
}

void write_mesh_csv(std::ostream& os, const StructuredGrid& grid) {
  os << "node,x,y,tag\n";
  os.precision(17);
  for (int n = 0; n < grid.num_nodes(); ++n) {
    const auto& p = grid.nodes()[n];
    const auto side = grid.side_of(n);
    os << n << ',' << p.x << ',' << p.y << ',' << (side ? to_string(*side) : "") << '\n';
  }
}

}  // namespace opschwarz
