#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "opschwarz/linalg.hpp"
#include "opschwarz/metrics.hpp"
#include "opschwarz/opinf.hpp"
#include "opschwarz/pod.hpp"
#include "opschwarz/schwarz.hpp"

namespace opschwarz {

namespace fs = std::filesystem;

/// Nodal history: header row of time stamps, then one row per node.
struct SnapshotTable {
  Matrix values;  ///< rows = nodes, cols = times
  std::vector<double> times;
};

void write_snapshot_csv(const fs::path& path, const Matrix& values,
                        const std::vector<double>& times);
SnapshotTable read_snapshot_csv(const fs::path& path);

/// Plain numeric matrix, optional `# ...` comment line first.
void write_matrix_csv(const fs::path& path, const Matrix& m, const std::string& comment = {});

/// Basis dump: `<stem>_modes.csv` (N x r), `<stem>_singular_values.csv` and
/// `<stem>_mean.csv`.
void write_basis_csv(const fs::path& stem, const PodBasis& basis);

/// `<stem>_K.csv` and `<stem>_B.csv`, each with an `# r=.., m=.., lambda=..` comment.
void write_operators_csv(const fs::path& stem, const ReducedModel& model);

/// Per-step CSV: step,t,sweeps,eps_abs,eps_rel
void write_step_csv(const fs::path& path, const CoupledRun& run);

/// Appends one stats row, writing the header first if the file is new or empty.
void append_stats_row(const fs::path& path, const RunStats& stats);

/// Binary greyscale PGM (P5) of a nodal field on an (nx+1) x (ny+1) node
/// lattice, top row = largest y. Linear min-max scaling to 0..255; a
/// constant field maps to 0. Each node becomes a `scale` x `scale` block.
std::string render_pgm(const Vector& field, int nx, int ny, int scale = 1);

void write_file(const fs::path& path, const std::string& bytes);

}  // namespace opschwarz
