#include "opschwarz/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "opschwarz/errors.hpp"

namespace opschwarz {

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, mode);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  return out;
}

std::vector<double> parse_row(const std::string& line, const fs::path& path, int line_no) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      row.push_back(std::stod(cell, &used));
    } catch (const std::exception&) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + cell +
                    "'");
    }
  }
  return row;
}

void write_rows(std::ostream& os, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j);
    }
    os << '\n';
  }
}

}  // namespace

void write_snapshot_csv(const fs::path& path, const Matrix& values,
                        const std::vector<double>& times) {
  if (values.cols() != static_cast<Eigen::Index>(times.size()))
    throw ConfigError("snapshot columns do not match the time stamps");
  auto out = open_out(path);
  for (std::size_t j = 0; j < times.size(); ++j) out << (j ? "," : "") << times[j];
  out << '\n';
  write_rows(out, values);
  if (!out) throw IoError("failed writing " + path.string());
}

SnapshotTable read_snapshot_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open snapshot file " + path.string());
  SnapshotTable t;
  std::string line;
  int line_no = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto row = parse_row(line, path, line_no);
    if (t.times.empty()) {
      t.times = std::move(row);
      continue;
    }
    if (row.size() != t.times.size())
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(t.times.size()) + " columns");
    rows.push_back(std::move(row));
  }
  if (t.times.empty()) throw IoError("snapshot file " + path.string() + " is empty");
  t.values.resize(rows.size(), t.times.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < t.times.size(); ++j) t.values(i, j) = rows[i][j];
  return t;
}

void write_matrix_csv(const fs::path& path, const Matrix& m, const std::string& comment) {
  auto out = open_out(path);
  if (!comment.empty()) out << "# " << comment << '\n';
  write_rows(out, m);
}

void write_basis_csv(const fs::path& stem, const PodBasis& basis) {
  const std::string s = stem.string();
  write_matrix_csv(s + "_modes.csv", basis.modes);
  write_matrix_csv(s + "_singular_values.csv", basis.singular_values);
  write_matrix_csv(s + "_mean.csv", basis.mean);
}

void write_operators_csv(const fs::path& stem, const ReducedModel& model) {
  std::ostringstream tag;
  tag.precision(17);
  tag << "r=" << model.rank() << ", m=" << model.n_inputs() << ", lambda=" << model.lambda;
  const std::string s = stem.string();
  write_matrix_csv(s + "_K.csv", model.K, tag.str());
  write_matrix_csv(s + "_B.csv", model.B, tag.str());
}

void write_step_csv(const fs::path& path, const CoupledRun& run) {
  auto out = open_out(path);
  out << "step,t,sweeps,eps_abs,eps_rel\n";
  for (std::size_t k = 0; k < run.sweeps.size(); ++k)
    out << k + 1 << ',' << run.times[k + 1] << ',' << run.sweeps[k] << ',' << run.eps_abs[k]
        << ',' << run.eps_rel[k] << '\n';
}

void append_stats_row(const fs::path& path, const RunStats& stats) {
  std::error_code ec;
  const bool fresh = !fs::exists(path, ec) || fs::file_size(path, ec) == 0;
  auto out = open_out(path, std::ios::app);
  if (fresh) out << stats_csv_header() << '\n';
  out << to_csv_row(stats) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

std::string render_pgm(const Vector& field, int nx, int ny, int scale) {
  if (field.size() != static_cast<Eigen::Index>(nx + 1) * (ny + 1))
    throw ConfigError("field length does not match a " + std::to_string(nx) + "x" +
                      std::to_string(ny) + " grid");
  if (scale < 1) throw ConfigError("render scale must be positive");
  const double lo = field.minCoeff();
  const double hi = field.maxCoeff();
  const double range = hi - lo;
  const bool flat = !(range > 0.0) || !std::isfinite(range);

  const int w = (nx + 1) * scale;
  const int h = (ny + 1) * scale;
  std::string header = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  std::string img(static_cast<std::size_t>(w) * h, '\0');
  for (int row = 0; row < h; ++row) {
    const int j = ny - row / scale;
    for (int col = 0; col < w; ++col) {
      const int i = col / scale;
      const double v = field[j * (nx + 1) + i];
      int level = 0;
      if (!flat) level = static_cast<int>(std::lround(255.0 * (v - lo) / range));
      img[static_cast<std::size_t>(row) * w + col] = static_cast<char>(level);
    }
  }
  return header + img;
}

void write_file(const fs::path& path, const std::string& bytes) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace opschwarz
