#include "opschwarz/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "opschwarz/errors.hpp"

namespace opschwarz {

ErrorSeries relative_error_series(const Matrix& reference, const Matrix& solution) {
  if (reference.rows() != solution.rows() || reference.cols() != solution.cols())
    throw ConfigError("error series needs solutions on the same nodes and times");
  if (reference.cols() < 2) throw ConfigError("error series needs at least two time levels");
  ErrorSeries out;
  for (Eigen::Index p = 1; p < reference.cols(); ++p) {
    const double norm = reference.col(p).norm();
    if (!(norm > 0.0))
      throw NumericalError("reference solution has zero norm at time level " +
                           std::to_string(p));
    out.per_step.push_back((reference.col(p) - solution.col(p)).norm() / norm);
  }
  out.e_avg = std::accumulate(out.per_step.begin(), out.per_step.end(), 0.0) /
              static_cast<double>(out.per_step.size());
  out.e_max = *std::max_element(out.per_step.begin(), out.per_step.end());
  return out;
}

double average_projection_error(std::span<const double> values) {
  if (values.empty()) throw ConfigError("no projection errors to average");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::string stats_csv_header() {
  return "layout,model_assignment,overlap,r,data,lambda,e_avg,e_max,e_proj_avg,avg_sweeps,"
         "online_seconds";
}

namespace {

std::string sanitize(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == ',' || c == '\n' || c == '\r'; },
                  ';');
  return s;
}

}  // namespace

std::string to_csv_row(const RunStats& s) {
  std::ostringstream os;
  os.precision(6);
  os << s.layout << ',' << s.model_assignment << ',' << s.overlap << ',' << s.r << ',' << s.data
     << ',' << s.lambda << ',';
  if (s.error) {
    os << "error: " << sanitize(*s.error) << ",nan,nan,nan,nan";
  } else {
    os.precision(6);
    os << std::scientific << s.e_avg << ',' << s.e_max << ',' << s.e_proj_avg << ','
       << std::defaultfloat << s.avg_sweeps << ',' << s.online_seconds;
  }
  return os.str();
}

}  // namespace opschwarz
