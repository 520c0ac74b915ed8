#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opschwarz/linalg.hpp"

namespace opschwarz {

struct ErrorSeries {
  double e_avg = 0.0;
  double e_max = 0.0;
  std::vector<double> per_step;  ///< e_p for p = 2..tau
};

/// Relative l2 error of full nodal solutions against a reference, skipping
/// the initial column: e_p = ||u_ref - u||_2 / ||u_ref||_2.
ErrorSeries relative_error_series(const Matrix& reference, const Matrix& solution);

/// Unweighted mean over subdomains.
double average_projection_error(std::span<const double> values);

/// One row of the stats CSV.
struct RunStats {
  std::string layout;
  std::string model_assignment;
  int overlap = 0;
  int r = 0;
  int data = 0;
  double lambda = 0.0;
  double e_avg = 0.0;
  double e_max = 0.0;
  double e_proj_avg = 0.0;
  double avg_sweeps = 0.0;
  double online_seconds = 0.0;
  std::optional<std::string> error;  ///< set when the run failed
};

std::string stats_csv_header();
std::string to_csv_row(const RunStats& stats);

}  // namespace opschwarz
