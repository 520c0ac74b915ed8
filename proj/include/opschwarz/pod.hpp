#pragma once

#include "opschwarz/linalg.hpp"

namespace opschwarz {

/// What to do when the requested rank exceeds the numerical rank d of the
/// training window.
enum class RankPolicy {
  Strict,  ///< throw, naming d
  Pad,     ///< keep the remaining left singular vectors (zero energy) up to n_train
};

struct PodBasis {
  Vector mean;             ///< length N, zero when centering is off
  Matrix modes;            ///< N x r, orthonormal columns
  Vector singular_values;  ///< length d, descending
  bool centered = false;

  int rank() const { return static_cast<int>(modes.cols()); }
  int numerical_rank() const { return static_cast<int>(singular_values.size()); }
  int size() const { return static_cast<int>(modes.rows()); }
};

/// Truncated POD of the first `n_train` columns of `snapshots`.
///
/// Singular values below 1e-12 sigma_1 count as zero. Each mode is signed so
/// that its largest-magnitude entry is positive.
PodBasis pod_basis(const Matrix& snapshots, int r, bool centering, int n_train,
                   RankPolicy policy = RankPolicy::Strict);

/// ||X - P P^T X||_F / ||X||_F over every column of `snapshots`, after
/// subtracting the basis mean.
double projection_error(const Matrix& snapshots, const PodBasis& basis);

/// sum_{i<=r} sigma_i^2 / sum_{i<=d} sigma_i^2
double energy_fraction(const PodBasis& basis, int r);

/// Smallest r whose energy fraction reaches `threshold`.
int rank_for_energy(const PodBasis& basis, double threshold);

}  // namespace opschwarz
