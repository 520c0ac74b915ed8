#include "opschwarz/pod.hpp"

#include <algorithm>
#include <string>

#include "opschwarz/errors.hpp"

namespace opschwarz {

namespace {

constexpr double kRankTolerance = 1e-12;

}  // namespace

PodBasis pod_basis(const Matrix& snapshots, int r, bool centering, int n_train,
                   RankPolicy policy) {
  const int n = static_cast<int>(snapshots.rows());
  if (n_train < 1 || n_train > snapshots.cols())
    throw ConfigError("training window of " + std::to_string(n_train) + " columns outside [1, " +
                      std::to_string(snapshots.cols()) + "]");
  if (r < 1 || r > std::min(n, n_train))
    throw ConfigError("basis rank " + std::to_string(r) + " outside [1, min(N, n_train) = " +
                      std::to_string(std::min(n, n_train)) + "]");

  PodBasis basis;
  basis.centered = centering;
  Matrix train = snapshots.leftCols(n_train);
  basis.mean = centering ? Vector(train.rowwise().mean()) : Vector::Zero(n);
  if (centering) train.colwise() -= basis.mean;

  Eigen::BDCSVD<Matrix> svd(train, Eigen::ComputeThinU);
  const Vector& sigma = svd.singularValues();
  int d = 0;
  if (sigma.size() > 0 && sigma[0] > 0.0)
    while (d < sigma.size() && sigma[d] > kRankTolerance * sigma[0]) ++d;
  if (d == 0) throw NumericalError("training snapshots are numerically zero; no POD basis");
  if (r > d && policy == RankPolicy::Strict)
    throw NumericalError("basis rank " + std::to_string(r) +
                         " exceeds the numerical rank d = " + std::to_string(d) +
                         " of the training snapshots");

  basis.singular_values = sigma.head(d);
  basis.modes = svd.matrixU().leftCols(r);
  for (int k = 0; k < r; ++k) {
    Eigen::Index arg = 0;
    basis.modes.col(k).cwiseAbs().maxCoeff(&arg);
    if (basis.modes(arg, k) < 0.0) basis.modes.col(k) *= -1.0;
  }
  return basis;
}

double projection_error(const Matrix& snapshots, const PodBasis& basis) {
  if (snapshots.rows() != basis.size())
    throw ConfigError("snapshot rows do not match the basis size");
  Matrix x = snapshots.colwise() - basis.mean;
  const double norm = x.norm();
  if (!(norm > 0.0)) throw NumericalError("projection error of an all-zero snapshot matrix");
  const Matrix residual = x - basis.modes * (basis.modes.transpose() * x);
  return residual.norm() / norm;
}

double energy_fraction(const PodBasis& basis, int r) {
  const int d = basis.numerical_rank();
  if (r < 0 || r > d)
    throw ConfigError("energy rank " + std::to_string(r) + " outside [0, d = " +
                      std::to_string(d) + "]");
  const Vector s2 = basis.singular_values.array().square();
  return s2.head(r).sum() / s2.sum();
}

int rank_for_energy(const PodBasis& basis, double threshold) {
  const int d = basis.numerical_rank();
  for (int r = 1; r <= d; ++r)
    if (energy_fraction(basis, r) >= threshold) return r;
  return d;
}

}  // namespace opschwarz
