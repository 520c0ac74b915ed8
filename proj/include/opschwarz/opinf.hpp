#pragma once

#include <vector>

#include "opschwarz/linalg.hpp"
#include "opschwarz/pod.hpp"

namespace opschwarz {

/// First-order backward differences: column p-1 is (xhat_p - xhat_{p-1}) / dt.
Matrix estimate_derivatives(const Matrix& xhat, double dt);

/// Regression data for one subdomain. `states` and `inputs` hold all j
/// training samples; `derivatives` holds j-1 columns aligned with samples
/// 2..j, which are the only ones entering the residual.
struct TrainingData {
  Matrix states;       ///< r x j reduced states Psi^T (x_p - xbar)
  Matrix derivatives;  ///< r x (j-1)
  Matrix inputs;       ///< m x j boundary vectors [g ; gamma]

  int num_samples() const { return static_cast<int>(states.cols()); }
};

/// Projects the first `j` columns of `states` onto `basis` and pairs them
/// with the matching columns of `inputs`.
TrainingData make_training_data(const PodBasis& basis, const Matrix& states,
                                const Matrix& inputs, int j, double dt);

struct ReducedOperators {
  Matrix K;  ///< r x r
  Matrix B;  ///< r x m
};

/// Tikhonov-regularized operator inference:
///   min sum_p ||xdot_p - K xhat_p - B y_p||^2 + lambda^2 (||K||_F^2 + ||B||_F^2)
/// solved as a single least-squares problem for [K B] with the data rows
/// augmented by lambda I. With lambda = 0 the data matrix [Xhat; Y] must
/// have full row rank.
ReducedOperators infer_operators(const TrainingData& data, double lambda);

/// Value of the regularized objective above; used by tests and diagnostics.
double regression_objective(const TrainingData& data, const ReducedOperators& ops,
                            double lambda);

struct ReducedModel {
  PodBasis basis;
  Matrix K;
  Matrix B;
  std::vector<int> boundary_map;  ///< must equal the subdomain's FEM boundary ordering
  double lambda = 0.0;

  int rank() const { return basis.rank(); }
  int n_inputs() const { return static_cast<int>(B.cols()); }

  /// Psi_r xhat + xbar
  Vector reconstruct(const Vector& xhat) const;
  /// Psi_r^T (x - xbar)
  Vector project(const Vector& x) const;
};

/// Backward Euler for the reduced system with (I - dt K) factored once.
class ReducedStepper {
 public:
  ReducedStepper(const ReducedModel& model, double dt);

  Vector step(const Vector& xhat_n, const Vector& y_next) const;

 private:
  Matrix dt_b_;
  Eigen::PartialPivLU<Matrix> lu_;
};

Vector rom_step(const ReducedModel& model, const Vector& xhat_n, const Vector& y_next, double dt);

}  // namespace opschwarz
